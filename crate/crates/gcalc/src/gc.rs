//! The graph complexes `GC_n^2` and `GC_n` as dg Lie algebras.
//!
//! Basis slices are indexed by loop order and vertex count; the cohomological
//! degree of a good graph is `n(v-1) - (n-1)e`, so within one loop order the
//! degree determines the vertex count: `v = deg + n + (n-1)(loop-1)`.
//!
//! The differential (vertex splitting) is realized as the transpose of the
//! edge-contraction matrix of the predual complex on the canonical bases;
//! the bracket is the insertion pre-Lie product, antisymmetrized.

use crate::exactalg::{ExactError, Rat, Rationals, SparseMatrix};
use crate::graphcore::{
    canonicalize, enumerate_graphs, Caps, EnumSpec, ExtKind, GradedElement, GradedMeta,
    GraphError, OrientedGraph, Parity, VertexId,
};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GcFlavor {
    pub n: u32,
    /// `true` selects `GC_n` (graphs with bivalent vertices set to zero),
    /// `false` the full `GC_n^2`.
    pub reduced: bool,
}

impl GcFlavor {
    pub fn new(n: u32, reduced: bool) -> Self {
        assert!(n >= 2, "ambient dimension must be at least 2");
        GcFlavor { n, reduced }
    }

    pub fn parity(&self) -> Parity {
        Parity::of_dimension(self.n)
    }

    pub fn min_valence(&self) -> usize {
        if self.reduced {
            3
        } else {
            2
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GcError {
    #[error("not admissible for this flavor: {0}")]
    NotAdmissible(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Good graph test: connected, one-vertex irreducible, minimum valence per
/// flavor, no external vertices.
pub fn is_good(g: &OrientedGraph, flavor: GcFlavor) -> bool {
    g.num_external() == 0
        && g.parity() == flavor.parity()
        && g.num_internal() >= 1
        && g.is_connected()
        && g.is_one_vertex_irreducible()
        && (0..g.num_vertices()).all(|v| g.valence(v as VertexId) >= flavor.min_valence())
}

/// Cohomological degree `n(v-1) - (n-1)e` on the dual (Lie algebra) side.
pub fn gc_degree(g: &OrientedGraph, flavor: GcFlavor) -> Result<i64, GcError> {
    if !is_good(g, flavor) {
        return Err(GcError::NotAdmissible(g.key()));
    }
    Ok(degree_of(flavor, g.num_vertices() as i64, g.num_edges() as i64))
}

pub fn degree_of(flavor: GcFlavor, vertices: i64, edges: i64) -> i64 {
    flavor.n as i64 * (vertices - 1) - (flavor.n as i64 - 1) * edges
}

/// Vertex count of the degree-`deg` slice in loop order `loop_order`.
pub fn vertices_for_degree(flavor: GcFlavor, loop_order: i64, deg: i64) -> i64 {
    deg + flavor.n as i64 + (flavor.n as i64 - 1) * (loop_order - 1)
}

#[derive(Debug, Clone)]
pub struct BasisTable {
    pub flavor: GcFlavor,
    pub loop_order: i64,
    pub degree: i64,
    pub graphs: Arc<Vec<OrientedGraph>>,
}

impl BasisTable {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
    pub fn index_of(&self, g: &OrientedGraph) -> Option<usize> {
        self.graphs.binary_search(g).ok()
    }
}

/// Memoized bases and contraction matrices for one flavor.
pub struct GcContext {
    pub flavor: GcFlavor,
    pub caps: Caps,
    bases: Mutex<HashMap<(i64, i64), Arc<Vec<OrientedGraph>>>>,
    contractions: Mutex<HashMap<(i64, i64), Arc<SparseMatrix<Rationals>>>>,
}

impl GcContext {
    pub fn new(flavor: GcFlavor, caps: Caps) -> Self {
        GcContext {
            flavor,
            caps,
            bases: Mutex::new(HashMap::new()),
            contractions: Mutex::new(HashMap::new()),
        }
    }

    /// Canonical basis of the `(loop_order, vertices)` slice, sorted.
    pub fn slice_basis(&self, loop_order: i64, vertices: i64) -> Result<Arc<Vec<OrientedGraph>>, GcError> {
        if let Some(b) = self.bases.lock().unwrap().get(&(loop_order, vertices)) {
            return Ok(b.clone());
        }
        let edges = vertices + loop_order - 1;
        let basis = if vertices < 1 || edges < 0 || loop_order < 1 {
            Vec::new()
        } else {
            let spec = EnumSpec {
                parity: self.flavor.parity(),
                ext_kind: ExtKind::Labeled,
                num_external: 0,
                num_internal: vertices as usize,
                num_edges: edges as usize,
                min_internal_valence: self.flavor.min_valence(),
                connected: true,
                components_touch_external: false,
                one_vertex_irreducible: true,
                internally_connected: false,
                allow_self_loops: true,
                allow_multi_edges: true,
            };
            enumerate_graphs(&spec, &self.caps)?
        };
        let arc = Arc::new(basis);
        self.bases.lock().unwrap().insert((loop_order, vertices), arc.clone());
        Ok(arc)
    }

    pub fn basis_table(&self, loop_order: i64, degree: i64) -> Result<BasisTable, GcError> {
        let v = vertices_for_degree(self.flavor, loop_order, degree);
        Ok(BasisTable {
            flavor: self.flavor,
            loop_order,
            degree,
            graphs: self.slice_basis(loop_order, v)?,
        })
    }

    /// Edge-contraction matrix of the predual complex,
    /// `slice(loop, v) -> slice(loop, v-1)`.
    pub fn contraction_matrix(
        &self,
        loop_order: i64,
        vertices: i64,
    ) -> Result<Arc<SparseMatrix<Rationals>>, GcError> {
        if let Some(m) = self.contractions.lock().unwrap().get(&(loop_order, vertices)) {
            return Ok(m.clone());
        }
        let domain = self.slice_basis(loop_order, vertices)?;
        let target = self.slice_basis(loop_order, vertices - 1)?;
        let lookup: HashMap<&OrientedGraph, usize> =
            target.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut triplets = Vec::new();
        for (col, g) in domain.iter().enumerate() {
            for (h, s) in contract_all_edges(g) {
                let sc = canonicalize(&h);
                if sc.sign == 0 {
                    continue;
                }
                if let Some(&row) = lookup.get(&sc.canonical) {
                    triplets.push((row, col, Rat::from_integer(((s * sc.sign) as i64).into())));
                }
            }
        }
        let m = Arc::new(SparseMatrix::from_triplets(
            Rationals,
            target.len(),
            domain.len(),
            triplets,
        )?);
        self.contractions.lock().unwrap().insert((loop_order, vertices), m.clone());
        Ok(m)
    }

    /// The splitting differential `slice(loop, v) -> slice(loop, v+1)` as a
    /// matrix: the transpose of edge contraction under the canonical pairing.
    pub fn differential_matrix(
        &self,
        loop_order: i64,
        vertices: i64,
    ) -> Result<SparseMatrix<Rationals>, GcError> {
        Ok(self.contraction_matrix(loop_order, vertices + 1)?.transpose())
    }

    pub fn differential(&self, x: &GradedElement) -> Result<GradedElement, GcError> {
        let meta = GradedMeta { degree: x.meta.degree + 1, ..x.meta };
        let mut out = GradedElement::zero(meta);
        // group terms by loop order; each slice maps independently
        let mut by_loop: HashMap<i64, Vec<(&OrientedGraph, &Rat)>> = HashMap::new();
        for (g, c) in x.terms() {
            by_loop.entry(g.loop_order()).or_default().push((g, c));
        }
        for (lo, terms) in by_loop {
            let v = terms[0].0.num_vertices() as i64;
            let domain = self.slice_basis(lo, v)?;
            let target = self.slice_basis(lo, v + 1)?;
            let m = self.differential_matrix(lo, v)?;
            let mut vec = vec![Rat::zero(); domain.len()];
            for (g, c) in terms {
                let idx = domain
                    .binary_search(g)
                    .map_err(|_| GcError::NotAdmissible(g.key()))?;
                vec[idx] += *&c;
            }
            let image = m.apply(&vec)?;
            for (i, c) in image.into_iter().enumerate() {
                if !c.is_zero() {
                    out.accumulate_raw(&target[i], &c);
                }
            }
        }
        Ok(out)
    }

    /// Cohomology dimensions per degree over `Q`.
    pub fn cohomology(
        &self,
        loop_order: i64,
        degrees: impl IntoIterator<Item = i64>,
    ) -> Result<Vec<CohomologyRow>, GcError> {
        let mut out = Vec::new();
        for deg in degrees {
            let v = vertices_for_degree(self.flavor, loop_order, deg);
            let dim = self.slice_basis(loop_order, v)?.len();
            let d_in = self.differential_matrix(loop_order, v - 1)?;
            let d_out = self.differential_matrix(loop_order, v)?;
            let h = crate::exactalg::cohomology_dim(&d_in, &d_out)?;
            out.push(CohomologyRow {
                loop_order,
                degree: deg,
                dim,
                rank_in: d_in.rank(),
                rank_out: d_out.rank(),
                cohomology: h,
            });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohomologyRow {
    pub loop_order: i64,
    pub degree: i64,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub cohomology: usize,
}

/// All single-edge contractions of `g` with the orientation sign of the
/// move. Contracting the edge at position `k` carries `(-1)^k` in even
/// parity; in odd parity the sign tracks the removal of the merged vertex
/// from the vertex order and the endpoint orientation of the edge.
pub(crate) fn contract_all_edges(g: &OrientedGraph) -> Vec<(OrientedGraph, i8)> {
    let mut out = Vec::new();
    for k in 0..g.num_edges() {
        let (a, b) = g.edges()[k];
        if a == b {
            continue;
        }
        if let Some((h, s)) = contract_edge(g, k) {
            out.push((h, s));
        }
    }
    out
}

/// Contract edge `k` (endpoints distinct). The surviving endpoint is the
/// first stored endpoint, except that external vertices always survive.
pub(crate) fn contract_edge(g: &OrientedGraph, k: usize) -> Option<(OrientedGraph, i8)> {
    let (a, b) = g.edges()[k];
    if a == b {
        return None;
    }
    let mut sign: i8 = 1;
    let (keep, gone) = if g.is_external(b) {
        if g.is_external(a) {
            return None; // external-external edges are never contracted
        }
        // orient so the external survives
        if g.parity() == Parity::Odd {
            sign = -sign;
        }
        (b, a)
    } else {
        (a, b)
    };
    match g.parity() {
        Parity::Even => {
            if k % 2 == 1 {
                sign = -sign;
            }
        }
        Parity::Odd => {
            // remove `gone` from the internal vertex order
            let later = (gone + 1..g.num_vertices() as u8).filter(|&v| g.is_internal(v)).count();
            if later % 2 == 1 {
                sign = -sign;
            }
        }
    }
    let mut edges = Vec::with_capacity(g.num_edges() - 1);
    let map = |v: VertexId| -> VertexId {
        let w = if v == gone { keep } else { v };
        if w > gone {
            w - 1
        } else {
            w
        }
    };
    for (i, &(x, y)) in g.edges().iter().enumerate() {
        if i == k {
            continue;
        }
        edges.push((map(x), map(y)));
    }
    let h = OrientedGraph::new(
        g.parity(),
        g.ext_kind(),
        g.num_external(),
        g.num_internal() - 1,
        edges,
    )
    .expect("contraction stays in caps");
    Some((h, sign))
}

// ---------------------------------------------------------------------------
// Lie structure
// ---------------------------------------------------------------------------

pub fn element_from_graph(g: &OrientedGraph, flavor: GcFlavor) -> Result<GradedElement, GcError> {
    let deg = gc_degree(g, flavor)?;
    let meta = GradedMeta {
        parity: flavor.parity(),
        ext_kind: ExtKind::Labeled,
        num_external: 0,
        degree: deg,
    };
    let mut x = GradedElement::zero(meta);
    x.accumulate_raw(g, &Rat::one());
    Ok(x)
}

/// Insertion pre-Lie product `x o y`: replace each vertex of `x` by `y`,
/// reconnecting the half-edges at that vertex to vertices of `y` in all
/// ways. Orientations concatenate: `x`'s data first, `y`'s appended.
pub fn insertion_product(x: &GradedElement, y: &GradedElement, flavor: GcFlavor) -> GradedElement {
    let meta = GradedMeta { degree: x.meta.degree + y.meta.degree, ..x.meta };
    let mut out = GradedElement::zero(meta);
    for (gx, cx) in x.terms() {
        for (gy, cy) in y.terms() {
            let coeff = cx * cy;
            for v in 0..gx.num_vertices() as VertexId {
                insert_at_vertex(gx, v, gy, &mut |h, s| {
                    let c = if s > 0 { coeff.clone() } else { -coeff.clone() };
                    let sc = canonicalize(&h);
                    if sc.sign != 0 && is_good(&sc.canonical, flavor) {
                        out.accumulate_canonical(sc, &c);
                    }
                });
            }
        }
    }
    out
}

/// Graph-level insertion of `gy` at the (internal) vertex `v` of `gx`,
/// calling `emit` for every reconnection of the half-edges at `v`.
///
/// Vertex order of the result: `gx`'s vertices with `v` removed, then `gy`'s
/// vertices; edge order: `gx`'s edges then `gy`'s. In odd parity the removal
/// of `v` contributes `(-1)^(internal vertices after v)`.
pub(crate) fn insert_at_vertex(
    gx: &OrientedGraph,
    v: VertexId,
    gy: &OrientedGraph,
    emit: &mut impl FnMut(OrientedGraph, i8),
) {
    let nx = gx.num_vertices() as u8;
    let ny = gy.num_vertices() as u8;
    let mut base_sign: i8 = 1;
    if gx.parity() == Parity::Odd {
        let later = (v + 1..nx).filter(|&w| gx.is_internal(w)).count();
        if later % 2 == 1 {
            base_sign = -base_sign;
        }
    }
    // target ids: gx vertices keep ids below v, shift above; gy vertices
    // appended starting at nx - 1
    let map_x = |w: VertexId| -> VertexId {
        if w > v {
            w - 1
        } else {
            w
        }
    };
    let map_y = |w: VertexId| -> VertexId { nx - 1 + w };

    // positions of half-edges at v, in half-edge order
    let mut slots: Vec<(usize, bool)> = Vec::new(); // (edge index, endpoint is second)
    for (i, &(a, b)) in gx.edges().iter().enumerate() {
        if a == v {
            slots.push((i, false));
        }
        if b == v {
            slots.push((i, true));
        }
    }
    let k = slots.len();
    let mut assignment = vec![0 as VertexId; k];
    loop {
        // build the glued graph for this reconnection
        let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(gx.num_edges() + gy.num_edges());
        for &(a, b) in gx.edges() {
            edges.push((
                if a == v { 0 } else { map_x(a) },
                if b == v { 0 } else { map_x(b) },
            ));
        }
        for (slot, &target) in assignment.iter().enumerate() {
            let (i, second) = slots[slot];
            if second {
                edges[i].1 = map_y(target);
            } else {
                edges[i].0 = map_y(target);
            }
        }
        for &(a, b) in gy.edges() {
            edges.push((map_y(a), map_y(b)));
        }
        let h = OrientedGraph::new(
            gx.parity(),
            gx.ext_kind(),
            gx.num_external(),
            gx.num_internal() + gy.num_internal() - 1,
            edges,
        )
        .expect("insertion stays in caps");
        emit(h, base_sign);

        // next assignment in lexicographic order
        let mut pos = 0;
        loop {
            if pos == k {
                return;
            }
            assignment[pos] += 1;
            if assignment[pos] < ny {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
        if k == 0 {
            return;
        }
    }
}

/// Koszul sign `(-1)^(|x||y|)`.
fn koszul(a: i64, b: i64) -> i8 {
    if (a % 2 != 0) && (b % 2 != 0) {
        -1
    } else {
        1
    }
}

/// The insertion Lie bracket `[x, y] = x o y - (-1)^{|x||y|} y o x`.
pub fn gc_bracket(x: &GradedElement, y: &GradedElement, flavor: GcFlavor) -> GradedElement {
    let xy = insertion_product(x, y, flavor);
    let yx = insertion_product(y, x, flavor);
    let k = koszul(x.meta.degree, y.meta.degree);
    xy.add(&yx.scale(&Rat::from_integer((-(k as i64)).into())))
        .expect("matching metadata")
}

/// `[L, x] = (loop order) x`, the grading generator action.
pub fn l_bracket(x: &GradedElement) -> GradedElement {
    let mut out = GradedElement::zero(x.meta);
    for (g, c) in x.terms() {
        let scaled = c * Rat::from_integer(g.loop_order().into());
        out.accumulate_raw(g, &scaled);
    }
    out
}

/// Projection `GC_n^2 -> GC_n`: kill graphs with bivalent vertices.
pub fn reduce(x: &GradedElement, n: u32) -> GradedElement {
    let flavor = GcFlavor::new(n, true);
    let mut out = GradedElement::zero(x.meta);
    for (g, c) in x.terms() {
        if is_good(g, flavor) {
            out.accumulate_raw(g, c);
        }
    }
    out
}
