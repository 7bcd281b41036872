//! The dg Hopf cooperads `Graphs_n^2` and `Graphs_n`: admissible graphs on
//! numbered external vertices, edge-contraction differential, gluing
//! product, subgraph-contraction cocompositions, Lambda operations, the
//! generator decomposition, and the projection to `e_n = H^*(D_n)`.

mod action;
mod en;
mod truncate;

pub use action::{
    ad_once, exp_ad, gc_action, morphism_from_cocycle, nilpotency_steps, scalar_act, ActionCaps,
};
pub use en::{en_normal_form, en_weight_dimension, project_en, EnElement};
pub use truncate::{truncate_tau, truncate_tau_sharp, ComplexSlice, QuotientPresentation};

use crate::exactalg::Rat;
use crate::gc;
use crate::graphcore::{
    canonicalize, ExtKind, GradedElement, GradedMeta, GraphError, OrientedGraph, Parity, VertexId,
};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphsFlavor {
    pub n: u32,
    /// `true` selects `Graphs_n` (bivalent internal vertices set to zero).
    pub reduced: bool,
}

impl GraphsFlavor {
    pub fn new(n: u32, reduced: bool) -> Self {
        assert!(n >= 2);
        GraphsFlavor { n, reduced }
    }
    pub fn parity(&self) -> Parity {
        Parity::of_dimension(self.n)
    }
    pub fn min_internal_valence(&self) -> usize {
        if self.reduced {
            3
        } else {
            2
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GraphsOpError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("flavor mismatch")]
    FlavorMismatch,
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("not an order-preserving injection")]
    NotInjectionOrNotMonotone,
    #[error("exp ad did not terminate within {0} iterations")]
    NotLocallyNilpotent(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Exact(#[from] crate::exactalg::ExactError),
}

pub fn is_admissible(g: &OrientedGraph, flavor: GraphsFlavor) -> bool {
    g.ext_kind() == ExtKind::Labeled
        && g.parity() == flavor.parity()
        && g.num_external() >= 1
        && (g.num_external()..g.num_vertices())
            .all(|v| g.valence(v as VertexId) >= flavor.min_internal_valence())
        && g.every_component_touches_external()
        // self-loops at external vertices span a differential Hopf ideal and
        // are set to zero; internal tadpoles stay
        && g.edges().iter().all(|&(a, b)| a != b || g.is_internal(a))
}

/// Cohomological degree `(n-1)e - n i` of an admissible graph.
pub fn graphs_degree(g: &OrientedGraph, flavor: GraphsFlavor) -> i64 {
    (flavor.n as i64 - 1) * g.num_edges() as i64 - flavor.n as i64 * g.num_internal() as i64
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphsElement {
    pub flavor: GraphsFlavor,
    pub inner: GradedElement,
}

impl GraphsElement {
    pub fn zero(flavor: GraphsFlavor, arity: usize, degree: i64) -> Self {
        let meta = GradedMeta {
            parity: flavor.parity(),
            ext_kind: ExtKind::Labeled,
            num_external: arity,
            degree,
        };
        GraphsElement { flavor, inner: GradedElement::zero(meta) }
    }

    pub fn from_graph(g: &OrientedGraph, flavor: GraphsFlavor) -> Result<Self, GraphsOpError> {
        if !is_admissible(g, flavor) {
            return Err(GraphsOpError::NotAdmissible(g.key()));
        }
        let mut out = GraphsElement::zero(flavor, g.num_external(), graphs_degree(g, flavor));
        out.inner.accumulate_raw(g, &Rat::one());
        Ok(out)
    }

    /// The algebra unit: `r` isolated external vertices.
    pub fn unit(flavor: GraphsFlavor, arity: usize) -> Self {
        let g = OrientedGraph::new(flavor.parity(), ExtKind::Labeled, arity, 0, vec![])
            .expect("unit graph");
        GraphsElement::from_graph(&g, flavor).expect("unit is admissible")
    }

    pub fn arity(&self) -> usize {
        self.inner.meta.num_external
    }
    pub fn degree(&self) -> i64 {
        self.inner.meta.degree
    }
    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Accumulate a raw graph term, dropping inadmissible and zero-sign
    /// graphs (the projection that realizes both quotients).
    pub fn accumulate(&mut self, g: &OrientedGraph, c: &Rat) {
        if !is_admissible(g, self.flavor) {
            return;
        }
        self.inner.accumulate_raw(g, c);
    }

    pub fn add(&self, other: &Self) -> Result<Self, GraphsOpError> {
        if self.flavor != other.flavor {
            return Err(GraphsOpError::FlavorMismatch);
        }
        Ok(GraphsElement { flavor: self.flavor, inner: self.inner.add(&other.inner)? })
    }

    pub fn scale(&self, c: &Rat) -> Self {
        GraphsElement { flavor: self.flavor, inner: self.inner.scale(c) }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GraphsOpError> {
        self.add(&other.scale(&-Rat::one()))
    }
}

/// Edge contraction: every edge with at least one internal endpoint is
/// contracted (internal pairs merge into an internal vertex, an
/// internal-external pair merges into the external vertex); external-external
/// edges are never contracted. Raises the degree by one.
pub fn graphs_differential(x: &GraphsElement) -> GraphsElement {
    let mut out = GraphsElement::zero(x.flavor, x.arity(), x.degree() + 1);
    for (g, c) in x.inner.terms() {
        for (h, s) in gc::contract_all_edges(g) {
            let signed = if s > 0 { c.clone() } else { -c.clone() };
            out.accumulate(&h, &signed);
        }
    }
    out
}

/// Gluing along external vertices; orientation data concatenates
/// (`x` first, `y` appended).
pub fn graphs_product(x: &GraphsElement, y: &GraphsElement) -> Result<GraphsElement, GraphsOpError> {
    if x.arity() != y.arity() {
        return Err(GraphsOpError::ArityMismatch(x.arity(), y.arity()));
    }
    if x.flavor != y.flavor {
        return Err(GraphsOpError::FlavorMismatch);
    }
    let r = x.arity();
    let mut out = GraphsElement::zero(x.flavor, r, x.degree() + y.degree());
    for (gx, cx) in x.inner.terms() {
        for (gy, cy) in y.inner.terms() {
            let shift = gx.num_internal() as u8;
            let mut edges = gx.edges().to_vec();
            for &(a, b) in gy.edges() {
                let map = |v: VertexId| if v < r as u8 { v } else { v + shift };
                edges.push((map(a), map(b)));
            }
            let glued = OrientedGraph::new(
                gx.parity(),
                ExtKind::Labeled,
                r,
                gx.num_internal() + gy.num_internal(),
                edges,
            )
            .expect("product stays in caps");
            out.accumulate(&glued, &(cx * cy));
        }
    }
    Ok(out)
}

/// A sum of two-factor tensors with graph keys, the value type of the
/// cocompositions.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement {
    pub flavor: GraphsFlavor,
    pub left_arity: usize,
    pub right_arity: usize,
    pub terms: BTreeMap<(OrientedGraph, OrientedGraph), Rat>,
}

impl TensorElement {
    fn zero(flavor: GraphsFlavor, left_arity: usize, right_arity: usize) -> Self {
        TensorElement { flavor, left_arity, right_arity, terms: BTreeMap::new() }
    }

    fn accumulate(&mut self, left: &OrientedGraph, right: &OrientedGraph, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let scl = canonicalize(left);
        let scr = canonicalize(right);
        if scl.sign == 0 || scr.sign == 0 {
            return;
        }
        let sign = (scl.sign * scr.sign) as i64;
        let v = c * Rat::from_integer(sign.into());
        let entry = self
            .terms
            .entry((scl.canonical, scr.canonical))
            .or_insert_with(Rat::zero);
        *entry += v;
        if entry.is_zero() {
            self.terms.retain(|_, w| !w.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Cocomposition dual to plugging an `l`-ary operation into slot `i`
/// (1-based): the induced subgraph over the external block
/// `{i, ..., i+l-1}` together with any internal vertex subset whose induced
/// subgraph is admissible is extracted as the right factor and contracted to
/// the external vertex `i` in the left factor.
pub fn graphs_cocomposition(
    x: &GraphsElement,
    i: usize,
    l: usize,
) -> Result<TensorElement, GraphsOpError> {
    let r = x.arity();
    if l < 1 || l > r || i < 1 || i + l - 1 > r {
        return Err(GraphsOpError::ArityMismatch(i + l - 1, r));
    }
    let k = r - l + 1;
    let mut out = TensorElement::zero(x.flavor, k, l);
    for (g, c) in x.inner.terms() {
        for (left, right, sign) in split_graph(g, i, l, x.flavor) {
            let signed = if sign > 0 { c.clone() } else { -c.clone() };
            out.accumulate(&left, &right, &signed);
        }
    }
    Ok(out)
}

/// All admissible splittings of a single graph for the block
/// `{i, ..., i+l-1}` (1-based). The extracted part sits over the block:
/// extracted internal vertices may not have edges leaving the extracted
/// part (edges may leave only from the block externals). Signs: the edge
/// order (even parity) or the internal vertex order (odd parity) is
/// shuffled into left-block-then-right-block position.
fn split_graph(
    g: &OrientedGraph,
    i: usize,
    l: usize,
    flavor: GraphsFlavor,
) -> Vec<(OrientedGraph, OrientedGraph, i8)> {
    let r = g.num_external();
    let ni = g.num_internal();
    let k = r - l + 1;
    let block_lo = (i - 1) as u8;
    let block_hi = (i + l - 1) as u8; // exclusive
    let in_block = |v: VertexId| v >= block_lo && v < block_hi;
    let mut out = Vec::new();

    'mask: for mask in 0..(1u32 << ni) {
        let extracted = |v: VertexId| -> bool {
            if g.is_external(v) {
                in_block(v)
            } else {
                mask >> (v - r as u8) & 1 == 1
            }
        };
        for &(a, b) in g.edges() {
            let ea = extracted(a);
            let eb = extracted(b);
            if (ea && !eb && g.is_internal(a)) || (eb && !ea && g.is_internal(b)) {
                continue 'mask;
            }
        }
        // left external relabeling: externals before the block keep their
        // id, the block becomes i-1, externals after shift down by l-1
        let left_ext = |v: VertexId| -> VertexId {
            if v < block_lo {
                v
            } else if in_block(v) {
                block_lo
            } else {
                v - (l as u8 - 1)
            }
        };
        let mut left_internal_ids: Vec<VertexId> = Vec::new();
        let mut right_internal_ids: Vec<VertexId> = Vec::new();
        for v in r as u8..(r + ni) as u8 {
            if extracted(v) {
                right_internal_ids.push(v);
            } else {
                left_internal_ids.push(v);
            }
        }
        let left_int = |v: VertexId| -> VertexId {
            k as u8 + left_internal_ids.iter().position(|&w| w == v).unwrap() as u8
        };
        let right_int = |v: VertexId| -> VertexId {
            l as u8 + right_internal_ids.iter().position(|&w| w == v).unwrap() as u8
        };
        let right_ext = |v: VertexId| -> VertexId { v - block_lo };

        let mut left_edges = Vec::new();
        let mut right_edges = Vec::new();
        let mut shuffle: Vec<usize> = Vec::with_capacity(g.num_edges());
        let mut n_right_edges_seen = 0usize;
        for &(a, b) in g.edges() {
            let ea = extracted(a);
            let eb = extracted(b);
            if ea && eb {
                let map = |v: VertexId| if g.is_external(v) { right_ext(v) } else { right_int(v) };
                right_edges.push((map(a), map(b)));
                shuffle.push(usize::MAX); // placeholder, fixed below
                n_right_edges_seen += 1;
            } else {
                let map = |v: VertexId| {
                    if extracted(v) {
                        block_lo
                    } else if g.is_external(v) {
                        left_ext(v)
                    } else {
                        left_int(v)
                    }
                };
                left_edges.push((map(a), map(b)));
                shuffle.push(left_edges.len() - 1);
            }
        }
        let _ = n_right_edges_seen;
        // complete the shuffle permutation: right edges follow left edges
        let n_left = left_edges.len();
        let mut right_seen = 0;
        for s in shuffle.iter_mut() {
            if *s == usize::MAX {
                *s = n_left + right_seen;
                right_seen += 1;
            }
        }

        let left = OrientedGraph::new(
            g.parity(),
            ExtKind::Labeled,
            k,
            left_internal_ids.len(),
            left_edges,
        )
        .expect("split stays in caps");
        let right = OrientedGraph::new(
            g.parity(),
            ExtKind::Labeled,
            l,
            right_internal_ids.len(),
            right_edges,
        )
        .expect("split stays in caps");

        if !is_admissible(&left, flavor) || !is_admissible(&right, flavor) {
            continue;
        }

        let sign = match g.parity() {
            Parity::Even => crate::graphcore::permutation_parity(&shuffle),
            Parity::Odd => {
                // shuffle of the internal vertex order into (left, right)
                let mut perm: Vec<usize> = Vec::with_capacity(ni);
                for v in r as u8..(r + ni) as u8 {
                    let pos = if extracted(v) {
                        left_internal_ids.len()
                            + right_internal_ids.iter().position(|&w| w == v).unwrap()
                    } else {
                        left_internal_ids.iter().position(|&w| w == v).unwrap()
                    };
                    perm.push(pos);
                }
                crate::graphcore::permutation_parity(&perm)
            }
        };
        out.push((left, right, sign));
    }
    out
}

/// Lambda operation `u_*`: relabel externals along an order-preserving
/// injection `u : {1..k} -> {1..l}` (0-based in the slice), the new external
/// vertices isolated.
pub fn lambda_op(x: &GraphsElement, u: &[usize], l: usize) -> Result<GraphsElement, GraphsOpError> {
    let kk = x.arity();
    if u.len() != kk {
        return Err(GraphsOpError::NotInjectionOrNotMonotone);
    }
    for w in u.windows(2) {
        if w[0] >= w[1] {
            return Err(GraphsOpError::NotInjectionOrNotMonotone);
        }
    }
    if u.iter().any(|&t| t >= l) {
        return Err(GraphsOpError::NotInjectionOrNotMonotone);
    }
    let mut out = GraphsElement::zero(x.flavor, l, x.degree());
    for (g, c) in x.inner.terms() {
        let map = |v: VertexId| -> VertexId {
            if g.is_external(v) {
                u[v as usize] as VertexId
            } else {
                (v as usize - kk + l) as VertexId
            }
        };
        let edges = g.edges().iter().map(|&(a, b)| (map(a), map(b))).collect();
        let relabeled =
            OrientedGraph::new(g.parity(), ExtKind::Labeled, l, g.num_internal(), edges)
                .expect("lambda stays in caps");
        out.accumulate(&relabeled, c);
    }
    Ok(out)
}

/// Factor each term into internally connected generators on the same
/// external set. The factors are canonical; the sign of sorting the edge
/// data into factor blocks is absorbed into the coefficient.
pub fn ig_decompose(x: &GraphsElement) -> Vec<(Rat, Vec<OrientedGraph>)> {
    let mut out = Vec::new();
    for (g, c) in x.inner.terms() {
        let r = g.num_external();
        // union-find over internal vertices through internal-internal edges;
        // external-external edges are their own factors
        let mut groups: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new(); // root -> edge indices
        let mut parent: Vec<VertexId> = (0..g.num_vertices() as u8).collect();
        fn find(parent: &mut Vec<VertexId>, x: VertexId) -> VertexId {
            if parent[x as usize] != x {
                let root = find(parent, parent[x as usize]);
                parent[x as usize] = root;
            }
            parent[x as usize]
        }
        for &(a, b) in g.edges() {
            if g.is_internal(a) && g.is_internal(b) {
                let ra = find(&mut parent, a);
                let rb = find(&mut parent, b);
                parent[ra as usize] = rb;
            }
        }
        let mut ext_edge_count = 0usize;
        for (idx, &(a, b)) in g.edges().iter().enumerate() {
            if g.is_internal(a) {
                let root = find(&mut parent, a);
                groups.entry(root).or_default().push(idx);
            } else if g.is_internal(b) {
                let root = find(&mut parent, b);
                groups.entry(root).or_default().push(idx);
            } else {
                // external-external edge: a singleton factor keyed uniquely
                groups.entry((g.num_vertices() + ext_edge_count) as u8).or_default().push(idx);
                ext_edge_count += 1;
            }
        }
        // sign of sorting the edge order into the block order (even parity);
        // in odd parity the internal vertex order shuffles instead
        let blocks: Vec<&Vec<usize>> = groups.values().collect();
        let mut edge_perm: Vec<usize> = vec![0; g.num_edges()];
        let mut pos = 0usize;
        for block in &blocks {
            for &e in block.iter() {
                edge_perm[e] = pos;
                pos += 1;
            }
        }
        let mut sign = match g.parity() {
            Parity::Even => crate::graphcore::permutation_parity(&edge_perm),
            Parity::Odd => {
                let mut vantage: Vec<VertexId> = Vec::new();
                for root in groups.keys() {
                    for v in r as u8..g.num_vertices() as u8 {
                        if find(&mut parent, v) == *root {
                            vantage.push(v);
                        }
                    }
                }
                let perm: Vec<usize> =
                    (0..vantage.len()).map(|slot| vantage[slot] as usize - r).collect();
                // perm maps new position -> old index; parity is the same
                crate::graphcore::permutation_parity(&perm)
            }
        };
        let mut factors = Vec::new();
        for (root, edge_idxs) in &groups {
            let mut internals: Vec<VertexId> = Vec::new();
            for v in r as u8..g.num_vertices() as u8 {
                if find(&mut parent, v) == *root {
                    internals.push(v);
                }
            }
            let map = |v: VertexId| -> VertexId {
                if g.is_external(v) {
                    v
                } else {
                    (r + internals.iter().position(|&w| w == v).unwrap()) as u8
                }
            };
            let edges: Vec<(VertexId, VertexId)> = edge_idxs
                .iter()
                .map(|&idx| {
                    let (a, b) = g.edges()[idx];
                    (map(a), map(b))
                })
                .collect();
            let factor = OrientedGraph::new(g.parity(), ExtKind::Labeled, r, internals.len(), edges)
                .expect("factor stays in caps");
            let sc = canonicalize(&factor);
            sign *= sc.sign;
            factors.push(sc.canonical);
        }
        out.push((c * Rat::from_integer((sign as i64).into()), factors));
    }
    out
}

/// Quotient `Graphs_n^2 -> Graphs_n`: kill terms with bivalent internal
/// vertices.
pub fn reduce_element(x: &GraphsElement) -> GraphsElement {
    let flavor = GraphsFlavor::new(x.flavor.n, true);
    let mut out = GraphsElement::zero(flavor, x.arity(), x.degree());
    for (g, c) in x.inner.terms() {
        out.accumulate(g, c);
    }
    out
}

#[cfg(test)]
mod tests;
