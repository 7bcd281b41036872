//! Oriented multigraphs with external/internal vertices, canonical forms
//! with orientation signs, and isomorphism-free enumeration.
//!
//! Orientation data follows the ambient parity:
//! * even `n` — the stored edge order is the orientation;
//! * odd `n` — the stored endpoint order of every edge together with the
//!   id order of the internal vertices is the orientation (equivalently, an
//!   ordering of half-edges and of internal vertices: permuting whole edges
//!   is even on half-edges, flipping one edge is odd).
//!
//! A graph equals `(sign) x (same graph, other orientation)`; graphs that
//! admit an orientation-reversing automorphism are zero. With multigraphs
//! this includes two local cases: a parallel edge pair in even parity (edge
//! transposition) and a self-loop in odd parity (half-edge transposition).

mod canon;
mod enumerate;
mod format;

pub use canon::{automorphism_count, automorphisms, canonicalize};
pub use enumerate::{enumerate_graphs, Caps, EnumSpec};
pub(crate) use enumerate::connected_internal_parts;
pub use format::parse_graph_key;

use crate::exactalg::Rat;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_dimension(n: u32) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Whether external vertices are numbered slots (operadic arity) or
/// indistinguishable hairs quotiented by permutation with sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtKind {
    Labeled,
    UnorderedHairs,
}

pub type VertexId = u8;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex id {0} out of range")]
    VertexOutOfRange(usize),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("metadata mismatch: {0}")]
    MetadataMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A multigraph with `num_external` labeled external vertices (ids
/// `0..num_external`) and `num_internal` internal vertices (following ids),
/// with orientation carried by the stored edge list as described above.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedGraph {
    parity: Parity,
    ext_kind: ExtKind,
    num_external: u8,
    num_internal: u8,
    edges: Vec<(VertexId, VertexId)>,
}

pub const MAX_VERTICES: usize = 24;

impl OrientedGraph {
    pub fn new(
        parity: Parity,
        ext_kind: ExtKind,
        num_external: usize,
        num_internal: usize,
        edges: Vec<(VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        if num_external + num_internal > MAX_VERTICES {
            return Err(GraphError::CapExceeded(format!(
                "{} vertices exceeds the supported maximum {}",
                num_external + num_internal,
                MAX_VERTICES
            )));
        }
        let n = (num_external + num_internal) as usize;
        for &(a, b) in &edges {
            if a as usize >= n {
                return Err(GraphError::VertexOutOfRange(a as usize));
            }
            if b as usize >= n {
                return Err(GraphError::VertexOutOfRange(b as usize));
            }
        }
        Ok(OrientedGraph {
            parity,
            ext_kind,
            num_external: num_external as u8,
            num_internal: num_internal as u8,
            edges,
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }
    pub fn ext_kind(&self) -> ExtKind {
        self.ext_kind
    }
    pub fn num_external(&self) -> usize {
        self.num_external as usize
    }
    pub fn num_internal(&self) -> usize {
        self.num_internal as usize
    }
    pub fn num_vertices(&self) -> usize {
        self.num_external as usize + self.num_internal as usize
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }
    pub fn is_external(&self, v: VertexId) -> bool {
        v < self.num_external
    }
    pub fn is_internal(&self, v: VertexId) -> bool {
        !self.is_external(v)
    }

    /// Loop order `e - v + 1` of a connected graph (counting all vertices).
    pub fn loop_order(&self) -> i64 {
        self.edges.len() as i64 - self.num_vertices() as i64 + 1
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn self_loop_count(&self) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == b).count()
    }

    pub fn has_multi_edge(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &self.edges {
            let key = if a <= b { (a, b) } else { (b, a) };
            if !seen.insert(key) {
                return true;
            }
        }
        false
    }

    /// Connected components as a vertex partition (isolated vertices are
    /// their own components).
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for &(a, b) in &self.edges {
            let ra = find(&mut parent, a as usize);
            let rb = find(&mut parent, b as usize);
            parent[ra] = rb;
        }
        let mut comps: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            comps.entry(r).or_default().push(v as VertexId);
        }
        comps.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn every_component_touches_external(&self) -> bool {
        self.components()
            .iter()
            .all(|c| c.iter().any(|&v| self.is_external(v)))
    }

    /// Connected after deleting all external vertices (with at least one
    /// internal vertex), or a single edge between two externals — the
    /// generators of the graph algebras.
    pub fn is_internally_connected(&self) -> bool {
        if self.num_internal == 0 {
            return self.edges.len() == 1;
        }
        let mut parent: Vec<usize> = (0..self.num_vertices()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for &(a, b) in &self.edges {
            if self.is_internal(a) && self.is_internal(b) {
                let ra = find(&mut parent, a as usize);
                let rb = find(&mut parent, b as usize);
                parent[ra] = rb;
            }
        }
        let mut root = None;
        for v in self.num_external()..self.num_vertices() {
            let r = find(&mut parent, v);
            match root {
                None => root = Some(r),
                Some(r0) if r0 != r => return false,
                _ => {}
            }
        }
        true
    }

    /// No cut vertex (1-vertex irreducibility). Single-vertex graphs and the
    /// single edge count as irreducible.
    pub fn is_one_vertex_irreducible(&self) -> bool {
        let n = self.num_vertices();
        if n <= 2 {
            return self.is_connected();
        }
        if !self.is_connected() {
            return false;
        }
        for cut in 0..n {
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(parent: &mut Vec<usize>, x: usize) -> usize {
                if parent[x] != x {
                    let root = find(parent, parent[x]);
                    parent[x] = root;
                }
                parent[x]
            }
            for &(a, b) in &self.edges {
                if a as usize == cut || b as usize == cut {
                    continue;
                }
                let ra = find(&mut parent, a as usize);
                let rb = find(&mut parent, b as usize);
                parent[ra] = rb;
            }
            let mut root = None;
            let mut split = false;
            for v in 0..n {
                if v == cut {
                    continue;
                }
                let r = find(&mut parent, v);
                match root {
                    None => root = Some(r),
                    Some(r0) if r0 != r => {
                        split = true;
                        break;
                    }
                    _ => {}
                }
            }
            if split {
                return false;
            }
        }
        true
    }

    /// Relabel vertices by `perm` (old id -> new id), keeping the stored
    /// edge order and endpoint order. External labels may only move in
    /// `UnorderedHairs` mode; the caller is responsible for that.
    pub fn relabeled(&self, perm: &[VertexId]) -> OrientedGraph {
        let edges = self.edges.iter().map(|&(a, b)| (perm[a as usize], perm[b as usize])).collect();
        OrientedGraph { edges, ..*self }
    }

    pub fn key(&self) -> String {
        format::graph_key(self)
    }
}

/// Sign of an orientation move: `0` encodes the zero class.
pub type Sign = i8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCanonical {
    pub canonical: OrientedGraph,
    pub sign: Sign,
}

/// Parity of a permutation given as a slice of distinct indices.
pub fn permutation_parity(perm: &[usize]) -> Sign {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut sign: Sign = 1;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Metadata of a homogeneous linear combination of canonical graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradedMeta {
    pub parity: Parity,
    pub ext_kind: ExtKind,
    pub num_external: usize,
    pub degree: i64,
}

/// A finite formal `Q`-linear combination of canonical graphs in one
/// bidegree. Keys are canonical representatives with positive sign; zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedElement {
    pub meta: GradedMeta,
    terms: BTreeMap<OrientedGraph, Rat>,
}

impl GradedElement {
    pub fn zero(meta: GradedMeta) -> Self {
        GradedElement { meta, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OrientedGraph, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, g: &OrientedGraph) -> Rat {
        self.terms.get(g).cloned().unwrap_or_else(Rat::zero)
    }

    /// Accumulate `coeff` times the (possibly non-canonical) graph `g`.
    pub fn accumulate_raw(&mut self, g: &OrientedGraph, coeff: &Rat) {
        if coeff.is_zero() {
            return;
        }
        let sc = canonicalize(g);
        self.accumulate_canonical(sc, coeff);
    }

    pub fn accumulate_canonical(&mut self, sc: SignedCanonical, coeff: &Rat) {
        if sc.sign == 0 || coeff.is_zero() {
            return;
        }
        let signed = if sc.sign > 0 { coeff.clone() } else { -coeff.clone() };
        let entry = self.terms.entry(sc.canonical).or_insert_with(Rat::zero);
        *entry += signed;
        if entry.is_zero() {
            // avoid holding onto the key; fetch it back out
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GraphError> {
        if self.meta != other.meta {
            return Err(GraphError::MetadataMismatch(format!(
                "{:?} vs {:?}",
                self.meta, other.meta
            )));
        }
        let mut out = self.clone();
        for (g, c) in &other.terms {
            let entry = out.terms.entry(g.clone()).or_insert_with(Rat::zero);
            *entry += c;
        }
        out.terms.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return GradedElement::zero(self.meta);
        }
        let terms = self.terms.iter().map(|(g, v)| (g.clone(), v * c)).collect();
        GradedElement { meta: self.meta, terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GraphError> {
        self.add(&other.scale(&-Rat::from_integer(1.into())))
    }
}
