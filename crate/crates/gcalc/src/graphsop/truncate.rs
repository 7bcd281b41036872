//! Truncation of cochain complexes and of the graph algebras.
//!
//! `tau` kills negative degrees and replaces degree zero by the cokernel of
//! the incoming differential; `tau_sharp` quotients a graded algebra by the
//! ideal generated by the negative part and its differential, computed
//! arity-wise on the span of graphs up to an edge cap. Both return quotient
//! presentations (ambient bases plus relation ranks), not closed formulas.

use super::{graphs_differential, graphs_product, GraphsElement, GraphsFlavor, GraphsOpError};
use crate::exactalg::{Rat, Rationals, SparseMatrix};
use crate::graphcore::{enumerate_graphs, Caps, EnumSpec, ExtKind, OrientedGraph};
use std::collections::BTreeMap;

/// A finite consecutive slice of a cochain complex: `dims[t]` in degree
/// `lowest + t`, `differentials[t] : degree t -> degree t+1` (so it has
/// `dims[t]` columns and `dims[t+1]` rows).
#[derive(Debug, Clone)]
pub struct ComplexSlice {
    pub lowest: i64,
    pub dims: Vec<usize>,
    pub differentials: Vec<SparseMatrix<Rationals>>,
}

impl ComplexSlice {
    pub fn degree_index(&self, degree: i64) -> Option<usize> {
        let i = degree - self.lowest;
        if i < 0 || i as usize >= self.dims.len() {
            None
        } else {
            Some(i as usize)
        }
    }
}

/// A degreewise quotient: ambient dimension and the rank of the relation
/// subspace per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPresentation {
    pub lowest: i64,
    pub ambient_dims: Vec<usize>,
    pub relation_ranks: Vec<usize>,
}

impl QuotientPresentation {
    pub fn dim(&self, degree: i64) -> usize {
        let i = degree - self.lowest;
        if i < 0 || i as usize >= self.ambient_dims.len() {
            return 0;
        }
        self.ambient_dims[i as usize] - self.relation_ranks[i as usize]
    }

    pub fn total_dim(&self) -> usize {
        self.ambient_dims
            .iter()
            .zip(&self.relation_ranks)
            .map(|(a, r)| a - r)
            .sum()
    }
}

/// `(tau V)^k = 0` for `k < 0`, `V^0 / d(V^{-1})` for `k = 0`, `V^k` above.
pub fn truncate_tau(v: &ComplexSlice) -> QuotientPresentation {
    let mut lowest = 0i64;
    let mut ambient_dims = Vec::new();
    let mut relation_ranks = Vec::new();
    if v.lowest > 0 {
        lowest = v.lowest;
    }
    for (t, &dim) in v.dims.iter().enumerate() {
        let degree = v.lowest + t as i64;
        if degree < 0 {
            continue;
        }
        ambient_dims.push(dim);
        if degree == 0 {
            let rank = if t == 0 { 0 } else { v.differentials[t - 1].rank() };
            relation_ranks.push(rank);
        } else {
            relation_ranks.push(0);
        }
    }
    QuotientPresentation { lowest, ambient_dims, relation_ranks }
}

/// Arity-wise `tau_sharp` of the graph algebra: the quotient by the ideal
/// generated by everything in negative degree together with its
/// differential, presented on the span of graphs with at most `max_edges`
/// edges.
pub fn truncate_tau_sharp(
    flavor: GraphsFlavor,
    arity: usize,
    max_edges: usize,
    caps: &Caps,
) -> Result<QuotientPresentation, GraphsOpError> {
    // bases per degree
    let mut by_degree: BTreeMap<i64, Vec<OrientedGraph>> = BTreeMap::new();
    let n = flavor.n as i64;
    for e in 0..=max_edges {
        // (n-1)e - n i = d  =>  i ranges over everything consistent
        for i in 0..=caps.max_vertices.saturating_sub(arity) {
            let spec = EnumSpec {
                parity: flavor.parity(),
                ext_kind: ExtKind::Labeled,
                num_external: arity,
                num_internal: i,
                num_edges: e,
                min_internal_valence: flavor.min_internal_valence(),
                connected: false,
                components_touch_external: true,
                one_vertex_irreducible: false,
                internally_connected: false,
                allow_self_loops: true,
                allow_multi_edges: true,
            };
            let graphs = match enumerate_graphs(&spec, caps) {
                Ok(g) => g,
                Err(crate::graphcore::GraphError::CapExceeded(m)) => {
                    return Err(GraphsOpError::Graph(crate::graphcore::GraphError::CapExceeded(m)))
                }
                Err(e) => return Err(e.into()),
            };
            let graphs: Vec<OrientedGraph> =
                graphs.into_iter().filter(|g| super::is_admissible(g, flavor)).collect();
            if graphs.is_empty() {
                continue;
            }
            let d = (n - 1) * e as i64 - n * i as i64;
            by_degree.entry(d).or_default().extend(graphs);
        }
    }
    for list in by_degree.values_mut() {
        list.sort();
        list.dedup();
    }
    let (&lo, _) = by_degree.first_key_value().expect("unit graph always present");
    let (&hi, _) = by_degree.last_key_value().expect("unit graph always present");

    // ideal generators: negative-degree graphs and their differentials
    let mut generators: Vec<GraphsElement> = Vec::new();
    for (&d, graphs) in &by_degree {
        if d >= 0 {
            continue;
        }
        for g in graphs {
            let x = GraphsElement::from_graph(g, flavor)?;
            generators.push(graphs_differential(&x));
            generators.push(x);
        }
    }

    // relation span per degree: generator times any basis graph, within caps
    let mut relation_vectors: BTreeMap<i64, Vec<Vec<(usize, Rat)>>> = BTreeMap::new();
    let index: BTreeMap<i64, BTreeMap<&OrientedGraph, usize>> = by_degree
        .iter()
        .map(|(d, graphs)| (*d, graphs.iter().enumerate().map(|(i, g)| (g, i)).collect()))
        .collect();
    for gen in &generators {
        if gen.is_zero() {
            continue;
        }
        for (&d2, graphs) in &by_degree {
            for h in graphs {
                let hx = GraphsElement::from_graph(h, flavor)?;
                let prod = graphs_product(gen, &hx)?;
                if prod.is_zero() {
                    continue;
                }
                let degree = gen.degree() + d2;
                if prod.inner.terms().any(|(g, _)| g.num_edges() > max_edges) {
                    continue;
                }
                let Some(idx) = index.get(&degree) else { continue };
                let mut vec_entries = Vec::new();
                let mut complete = true;
                for (g, c) in prod.inner.terms() {
                    match idx.get(g) {
                        Some(&col) => vec_entries.push((col, c.clone())),
                        None => {
                            complete = false;
                            break;
                        }
                    }
                }
                if complete && !vec_entries.is_empty() {
                    relation_vectors.entry(degree).or_default().push(vec_entries);
                }
            }
        }
    }

    let mut ambient_dims = Vec::new();
    let mut relation_ranks = Vec::new();
    for d in lo..=hi {
        let ambient = by_degree.get(&d).map_or(0, |g| g.len());
        ambient_dims.push(ambient);
        let rank = match relation_vectors.get(&d) {
            None => 0,
            Some(rows) => {
                let triplets = rows.iter().enumerate().flat_map(|(r, row)| {
                    row.iter().map(move |(c, v)| (r, *c, v.clone()))
                });
                SparseMatrix::from_triplets(Rationals, rows.len(), ambient, triplets)?.rank()
            }
        };
        relation_ranks.push(rank);
    }
    Ok(QuotientPresentation { lowest: lo, ambient_dims, relation_ranks })
}
