//! The biderivation action of the graph complex on the graph cooperad.
//!
//! `GC_n^2` is the dual of the graph coalgebra, so a graph-complex element
//! acts by extraction: every induced subgraph on a set of internal vertices
//! with no edges leaving the set is paired against the acting element and
//! contracted to a single internal vertex. The defining contract is the
//! identity suite (Leibniz for the product, coderivation for the
//! cocompositions, dg compatibility, Lie action), not a closed formula.

use super::{GraphsElement, GraphsOpError};
use crate::exactalg::Rat;
use crate::graphcore::{
    canonicalize, permutation_parity, ExtKind, GradedElement, OrientedGraph, Parity, VertexId,
};
use num_traits::{One, Zero};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy)]
pub struct ActionCaps {
    /// Maximum number of `ad` iterations before `exp_ad` gives up.
    pub max_iterations: usize,
    /// Maximum vertex count of intermediate graphs.
    pub max_vertices: usize,
}

impl Default for ActionCaps {
    fn default() -> Self {
        ActionCaps { max_iterations: 24, max_vertices: 20 }
    }
}

/// Extract the induced subgraph on the internal vertex set `s` of `g`,
/// contracting it to a single internal vertex appended after the remaining
/// internals. Returns `(piece, contracted, sign)`, the sign being the
/// orientation shuffle moving the extracted data to the back block.
fn extract(g: &OrientedGraph, s: &[VertexId]) -> (OrientedGraph, OrientedGraph, i8) {
    let in_s = |v: VertexId| s.contains(&v);
    let r = g.num_external();
    let mut piece_edges = Vec::new();
    let mut kept_edges = Vec::new();
    let mut shuffle = Vec::with_capacity(g.num_edges());
    let piece_index = |v: VertexId| s.iter().position(|&w| w == v).unwrap() as VertexId;
    let kept_internals: Vec<VertexId> =
        (r as u8..g.num_vertices() as u8).filter(|v| !in_s(*v)).collect();
    let new_vertex = (r + kept_internals.len()) as VertexId;
    let kept_index = |v: VertexId| -> VertexId {
        if g.is_external(v) {
            v
        } else if in_s(v) {
            new_vertex
        } else {
            (r + kept_internals.iter().position(|&w| w == v).unwrap()) as VertexId
        }
    };
    let mut piece_count = 0usize;
    for &(a, b) in g.edges() {
        if g.is_internal(a) && g.is_internal(b) && in_s(a) && in_s(b) {
            piece_edges.push((piece_index(a), piece_index(b)));
            shuffle.push(usize::MAX);
            piece_count += 1;
        } else {
            kept_edges.push((kept_index(a), kept_index(b)));
            shuffle.push(kept_edges.len() - 1);
        }
    }
    let n_kept = kept_edges.len();
    let mut seen = 0usize;
    for t in shuffle.iter_mut() {
        if *t == usize::MAX {
            *t = n_kept + seen;
            seen += 1;
        }
    }
    debug_assert_eq!(seen, piece_count);
    let sign = match g.parity() {
        Parity::Even => permutation_parity(&shuffle),
        Parity::Odd => {
            let mut perm = Vec::with_capacity(g.num_internal());
            for v in r as u8..g.num_vertices() as u8 {
                let pos = if in_s(v) {
                    kept_internals.len() + s.iter().position(|&w| w == v).unwrap()
                } else {
                    kept_internals.iter().position(|&w| w == v).unwrap()
                };
                perm.push(pos);
            }
            permutation_parity(&perm)
        }
    };
    let piece = OrientedGraph::new(g.parity(), ExtKind::Labeled, 0, s.len(), piece_edges)
        .expect("piece stays in caps");
    let contracted = OrientedGraph::new(
        g.parity(),
        g.ext_kind(),
        r,
        kept_internals.len() + 1,
        kept_edges,
    )
    .expect("contraction stays in caps");
    (piece, contracted, sign)
}

/// `gamma . x`: pair every extractable induced internal subgraph against the
/// terms of `gamma` and contract it; inadmissible and orientation-zero
/// results drop out. The extracted block reads after the remaining data, so
/// the left action carries the Koszul factor `(-1)^(|gamma||x|)` reordering
/// the expression to operator-first.
pub fn gc_action(gamma: &GradedElement, x: &GraphsElement) -> Result<GraphsElement, GraphsOpError> {
    if gamma.meta.parity != x.flavor.parity() || gamma.meta.num_external != 0 {
        return Err(GraphsOpError::FlavorMismatch);
    }
    let koszul = gamma.meta.degree % 2 != 0 && x.degree() % 2 != 0;
    let mut out = GraphsElement::zero(x.flavor, x.arity(), x.degree() + gamma.meta.degree);
    let mut by_size: HashMap<usize, Vec<(&OrientedGraph, &Rat)>> = HashMap::new();
    for (gg, cg) in gamma.terms() {
        by_size.entry(gg.num_vertices()).or_default().push((gg, cg));
    }
    for (gx, cx) in x.inner.terms() {
        let r = gx.num_external() as u8;
        let internals: Vec<VertexId> = (r..gx.num_vertices() as u8).collect();
        for (&size, gammas) in &by_size {
            if size > internals.len() {
                continue;
            }
            for s in subsets(&internals, size) {
                let (piece, contracted, sign) = extract(gx, &s);
                let sc = canonicalize(&piece);
                if sc.sign == 0 {
                    continue;
                }
                for (gg, cg) in gammas {
                    if sc.canonical != **gg {
                        continue;
                    }
                    let mut c = *cg * cx;
                    if (sign * sc.sign) < 0 {
                        c = -c;
                    }
                    if koszul {
                        c = -c;
                    }
                    out.accumulate(&contracted, &c);
                }
            }
        }
    }
    Ok(out)
}

fn subsets(items: &[VertexId], size: usize) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn go(items: &[VertexId], start: usize, size: usize, cur: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, i + 1, size, cur, out);
            cur.pop();
        }
    }
    go(items, 0, size, &mut cur, &mut out);
    out
}

/// `lambda . Gamma = lambda^(edges - internal vertices) Gamma`.
pub fn scalar_act(lambda: &Rat, x: &GraphsElement) -> GraphsElement {
    assert!(!lambda.is_zero(), "scalar action requires a unit");
    let mut out = GraphsElement::zero(x.flavor, x.arity(), x.degree());
    for (g, c) in x.inner.terms() {
        let s = g.num_edges() as i64 - g.num_internal() as i64;
        let factor = rat_pow(lambda, s);
        out.accumulate(g, &(c * factor));
    }
    out
}

pub(crate) fn rat_pow(base: &Rat, exp: i64) -> Rat {
    let mut acc = Rat::one();
    let b = if exp >= 0 { base.clone() } else { base.recip() };
    for _ in 0..exp.unsigned_abs() {
        acc *= &b;
    }
    acc
}

/// `exp(ad(xi)) x = sum_k ad(xi)^k x / k!`, iterated until the term dies.
/// When every term of `xi` has at least one loop, each application strictly
/// lowers the edges-minus-internal-vertices count, so the series is a
/// polynomial; the cap guards the certificate.
pub fn exp_ad(
    xi: &GradedElement,
    x: &GraphsElement,
    caps: &ActionCaps,
) -> Result<GraphsElement, GraphsOpError> {
    let mut total = x.clone();
    let mut term = x.clone();
    let mut factorial = Rat::one();
    for k in 1..=caps.max_iterations {
        term = gc_action(xi, &term)?;
        if term.is_zero() {
            return Ok(total);
        }
        factorial *= Rat::from_integer((k as i64).into());
        total = total.add(&term.scale(&factorial.recip()))?;
    }
    Err(GraphsOpError::NotLocallyNilpotent(caps.max_iterations))
}

/// `ad(xi)` restricted to one application; exposed for the identity suites.
pub fn ad_once(xi: &GradedElement, x: &GraphsElement) -> Result<GraphsElement, GraphsOpError> {
    gc_action(xi, x)
}

/// The composite-morphism form of the trivialization series on a finite
/// slice: `project_en(exp_ad(xi)(x))`, an algebra chain map for cocycles
/// `xi`. The cogenerator extraction against the bar-resolution target is
/// out of scope; only the composite is exposed.
pub fn morphism_from_cocycle(
    xi: &GradedElement,
    x: &GraphsElement,
    caps: &ActionCaps,
) -> Result<super::EnElement, GraphsOpError> {
    let moved = exp_ad(xi, x, caps)?;
    super::project_en(&moved)
}

/// Local nilpotency certificate used by the verification suites: iterate
/// `ad(xi)` and report the number of steps until zero.
pub fn nilpotency_steps(
    xi: &GradedElement,
    x: &GraphsElement,
    caps: &ActionCaps,
) -> Result<usize, GraphsOpError> {
    let mut term = x.clone();
    for k in 0..=caps.max_iterations {
        if term.is_zero() {
            return Ok(k);
        }
        term = gc_action(xi, &term)?;
    }
    Err(GraphsOpError::NotLocallyNilpotent(caps.max_iterations))
}
