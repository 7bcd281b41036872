//! Isomorphism-free enumeration of admissible graphs.
//!
//! Graphs are generated by edge count: each level holds one canonical
//! representative per class, children are produced by adding a single edge.
//! Slices with bivalent internal vertices are reached by enumerating
//! min-valence-3 cores first and distributing subdivision points over their
//! edges; predicate filters are applied last.

use super::{canonicalize, ExtKind, GraphError, OrientedGraph, Parity, VertexId};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_vertices: 14, max_edges: 18 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnumSpec {
    pub parity: Parity,
    pub ext_kind: ExtKind,
    pub num_external: usize,
    pub num_internal: usize,
    pub num_edges: usize,
    pub min_internal_valence: usize,
    pub connected: bool,
    pub components_touch_external: bool,
    pub one_vertex_irreducible: bool,
    pub internally_connected: bool,
    pub allow_self_loops: bool,
    pub allow_multi_edges: bool,
}

impl EnumSpec {
    pub fn plain(parity: Parity, num_external: usize, num_internal: usize, num_edges: usize) -> Self {
        EnumSpec {
            parity,
            ext_kind: ExtKind::Labeled,
            num_external,
            num_internal,
            num_edges,
            min_internal_valence: 0,
            connected: false,
            components_touch_external: false,
            one_vertex_irreducible: false,
            internally_connected: false,
            allow_self_loops: true,
            allow_multi_edges: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Strategy {
    Auto,
    DirectBfs,
    CoreSubdivision,
}

/// Exactly one canonical representative per isomorphism class satisfying the
/// predicates, classes with an orientation-reversing automorphism excluded,
/// sorted deterministically.
pub fn enumerate_graphs(spec: &EnumSpec, caps: &Caps) -> Result<Vec<OrientedGraph>, GraphError> {
    enumerate_with_strategy(spec, caps, Strategy::Auto)
}

pub(crate) fn enumerate_with_strategy(
    spec: &EnumSpec,
    caps: &Caps,
    strategy: Strategy,
) -> Result<Vec<OrientedGraph>, GraphError> {
    if spec.num_external + spec.num_internal > caps.max_vertices {
        return Err(GraphError::CapExceeded(format!(
            "{} vertices > cap {}",
            spec.num_external + spec.num_internal,
            caps.max_vertices
        )));
    }
    if spec.num_edges > caps.max_edges {
        return Err(GraphError::CapExceeded(format!(
            "{} edges > cap {}",
            spec.num_edges, caps.max_edges
        )));
    }
    let use_cores = match strategy {
        Strategy::Auto => spec.min_internal_valence >= 2 && spec.num_internal >= 1,
        Strategy::CoreSubdivision => true,
        Strategy::DirectBfs => false,
    };
    let forms = if use_cores {
        cores_and_subdivisions(spec)
    } else {
        raw_classes(
            spec.num_external,
            spec.num_internal,
            spec.num_edges,
            spec.ext_kind,
            spec.min_internal_valence,
            true,
            true,
        )
    };
    let mut out = Vec::new();
    for g in forms {
        if !passes_predicates(&g, spec) {
            continue;
        }
        let sc = canonicalize(&with_parity(&g, spec.parity));
        if sc.sign == 0 {
            continue;
        }
        out.push(sc.canonical);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn with_parity(g: &OrientedGraph, parity: Parity) -> OrientedGraph {
    OrientedGraph::new(
        parity,
        g.ext_kind(),
        g.num_external(),
        g.num_internal(),
        g.edges().to_vec(),
    )
    .expect("same shape")
}

fn passes_predicates(g: &OrientedGraph, spec: &EnumSpec) -> bool {
    if !spec.allow_self_loops && g.self_loop_count() > 0 {
        return false;
    }
    if !spec.allow_multi_edges && g.has_multi_edge() {
        return false;
    }
    for v in g.num_external()..g.num_vertices() {
        if g.valence(v as VertexId) < spec.min_internal_valence {
            return false;
        }
    }
    if spec.connected && !g.is_connected() {
        return false;
    }
    if spec.components_touch_external && !g.every_component_touches_external() {
        return false;
    }
    if spec.one_vertex_irreducible && !g.is_one_vertex_irreducible() {
        return false;
    }
    if spec.internally_connected && !g.is_internally_connected() {
        return false;
    }
    true
}

/// Connected multigraphs on unlabeled vertices, for the internal parts of
/// hairy graphs.
pub(crate) fn connected_internal_parts(vertices: usize, edges: usize) -> Vec<OrientedGraph> {
    raw_classes_pruned(0, vertices, edges, ExtKind::Labeled, 0, true, true, true)
        .into_iter()
        .filter(|g| g.is_connected())
        .collect()
}

/// BFS by edge count over canonical forms, one level at a time. The valence
/// deficiency bound prunes levels that can no longer reach
/// `min_internal_valence` everywhere: each added edge repairs at most two
/// units of deficiency.
fn raw_classes(
    num_external: usize,
    num_internal: usize,
    num_edges: usize,
    ext_kind: ExtKind,
    min_internal_valence: usize,
    allow_self_loops: bool,
    allow_multi_edges: bool,
) -> Vec<OrientedGraph> {
    raw_classes_pruned(
        num_external,
        num_internal,
        num_edges,
        ext_kind,
        min_internal_valence,
        allow_self_loops,
        allow_multi_edges,
        false,
    )
}

#[allow(clippy::too_many_arguments)]
fn raw_classes_pruned(
    num_external: usize,
    num_internal: usize,
    num_edges: usize,
    ext_kind: ExtKind,
    min_internal_valence: usize,
    allow_self_loops: bool,
    allow_multi_edges: bool,
    target_connected: bool,
) -> Vec<OrientedGraph> {
    let n = num_external + num_internal;
    let empty = OrientedGraph::new(Parity::Even, ext_kind, num_external, num_internal, vec![])
        .expect("within caps");
    let mut level: HashSet<OrientedGraph> = HashSet::new();
    level.insert(empty);
    for e in 0..num_edges {
        let remaining = num_edges - e;
        let mut next: HashSet<OrientedGraph> = HashSet::new();
        for g in &level {
            for a in 0..n {
                for b in a..n {
                    if a == b && !allow_self_loops {
                        continue;
                    }
                    if !allow_multi_edges
                        && g.edges().iter().any(|&(x, y)| {
                            (x, y) == (a as VertexId, b as VertexId)
                                || (y, x) == (a as VertexId, b as VertexId)
                        })
                    {
                        continue;
                    }
                    let mut edges = g.edges().to_vec();
                    edges.push((a as VertexId, b as VertexId));
                    let child =
                        OrientedGraph::new(Parity::Even, ext_kind, num_external, num_internal, edges)
                            .expect("within caps");
                    if deficiency(&child, min_internal_valence) > 2 * (remaining - 1) {
                        continue;
                    }
                    if target_connected && child.components().len() > remaining {
                        continue;
                    }
                    next.insert(canonicalize(&child).canonical);
                }
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

fn deficiency(g: &OrientedGraph, min_internal_valence: usize) -> usize {
    (g.num_external()..g.num_vertices())
        .map(|v| min_internal_valence.saturating_sub(g.valence(v as VertexId)))
        .sum()
}

/// Graphs with bivalent internal vertices are subdivisions of cores whose
/// internal vertices are at least trivalent (plus the bare tadpole, whose
/// subdivisions are the cycles). Suppression of bivalent vertices inverts
/// the construction, so this reaches every class exactly once after the
/// canonical dedupe.
fn cores_and_subdivisions(spec: &EnumSpec) -> Vec<OrientedGraph> {
    let mut out: HashSet<OrientedGraph> = HashSet::new();
    for extra in 0..=spec.num_internal {
        let core_internal = spec.num_internal - extra;
        if spec.num_edges < extra {
            continue;
        }
        let core_edges = spec.num_edges - extra;
        let mut cores = raw_classes(
            spec.num_external,
            core_internal,
            core_edges,
            spec.ext_kind,
            3,
            true,
            true,
        );
        if spec.num_external == 0 && core_internal == 1 && core_edges == 1 {
            // the tadpole: its subdivisions are the cycles
            cores.push(
                OrientedGraph::new(Parity::Even, spec.ext_kind, 0, 1, vec![(0, 0)])
                    .expect("tadpole"),
            );
        }
        for core in cores {
            for g in subdivide(&core, extra) {
                out.insert(canonicalize(&g).canonical);
            }
        }
    }
    out.into_iter().collect()
}

/// All distributions of `points` subdivision vertices over the edges.
fn subdivide(core: &OrientedGraph, points: usize) -> Vec<OrientedGraph> {
    let mut out = Vec::new();
    let e = core.num_edges();
    if points == 0 {
        out.push(core.clone());
        return out;
    }
    if e == 0 {
        return out;
    }
    let mut split = vec![0usize; e];
    fn go(
        core: &OrientedGraph,
        split: &mut Vec<usize>,
        idx: usize,
        left: usize,
        out: &mut Vec<OrientedGraph>,
    ) {
        if idx + 1 == split.len() {
            split[idx] = left;
            out.push(apply_subdivision(core, split));
            return;
        }
        for k in 0..=left {
            split[idx] = k;
            go(core, split, idx + 1, left - k, out);
        }
    }
    go(core, &mut split, 0, points, &mut out);
    out
}

fn apply_subdivision(core: &OrientedGraph, split: &[usize]) -> OrientedGraph {
    let mut next_id = core.num_vertices() as VertexId;
    let mut edges = Vec::new();
    for (i, &(a, b)) in core.edges().iter().enumerate() {
        if split[i] == 0 {
            edges.push((a, b));
            continue;
        }
        let mut prev = a;
        for _ in 0..split[i] {
            edges.push((prev, next_id));
            prev = next_id;
            next_id += 1;
        }
        edges.push((prev, b));
    }
    OrientedGraph::new(
        core.parity(),
        core.ext_kind(),
        core.num_external(),
        core.num_internal() + split.iter().sum::<usize>(),
        edges,
    )
    .expect("within caps")
}
