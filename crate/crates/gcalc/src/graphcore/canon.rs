//! Canonical labeling with orientation signs.
//!
//! Color refinement plus backtracking over refined orbits, sized for the
//! desk scale (at most [`MAX_VERTICES`] vertices). External vertices are
//! pinned in `Labeled` mode and form one interchangeable color class in
//! `UnorderedHairs` mode.

use super::{ExtKind, OrientedGraph, Parity, Sign, SignedCanonical, VertexId, MAX_VERTICES};
use std::collections::BTreeMap;

type Colors = Vec<u32>;

fn initial_colors(g: &OrientedGraph) -> Colors {
    let n = g.num_vertices();
    let mut colors = vec![0u32; n];
    match g.ext_kind() {
        ExtKind::Labeled => {
            for v in 0..g.num_external() {
                colors[v] = v as u32;
            }
            for v in g.num_external()..n {
                colors[v] = g.num_external() as u32;
            }
        }
        ExtKind::UnorderedHairs => {
            for v in g.num_external()..n {
                colors[v] = 1;
            }
        }
    }
    colors
}

/// One-dimensional Weisfeiler-Leman refinement on multigraphs: the signature
/// of a vertex is its color, its self-loop count, and the multiset of
/// neighbor colors counted with edge multiplicity.
fn refine(g: &OrientedGraph, colors: &mut Colors) {
    let n = g.num_vertices();
    loop {
        let mut sigs: Vec<(u32, usize, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nbrs = Vec::new();
                let mut loops = 0;
                for &(a, b) in g.edges() {
                    if a == b {
                        if a as usize == v {
                            loops += 1;
                        }
                        continue;
                    }
                    if a as usize == v {
                        nbrs.push(colors[b as usize]);
                    }
                    if b as usize == v {
                        nbrs.push(colors[a as usize]);
                    }
                }
                nbrs.sort_unstable();
                (colors[v], loops, nbrs)
            })
            .collect();
        let mut sorted: Vec<&(u32, usize, Vec<u32>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let rank: BTreeMap<&(u32, usize, Vec<u32>), u32> =
            sorted.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        let next: Colors = sigs.iter().map(|s| rank[s]).collect();
        let stable = next == *colors;
        *colors = next;
        sigs.clear();
        if stable {
            return;
        }
    }
}

fn first_non_singleton_cell(colors: &Colors) -> Option<Vec<usize>> {
    let mut cells: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (v, c) in colors.iter().enumerate() {
        cells.entry(*c).or_default().push(v);
    }
    cells.into_values().find(|cell| cell.len() > 1)
}

fn discrete_perm(colors: &Colors) -> Vec<VertexId> {
    let mut order: Vec<usize> = (0..colors.len()).collect();
    order.sort_by_key(|&v| colors[v]);
    let mut perm = vec![0 as VertexId; colors.len()];
    for (pos, v) in order.iter().enumerate() {
        perm[*v] = pos as VertexId;
    }
    perm
}

fn encoded(g: &OrientedGraph, perm: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    let mut edges: Vec<(VertexId, VertexId)> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a as usize], perm[b as usize]);
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    edges.sort_unstable();
    edges
}

fn search_best(
    g: &OrientedGraph,
    colors: Colors,
    best: &mut Option<(Vec<(VertexId, VertexId)>, Vec<VertexId>)>,
) {
    match first_non_singleton_cell(&colors) {
        None => {
            let perm = discrete_perm(&colors);
            let enc = encoded(g, &perm);
            match best {
                Some((benc, _)) if *benc <= enc => {}
                _ => *best = Some((enc, perm)),
            }
        }
        Some(cell) => {
            // vertices with identical adjacency rows are swapped by an
            // automorphism; individualizing one representative per twin
            // group is enough (this collapses hair clusters and parallel
            // twins, whose cells are otherwise factorial)
            let mut reps: Vec<usize> = Vec::new();
            for &v in &cell {
                if reps.iter().any(|&u| twins(g, u, v)) {
                    continue;
                }
                reps.push(v);
                // individualize v below the rest of its cell, rescaling all
                // colors so distinct classes stay distinct
                let mut next = colors.clone();
                for c in next.iter_mut() {
                    *c *= 2;
                }
                for &w in &cell {
                    if w != v {
                        next[w] += 1;
                    }
                }
                refine(g, &mut next);
                search_best(g, next, best);
            }
        }
    }
}

fn adjacency_row(g: &OrientedGraph, v: usize, zero_at: usize) -> Vec<u8> {
    let n = g.num_vertices();
    let mut row = vec![0u8; n + 1];
    for &(a, b) in g.edges() {
        if a == b {
            if a as usize == v {
                row[n] += 1;
            }
            continue;
        }
        if a as usize == v {
            row[b as usize] += 1;
        }
        if b as usize == v {
            row[a as usize] += 1;
        }
    }
    row[v] = 0;
    row[zero_at] = 0;
    row
}

/// The transposition of `u` and `v` is an automorphism of the underlying
/// multigraph.
fn twins(g: &OrientedGraph, u: usize, v: usize) -> bool {
    adjacency_row(g, u, v) == adjacency_row(g, v, u)
}

/// All color-preserving vertex automorphisms of `g` (identity included).
pub fn automorphisms(g: &OrientedGraph) -> Vec<Vec<VertexId>> {
    let n = g.num_vertices();
    let mut colors = initial_colors(g);
    refine(g, &mut colors);
    let mut mult = vec![vec![0u8; n]; n];
    for &(a, b) in g.edges() {
        mult[a as usize][b as usize] += 1;
        if a != b {
            mult[b as usize][a as usize] += 1;
        }
    }
    let mut out = Vec::new();
    let mut assignment: Vec<Option<VertexId>> = vec![None; n];
    let mut used = vec![false; n];
    fn go(
        v: usize,
        n: usize,
        colors: &Colors,
        mult: &Vec<Vec<u8>>,
        assignment: &mut Vec<Option<VertexId>>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        if v == n {
            out.push(assignment.iter().map(|x| x.unwrap()).collect());
            return;
        }
        for w in 0..n {
            if used[w] || colors[w] != colors[v] {
                continue;
            }
            let ok = (0..v).all(|u| {
                let uu = assignment[u].unwrap() as usize;
                mult[u][v] == mult[uu][w]
            }) && mult[v][v] == mult[w][w];
            if ok {
                assignment[v] = Some(w as VertexId);
                used[w] = true;
                go(v + 1, n, colors, mult, assignment, used, out);
                used[w] = false;
                assignment[v] = None;
            }
        }
    }
    go(0, n, &colors, &mult, &mut assignment, &mut used, &mut out);
    out
}

/// Early-exit test for an orientation-reversing automorphism. Twin
/// transpositions are checked first; the backtracking search then only
/// individualizes one representative per twin class (the sign character is
/// a homomorphism, so positive twins never hide a negative element that
/// the representatives miss).
pub fn has_negative_automorphism(g: &OrientedGraph) -> bool {
    let n = g.num_vertices();
    let mut colors = initial_colors(g);
    refine(g, &mut colors);
    for u in 0..n {
        for v in u + 1..n {
            if colors[u] == colors[v] && twins(g, u, v) {
                let mut perm: Vec<VertexId> = (0..n as u8).collect();
                perm.swap(u, v);
                if move_sign(g, &perm) < 0 {
                    return true;
                }
            }
        }
    }
    let mut mult = vec![vec![0u8; n]; n];
    for &(a, b) in g.edges() {
        mult[a as usize][b as usize] += 1;
        if a != b {
            mult[b as usize][a as usize] += 1;
        }
    }
    fn go(
        g: &OrientedGraph,
        v: usize,
        n: usize,
        colors: &Colors,
        mult: &Vec<Vec<u8>>,
        assignment: &mut Vec<Option<VertexId>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if v == n {
            let perm: Vec<VertexId> = assignment.iter().map(|x| x.unwrap()).collect();
            return move_sign(g, &perm) < 0;
        }
        let mut tried: Vec<usize> = Vec::new();
        for w in 0..n {
            if used[w] || colors[w] != colors[v] {
                continue;
            }
            if tried.iter().any(|&t| twins(g, t, w)) {
                continue;
            }
            let ok = (0..v).all(|u| {
                let uu = assignment[u].unwrap() as usize;
                mult[u][v] == mult[uu][w]
            }) && mult[v][v] == mult[w][w];
            if ok {
                tried.push(w);
                assignment[v] = Some(w as VertexId);
                used[w] = true;
                if go(g, v + 1, n, colors, mult, assignment, used) {
                    return true;
                }
                used[w] = false;
                assignment[v] = None;
            }
        }
        false
    }
    let mut assignment: Vec<Option<VertexId>> = vec![None; n];
    let mut used = vec![false; n];
    go(g, 0, n, &colors, &mult, &mut assignment, &mut used)
}

/// Order of the full automorphism group of the multigraph acting on
/// half-edges: vertex automorphisms times parallel-edge permutations times
/// self-loop reversals.
pub fn automorphism_count(g: &OrientedGraph) -> u64 {
    let vertex_auts = automorphisms(g).len() as u64;
    let mut mult: BTreeMap<(VertexId, VertexId), u64> = BTreeMap::new();
    let mut loops = 0u32;
    for &(a, b) in g.edges() {
        if a == b {
            loops += 1;
        }
        let key = if a <= b { (a, b) } else { (b, a) };
        *mult.entry(key).or_insert(0) += 1;
    }
    let factorials: u64 = mult.values().map(|&m| (1..=m).product::<u64>()).product();
    vertex_auts * factorials * (1u64 << loops)
}

/// Orientation sign of relabeling `g` by `perm` and renormalizing to the
/// reference orientation (endpoints sorted, edges sorted). `None` when the
/// sign is ill-defined without being zero — cannot happen; parallel/loop
/// ambiguities are resolved by the local zero rules before calling this.
fn move_sign(g: &OrientedGraph, perm: &[VertexId]) -> Sign {
    let mut sign: Sign = 1;
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::with_capacity(g.num_edges());
    for &(a, b) in g.edges() {
        let (x, y) = (perm[a as usize], perm[b as usize]);
        if x <= y {
            pairs.push((x, y));
        } else {
            pairs.push((y, x));
            if g.parity() == Parity::Odd {
                sign = -sign;
            }
        }
    }
    if g.parity() == Parity::Even {
        // parity of the stable sort permutation on the edge order
        let mut idx: Vec<usize> = (0..pairs.len()).collect();
        idx.sort_by_key(|&i| (pairs[i], i));
        sign *= super::permutation_parity(&idx);
    } else {
        // parity of the internal-vertex permutation, read off positions
        let internals: Vec<usize> = (g.num_external()..g.num_vertices())
            .map(|v| perm[v] as usize - g.num_external())
            .collect();
        sign *= super::permutation_parity(&internals);
        if g.ext_kind() == ExtKind::UnorderedHairs {
            let hairs: Vec<usize> = (0..g.num_external()).map(|v| perm[v] as usize).collect();
            sign *= super::permutation_parity(&hairs);
        }
    }
    sign
}

fn locally_zero(g: &OrientedGraph) -> bool {
    match g.parity() {
        Parity::Even => g.has_multi_edge(),
        Parity::Odd => g.self_loop_count() > 0,
    }
}

/// Canonical representative with the orientation sign relating `g` to it.
/// The sign is `0` exactly when `g` carries an orientation-reversing
/// automorphism (including the local parallel-pair / self-loop cases).
pub fn canonicalize(g: &OrientedGraph) -> SignedCanonical {
    debug_assert!(g.num_vertices() <= MAX_VERTICES);
    let mut colors = initial_colors(g);
    refine(g, &mut colors);
    let mut best = None;
    search_best(g, colors, &mut best);
    let (enc, perm) = best.expect("at least one leaf");
    let canonical = OrientedGraph {
        parity: g.parity(),
        ext_kind: g.ext_kind(),
        num_external: g.num_external() as u8,
        num_internal: g.num_internal() as u8,
        edges: enc,
    };
    if locally_zero(g) {
        return SignedCanonical { canonical, sign: 0 };
    }
    let discrete = {
        let mut cs = initial_colors(&canonical);
        refine(&canonical, &mut cs);
        let mut seen = std::collections::HashSet::new();
        cs.iter().all(|c| seen.insert(*c))
    };
    if !discrete && has_negative_automorphism(&canonical) {
        return SignedCanonical { canonical, sign: 0 };
    }
    let sign = move_sign(g, &perm);
    SignedCanonical { canonical, sign }
}
