//! The stable text format for graphs, used as the key in all CSV/JSON
//! exports: `G[n-parity=even; ext=2; int=1; E=(e1,v1),(e2,v1)]`.
//!
//! External vertices are `e1..er` (or `h1..hk` with the `unordered-hairs`
//! flag), internal vertices `v1..vi`, edges listed in the stored
//! orientation order.

use super::{ExtKind, GraphError, OrientedGraph, Parity, VertexId, MAX_VERTICES};

pub fn graph_key(g: &OrientedGraph) -> String {
    let mut s = String::from("G[n-parity=");
    s.push_str(match g.parity() {
        Parity::Even => "even",
        Parity::Odd => "odd",
    });
    if g.ext_kind() == ExtKind::UnorderedHairs {
        s.push_str("; unordered-hairs");
    }
    s.push_str(&format!("; ext={}; int={}; E=", g.num_external(), g.num_internal()));
    let name = |v: VertexId| -> String {
        if g.is_external(v) {
            let prefix = if g.ext_kind() == ExtKind::UnorderedHairs { 'h' } else { 'e' };
            format!("{}{}", prefix, v + 1)
        } else {
            format!("v{}", v as usize - g.num_external() + 1)
        }
    };
    let edges: Vec<String> =
        g.edges().iter().map(|&(a, b)| format!("({},{})", name(a), name(b))).collect();
    s.push_str(&edges.join(","));
    s.push(']');
    s
}

/// Parse the canonical text format back into a graph. Must accept exactly
/// the grammar above and reject everything else without panicking.
pub fn parse_graph_key(s: &str) -> Result<OrientedGraph, GraphError> {
    let err = |m: &str| GraphError::Parse(format!("{m} in `{s}`"));
    let body = s
        .strip_prefix("G[")
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err("expected G[...]"))?;
    let mut parity = None;
    let mut hairs = false;
    let mut ext: Option<usize> = None;
    let mut int: Option<usize> = None;
    let mut edge_field: Option<&str> = None;

    for (i, part) in body.split("; ").enumerate() {
        if let Some(v) = part.strip_prefix("n-parity=") {
            if i != 0 || parity.is_some() {
                return Err(err("misplaced n-parity"));
            }
            parity = Some(match v {
                "even" => Parity::Even,
                "odd" => Parity::Odd,
                _ => return Err(err("bad parity")),
            });
        } else if part == "unordered-hairs" {
            if hairs || ext.is_some() {
                return Err(err("misplaced unordered-hairs"));
            }
            hairs = true;
        } else if let Some(v) = part.strip_prefix("ext=") {
            if ext.is_some() {
                return Err(err("duplicate ext"));
            }
            ext = Some(v.parse().map_err(|_| err("bad ext count"))?);
        } else if let Some(v) = part.strip_prefix("int=") {
            if int.is_some() {
                return Err(err("duplicate int"));
            }
            int = Some(v.parse().map_err(|_| err("bad int count"))?);
        } else if let Some(v) = part.strip_prefix("E=") {
            if edge_field.is_some() {
                return Err(err("duplicate edge list"));
            }
            edge_field = Some(v);
        } else {
            return Err(err("unknown field"));
        }
    }

    let parity = parity.ok_or_else(|| err("missing n-parity"))?;
    let ext = ext.ok_or_else(|| err("missing ext"))?;
    let int = int.ok_or_else(|| err("missing int"))?;
    let edge_field = edge_field.ok_or_else(|| err("missing E"))?;
    if ext + int > MAX_VERTICES {
        return Err(GraphError::CapExceeded(format!("{} vertices", ext + int)));
    }
    let ext_kind = if hairs { ExtKind::UnorderedHairs } else { ExtKind::Labeled };
    let ext_prefix = if hairs { 'h' } else { 'e' };

    let parse_vertex = |name: &str| -> Result<VertexId, GraphError> {
        let (prefix, num) = name.split_at(1.min(name.len()));
        let idx: usize = num.parse().map_err(|_| err("bad vertex number"))?;
        if idx == 0 {
            return Err(err("vertex numbers are 1-based"));
        }
        match prefix.chars().next() {
            Some(c) if c == ext_prefix => {
                if idx > ext {
                    return Err(err("external vertex out of range"));
                }
                Ok((idx - 1) as VertexId)
            }
            Some('v') => {
                if idx > int {
                    return Err(err("internal vertex out of range"));
                }
                Ok((ext + idx - 1) as VertexId)
            }
            _ => Err(err("bad vertex name")),
        }
    };

    let mut edges = Vec::new();
    if !edge_field.is_empty() {
        let mut rest = edge_field;
        loop {
            let inner = rest.strip_prefix('(').ok_or_else(|| err("expected ("))?;
            let (pair, tail) = inner.split_once(')').ok_or_else(|| err("expected )"))?;
            let (a, b) = pair.split_once(',').ok_or_else(|| err("expected (a,b)"))?;
            edges.push((parse_vertex(a)?, parse_vertex(b)?));
            if edges.len() > 4096 {
                return Err(GraphError::CapExceeded("edge list too long".into()));
            }
            match tail.strip_prefix(',') {
                Some(next) => rest = next,
                None => {
                    if !tail.is_empty() {
                        return Err(err("trailing characters after edge list"));
                    }
                    break;
                }
            }
        }
    }
    OrientedGraph::new(parity, ext_kind, ext, int, edges)
}
