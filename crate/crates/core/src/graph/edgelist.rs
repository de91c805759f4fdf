use super::{bfs_distances, WeightedGraph};
use crate::error::{Error, Result};
use std::collections::HashSet;
use std::io::BufRead;

/// Parses "u v w" records ('#' starts a comment) and keeps the component containing `root`.
/// Vertices of that component are renumbered in order of first appearance; the returned map
/// gives the original id of every new index.
pub fn parse_edge_list(text: &str, root: usize) -> Result<(WeightedGraph, Vec<usize>)> {
    load_edge_list(text.as_bytes(), root)
}

pub fn load_edge_list(reader: impl BufRead, root: usize) -> Result<(WeightedGraph, Vec<usize>)> {
    let mut raw = Vec::new();
    let mut seen = HashSet::new();
    let mut max_id = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse { line: lineno, msg: format!("expected 3 fields, found {}", fields.len()) });
        }
        let parse_id = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse { line: lineno, msg: format!("bad vertex id {s:?}: {e}") });
        let u = parse_id(fields[0])?;
        let v = parse_id(fields[1])?;
        let w: f64 = fields[2].parse().map_err(|e| Error::Parse { line: lineno, msg: format!("bad weight {:?}: {e}", fields[2]) })?;
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::NonpositiveConductance { line: lineno, weight: w });
        }
        if u == v {
            return Err(Error::Parse { line: lineno, msg: format!("self-loop at {u}") });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge { line: lineno, u, v });
        }
        max_id = max_id.max(u).max(v);
        raw.push((u, v, w));
    }
    if raw.iter().all(|&(u, v, _)| u != root && v != root) {
        return Err(Error::Disconnected(root));
    }
    // Renumber in order of first appearance, then restrict to the root component.
    let mut new_id = vec![usize::MAX; max_id + 1];
    let mut orig = Vec::new();
    for &(u, v, _) in &raw {
        for x in [u, v] {
            if new_id[x] == usize::MAX {
                new_id[x] = orig.len();
                orig.push(x);
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> = raw.iter().map(|&(u, v, w)| (new_id[u], new_id[v], w)).collect();
    let full = build_unchecked(orig.len(), &edges);
    let dist = bfs_distances(&full, new_id[root], usize::MAX);
    if dist.iter().all(|&d| d != usize::MAX) {
        return Ok((full, orig));
    }
    let mut keep = vec![usize::MAX; orig.len()];
    let mut kept_orig = Vec::new();
    for (x, &d) in dist.iter().enumerate() {
        if d != usize::MAX {
            keep[x] = kept_orig.len();
            kept_orig.push(orig[x]);
        }
    }
    let sub: Vec<_> = edges.iter().filter(|e| keep[e.0] != usize::MAX).map(|&(u, v, w)| (keep[u], keep[v], w)).collect();
    Ok((WeightedGraph::from_edges(kept_orig.len(), &sub)?, kept_orig))
}

fn build_unchecked(n: usize, edges: &[(usize, usize, f64)]) -> WeightedGraph {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        adj[u].push((v as u32, w));
        adj[v].push((u as u32, w));
    }
    let mut offsets = vec![0];
    let mut flat = Vec::new();
    let mut wts = Vec::new();
    for mut row in adj {
        row.sort_by_key(|p| p.0);
        for (y, w) in row {
            flat.push(y);
            wts.push(w);
        }
        offsets.push(flat.len());
    }
    WeightedGraph::assemble(offsets, flat, wts, 0, Vec::new(), None, None)
}
