//! Weighted graphs with symmetric conductances, plus lattice builders and ball geometry.

mod domain;
mod edgelist;
mod lattice;
mod profile;

pub use domain::{DomainKind, DomainSpec};
pub use edgelist::{load_edge_list, parse_edge_list};
pub use lattice::{build_lattice, build_orthant, l1_ball_size, lattice_region, max_vertices, OrthantBox};
pub use profile::{ball_profile, bfs_distances, BallProfile};

use crate::error::{invalid, Error, Result};

/// Dense coordinate index over an axis-aligned box.
#[derive(Debug, Clone)]
pub(crate) struct BoxIndex {
    lo: Vec<i32>,
    ext: Vec<usize>,
    map: Vec<u32>,
}

impl BoxIndex {
    fn offset(&self, c: &[i32]) -> Option<usize> {
        let mut off = 0usize;
        for ((&v, &lo), &ext) in c.iter().zip(&self.lo).zip(&self.ext) {
            let t = v - lo;
            if t < 0 || t as usize >= ext {
                return None;
            }
            off = off * ext + t as usize;
        }
        Some(off)
    }
}

/// Undirected graph with positive edge conductances in compressed adjacency form.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    adj: Vec<u32>,
    wts: Vec<f64>,
    measure: Vec<f64>,
    dim: usize,
    coords: Vec<i32>,
    index: Option<BoxIndex>,
    safe_radius: Option<usize>,
}

impl WeightedGraph {
    /// Builds a graph from an undirected edge list. Rejects self-loops, duplicates,
    /// nonpositive weights and disconnected vertex sets.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return invalid("graph needs at least one vertex");
        }
        let mut deg = vec![0usize; n];
        for (line, &(u, v, w)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return invalid(format!("edge {u}-{v} references a vertex outside 0..{n}"));
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonpositiveConductance { line: line + 1, weight: w });
            }
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![0u32; offsets[n]];
        let mut wts = vec![0.0; offsets[n]];
        for &(u, v, w) in edges {
            adj[fill[u]] = v as u32;
            wts[fill[u]] = w;
            fill[u] += 1;
            adj[fill[v]] = u as u32;
            wts[fill[v]] = w;
            fill[v] += 1;
        }
        for x in 0..n {
            let r = offsets[x]..offsets[x + 1];
            let mut pairs: Vec<(u32, f64)> = adj[r.clone()].iter().copied().zip(wts[r.clone()].iter().copied()).collect();
            pairs.sort_by_key(|p| p.0);
            for w in pairs.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::DuplicateEdge { line: 0, u: x, v: w[0].0 as usize });
                }
            }
            for (k, (y, w)) in pairs.into_iter().enumerate() {
                adj[offsets[x] + k] = y;
                wts[offsets[x] + k] = w;
            }
        }
        let g = Self::assemble(offsets, adj, wts, 0, Vec::new(), None, None);
        if let Some(v) = g.first_unreachable() {
            return Err(Error::Disconnected(v));
        }
        Ok(g)
    }

    fn assemble(
        offsets: Vec<usize>,
        adj: Vec<u32>,
        wts: Vec<f64>,
        dim: usize,
        coords: Vec<i32>,
        index: Option<BoxIndex>,
        safe_radius: Option<usize>,
    ) -> Self {
        let n = offsets.len() - 1;
        let measure = (0..n).map(|x| wts[offsets[x]..offsets[x + 1]].iter().sum()).collect();
        WeightedGraph { offsets, adj, wts, measure, dim, coords, index, safe_radius }
    }

    fn first_unreachable(&self) -> Option<usize> {
        let dist = bfs_distances(self, 0, usize::MAX);
        dist.iter().position(|&d| d == usize::MAX)
    }

    pub fn num_vertices(&self) -> usize {
        self.measure.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.len() / 2
    }

    /// Neighbors of `x` with the conductance of each edge, sorted by neighbor index.
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[x]..self.offsets[x + 1];
        self.adj[r.clone()].iter().map(|&y| y as usize).zip(self.wts[r].iter().copied())
    }

    pub fn degree(&self, x: usize) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    /// μ_xy, or 0 when x and y are not adjacent.
    pub fn conductance(&self, x: usize, y: usize) -> f64 {
        let r = self.offsets[x]..self.offsets[x + 1];
        match self.adj[r.clone()].binary_search(&(y as u32)) {
            Ok(k) => self.wts[r.start + k],
            Err(_) => 0.0,
        }
    }

    /// Vertex measure μ(x) = Σ_y μ_xy.
    pub fn measure(&self, x: usize) -> f64 {
        self.measure[x]
    }

    pub fn measures(&self) -> &[f64] {
        &self.measure
    }

    /// Undirected edges (u < v) with their conductances.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.num_vertices()).flat_map(move |x| self.neighbors(x).filter(move |&(y, _)| y > x).map(move |(y, w)| (x, y, w)))
    }

    /// Lattice dimension, or 0 for graphs without coordinates.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coord(&self, x: usize) -> Option<&[i32]> {
        if self.dim == 0 {
            None
        } else {
            Some(&self.coords[x * self.dim..(x + 1) * self.dim])
        }
    }

    pub fn vertex_at(&self, c: &[i32]) -> Option<usize> {
        let idx = self.index.as_ref()?;
        if c.len() != self.dim {
            return None;
        }
        let m = idx.map[idx.offset(c)?];
        (m != u32::MAX).then_some(m as usize)
    }

    /// Largest radius around the lattice origin for which balls and their measures are uncensored.
    /// `None` means the graph is not a truncation.
    pub fn safe_radius(&self) -> Option<usize> {
        self.safe_radius
    }

    /// Euclidean norm of the stored coordinates.
    pub fn euclid_norm(&self, x: usize) -> Option<f64> {
        self.coord(x).map(|c| c.iter().map(|&v| (v as f64) * (v as f64)).sum::<f64>().sqrt())
    }

    /// Returns a copy with every conductance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let wts = self.wts.iter().map(|w| w * factor).collect();
        Self::assemble(self.offsets.clone(), self.adj.clone(), wts, self.dim, self.coords.clone(), self.index.clone(), self.safe_radius)
    }

    /// Recomputes μ(x) from the adjacency and compares with the cache bit for bit.
    pub fn check_measure_cache(&self) -> bool {
        (0..self.num_vertices()).all(|x| self.neighbors(x).map(|(_, w)| w).sum::<f64>() == self.measure[x])
    }

    /// Checks that both directed lookups of every edge agree.
    pub fn check_symmetry(&self) -> bool {
        (0..self.num_vertices()).all(|x| self.neighbors(x).all(|(y, w)| self.conductance(y, x) == w && w > 0.0 && y != x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_measures() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 3.0), (0, 2, 2.0)]).unwrap();
        assert_eq!(g.measures(), &[3.0, 4.0, 5.0]);
        assert!(g.check_symmetry());
        assert!(g.check_measure_cache());
        assert_eq!(g.conductance(2, 1), 3.0);
        assert_eq!(g.conductance(0, 0), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(WeightedGraph::from_edges(2, &[(0, 1, 0.0)]), Err(Error::NonpositiveConductance { .. })));
        assert!(matches!(WeightedGraph::from_edges(2, &[(0, 1, 1.0), (1, 0, 1.0)]), Err(Error::DuplicateEdge { .. })));
        assert!(matches!(WeightedGraph::from_edges(3, &[(0, 1, 1.0)]), Err(Error::Disconnected(2))));
        assert!(WeightedGraph::from_edges(2, &[(1, 1, 1.0)]).is_err());
    }

    #[test]
    fn single_vertex_accepted() {
        let g = WeightedGraph::from_edges(1, &[]).unwrap();
        assert_eq!(g.num_vertices(), 1);
        assert_eq!(g.measure(0), 0.0);
    }
}
