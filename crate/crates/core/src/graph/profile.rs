use super::WeightedGraph;
use crate::error::{invalid, Error, Result};
use serde::Serialize;
use std::collections::VecDeque;

/// Hop distances from `o`, explored out to `max_dist`; unreached vertices get `usize::MAX`.
pub fn bfs_distances(g: &WeightedGraph, o: usize, max_dist: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.num_vertices()];
    let mut queue = VecDeque::new();
    dist[o] = 0;
    queue.push_back(o);
    while let Some(x) = queue.pop_front() {
        if dist[x] >= max_dist {
            continue;
        }
        for (y, _) in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Ball geometry around a center: volumes μ(B(o,n)), sphere sizes, cut conductances b_k
/// (edges from S_k to S_{k+1}) and their partial sums M_k = Σ_{ℓ=1}^{k} b_ℓ.
#[derive(Debug, Clone, Serialize)]
pub struct BallProfile {
    pub center: usize,
    pub r_max: usize,
    pub volumes: Vec<f64>,
    pub sphere_sizes: Vec<usize>,
    pub cut_conductances: Vec<f64>,
    pub partial_cut_sums: Vec<f64>,
}

impl BallProfile {
    /// b_k for k = 0..=r_max.
    pub fn b(&self, k: usize) -> f64 {
        self.cut_conductances[k]
    }

    pub fn volume(&self, n: usize) -> f64 {
        self.volumes[n]
    }

    /// Checks M_k ≤ μ(B(o,k)) for every k.
    pub fn check_cut_mass(&self) -> bool {
        (0..=self.r_max).all(|k| self.partial_cut_sums[k] <= self.volumes[k] * (1.0 + 1e-12))
    }
}

/// Exact ball profile for radii 0..=r_max. On lattice truncations the request is refused when
/// any ball would reach vertices whose measure is censored.
pub fn ball_profile(g: &WeightedGraph, o: usize, r_max: usize) -> Result<BallProfile> {
    if o >= g.num_vertices() {
        return invalid(format!("center {o} not in graph"));
    }
    if let (Some(safe), Some(c)) = (g.safe_radius(), g.coord(o)) {
        let off = c.iter().map(|v| v.unsigned_abs() as usize).sum::<usize>();
        if off + r_max > safe {
            return Err(Error::Censored { requested: off + r_max, safe });
        }
    }
    let dist = bfs_distances(g, o, r_max + 1);
    let mut volumes = vec![0.0; r_max + 1];
    let mut sphere_sizes = vec![0usize; r_max + 1];
    let mut cut = vec![0.0; r_max + 1];
    for x in 0..g.num_vertices() {
        let dx = dist[x];
        if dx > r_max {
            continue;
        }
        sphere_sizes[dx] += 1;
        volumes[dx] += g.measure(x);
        for (y, w) in g.neighbors(x) {
            if dist[y] == dx + 1 {
                cut[dx] += w;
            }
        }
    }
    for n in 1..=r_max {
        volumes[n] += volumes[n - 1];
    }
    let mut partial = vec![0.0; r_max + 1];
    for k in 1..=r_max {
        partial[k] = partial[k - 1] + cut[k];
    }
    Ok(BallProfile { center: o, r_max, volumes, sphere_sizes, cut_conductances: cut, partial_cut_sums: partial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_lattice;

    #[test]
    fn segment_profile() {
        let g = build_lattice(1, 12).unwrap();
        let p = ball_profile(&g, g.vertex_at(&[0]).unwrap(), 11).unwrap();
        for n in 0..=11 {
            assert_eq!(p.volume(n), 2.0 * (2 * n + 1) as f64);
            assert_eq!(p.b(n), 2.0);
        }
        assert!(p.check_cut_mass());
        assert!(ball_profile(&g, 0, 12).is_err());
    }

    #[test]
    fn square_lattice_first_ball() {
        let g = build_lattice(2, 5).unwrap();
        let p = ball_profile(&g, g.vertex_at(&[0, 0]).unwrap(), 4).unwrap();
        assert_eq!(p.volume(1), 20.0);
        assert_eq!(p.sphere_sizes[..3], [1, 4, 8]);
        for n in 0..4 {
            let shell = p.volume(n + 1) - p.volume(n);
            assert_eq!(shell, 4.0 * p.sphere_sizes[n + 1] as f64);
        }
    }

    #[test]
    fn cut_counts_on_z3() {
        // Each x in S_k has 3 + z(x) neighbours in S_{k+1}, z = number of zero coordinates.
        let g = build_lattice(3, 8).unwrap();
        let p = ball_profile(&g, g.vertex_at(&[0, 0, 0]).unwrap(), 7).unwrap();
        for k in 0..=7 {
            let mut b = 0usize;
            for x in 0..g.num_vertices() {
                let c = g.coord(x).unwrap();
                if c.iter().map(|v| v.abs()).sum::<i32>() == k as i32 {
                    b += 3 + c.iter().filter(|&&v| v == 0).count();
                }
            }
            assert_eq!(p.b(k), b as f64, "k={k}");
        }
        assert!(p.check_cut_mass());
    }
}
