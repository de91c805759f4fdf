//! Tail sums R_x(r) = Σ_{n≥r} n/μ(B(x,n)) and the quasi-metric l(x,y) = 1/R_x(d(x,y)).

use crate::error::{invalid, Error, Result};
use crate::graph::{ball_profile, bfs_distances, WeightedGraph};
use serde::Serialize;

/// Smallest fitted volume-growth exponent for which the power-law tail is accepted.
pub const MIN_TAIL_EXPONENT: f64 = 2.05;

/// Tail sums computed from μ(B(x,n)), n = 0..=M, plus a power-law remainder for n > M.
#[derive(Debug, Clone, Serialize)]
pub struct TailSums {
    /// tails[r] = Σ_{n=r}^{M} n/μ(B(x,n)) + remainder, r = 0..=M.
    pub tails: Vec<f64>,
    pub remainder: f64,
    /// Volume growth exponent fitted over [M/2, M].
    pub growth_exponent: f64,
}

impl TailSums {
    pub fn from_volumes(volumes: &[f64]) -> Result<Self> {
        let m = volumes.len().saturating_sub(1);
        if m < 4 {
            return invalid("profile too shallow for a tail estimate");
        }
        let h = m / 2;
        let dexp = (volumes[m] / volumes[h]).ln() / (m as f64 / h as f64).ln();
        if !(dexp > MIN_TAIL_EXPONENT) {
            return Err(Error::NotConverged { iterations: m, residual: dexp });
        }
        let remainder = (m * m) as f64 / (volumes[m] * (dexp - 2.0));
        let mut tails = vec![0.0; m + 1];
        let mut acc = remainder;
        for n in (0..=m).rev() {
            acc += n as f64 / volumes[n];
            tails[n] = acc;
        }
        Ok(TailSums { tails, remainder, growth_exponent: dexp })
    }

    /// R(r); requires r ≤ M.
    pub fn at(&self, r: usize) -> f64 {
        self.tails[r]
    }

    pub fn depth(&self) -> usize {
        self.tails.len() - 1
    }
}

/// μ(B(x,n)) for n = 0..=depth from a BFS, refusing balls that reach censored vertices.
pub fn volumes_around(g: &WeightedGraph, x: usize, depth: usize) -> Result<(Vec<f64>, Vec<usize>)> {
    let p = ball_profile(g, x, depth)?;
    Ok((p.volumes, bfs_distances(g, x, depth)))
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiMetricReport {
    pub points: Vec<usize>,
    /// l[i][j] = l(points[i], points[j]).
    pub l: Vec<Vec<f64>>,
    pub kappa: f64,
    pub max_remainder_fraction: f64,
}

/// l(x,y) on all pairs of `points` and the empirical κ over all ordered triples.
pub fn quasi_metric_tail(g: &WeightedGraph, points: &[usize], depth: usize) -> Result<QuasiMetricReport> {
    let mut l = vec![vec![0.0; points.len()]; points.len()];
    let mut frac: f64 = 0.0;
    for (i, &x) in points.iter().enumerate() {
        let (vols, dist) = volumes_around(g, x, depth)?;
        let t = TailSums::from_volumes(&vols)?;
        for (j, &y) in points.iter().enumerate() {
            let d = dist[y];
            if d > depth {
                return invalid(format!("pair ({x},{y}) is beyond the profile depth {depth}"));
            }
            l[i][j] = 1.0 / t.at(d);
            frac = frac.max(t.remainder / t.at(d));
        }
    }
    let n = points.len();
    let mut kappa: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                kappa = kappa.max(l[x][y] / (l[x][z] + l[z][y]));
            }
        }
    }
    Ok(QuasiMetricReport { points: points.to_vec(), l, kappa, max_remainder_fraction: frac })
}
