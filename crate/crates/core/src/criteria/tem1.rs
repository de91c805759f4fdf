//! Green level-set conditions: Σ g(o,y)^q ν(y) and sup_x Σ_{g(o,y) ≥ 1/r} g(x,y) ν(y) against r^{q−1}.

use crate::error::{invalid, Result};
use crate::solver::DirichletProblem;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct LevelSetValue {
    pub r: f64,
    pub set_size: usize,
    pub sup: f64,
    /// sup / r^{q−1}.
    pub normalized: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tem1Report {
    pub q: f64,
    pub et1: f64,
    pub levels: Vec<LevelSetValue>,
    /// Grid points whose level set was empty.
    pub skipped: Vec<f64>,
    /// max over the grid of sup / r^{q−1}.
    pub fitted_c: f64,
}

/// Geometric grid r_0 2^{j/2} from 1/g(o,o) up to 1/min g(o,·), both endpoints included.
pub fn level_grid(r_lo: f64, r_hi: f64) -> Vec<f64> {
    let mut grid = vec![r_lo];
    let mut j = 1;
    loop {
        let r = r_lo * 2f64.powf(j as f64 / 2.0);
        if r >= r_hi * (1.0 - 1e-12) {
            break;
        }
        grid.push(r);
        j += 1;
    }
    if r_hi > r_lo {
        grid.push(r_hi);
    }
    grid
}

/// Evaluates both conditions on one truncation. Level sets are closed, {y : g(o,y) ≥ 1/r}.
pub fn tem1_conditions(prob: &DirichletProblem, sigma: &[f64], q: f64, pole: usize) -> Result<Tem1Report> {
    if !(q > 1.0) {
        return invalid("q must exceed 1");
    }
    if !(sigma[pole] > 0.0) {
        return invalid("σ must be positive at the pole");
    }
    let graph = prob.graph();
    let interior = prob.domain().interior();
    let gs = prob.green_vector(pole)?;
    let g = &gs.values;
    let et1: f64 = interior.iter().map(|&y| g[y].powf(q) * sigma[y] * graph.measure(y)).sum();
    let gmin = interior.iter().map(|&y| g[y]).fold(f64::INFINITY, f64::min);
    let grid = level_grid(1.0 / g[pole], 1.0 / gmin);
    let results: Result<Vec<(f64, usize, Option<f64>)>> = grid
        .par_iter()
        .map(|&r| {
            let thr = 1.0 / r;
            let mut f = vec![0.0; graph.num_vertices()];
            let mut size = 0;
            for &y in interior {
                if g[y] >= thr * (1.0 - 1e-12) && sigma[y] > 0.0 {
                    f[y] = sigma[y];
                    size += 1;
                }
            }
            if size == 0 {
                return Ok((r, 0, None));
            }
            let (u, _) = prob.green_operator(&f)?;
            let sup = interior.iter().map(|&x| u[x]).fold(0.0, f64::max);
            Ok((r, size, Some(sup)))
        })
        .collect();
    let mut levels = Vec::new();
    let mut skipped = Vec::new();
    for (r, size, sup) in results? {
        match sup {
            Some(sup) => levels.push(LevelSetValue { r, set_size: size, sup, normalized: sup / r.powf(q - 1.0) }),
            None => skipped.push(r),
        }
    }
    let fitted_c = levels.iter().map(|l| l.normalized).fold(0.0, f64::max);
    Ok(Tem1Report { q, et1, levels, skipped, fitted_c })
}
