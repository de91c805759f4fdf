//! Jacobi-preconditioned conjugate gradients for sparse symmetric positive-definite systems.

use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const PAR_THRESHOLD: usize = 16_384;

/// Symmetric matrix in compressed row form; `diag` is stored separately from `vals`.
#[derive(Debug, Clone)]
pub struct SpdMatrix {
    offsets: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl SpdMatrix {
    /// Rows given as (diagonal, off-diagonal entries).
    pub fn from_rows(rows: impl Iterator<Item = (f64, Vec<(usize, f64)>)>) -> Self {
        let mut offsets = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut diag = Vec::new();
        for (d, off) in rows {
            diag.push(d);
            for (j, v) in off {
                cols.push(j as u32);
                vals.push(v);
            }
            offsets.push(cols.len());
        }
        SpdMatrix { offsets, cols, vals, diag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let mut s = self.diag[i] * x[i];
        for k in self.offsets[i]..self.offsets[i + 1] {
            s += self.vals[k] * x[self.cols[k] as usize];
        }
        s
    }

    pub fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        if self.dim() >= PAR_THRESHOLD {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = self.row_dot(i, x));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row_dot(i, x);
            }
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.mul_into(x, &mut y);
        y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Target for ‖b − Ax‖₂ / ‖b‖₂.
    pub rel_tol: f64,
    /// Iteration cap; `None` means 50·√n.
    pub max_iter: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { rel_tol: 1e-10, max_iter: None }
    }
}

impl SolverOptions {
    pub fn tight() -> Self {
        SolverOptions { rel_tol: 1e-14, max_iter: None }
    }

    pub fn with_tol(rel_tol: f64) -> Self {
        SolverOptions { rel_tol, max_iter: None }
    }

    pub fn cap(&self, n: usize) -> usize {
        self.max_iter.unwrap_or_else(|| ((50.0 * (n as f64).sqrt()).ceil() as usize).max(50))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub iterations: usize,
    pub rel_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    if a.len() >= PAR_THRESHOLD {
        a.par_chunks(4096).zip(b.par_chunks(4096)).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>()).collect::<Vec<_>>().iter().sum()
    } else {
        a.iter().zip(b).map(|(p, q)| p * q).sum()
    }
}

/// Solves A x = b. The recurrence residual drives the iteration; on apparent convergence the true
/// residual is recomputed and the iteration restarts from the current iterate if it is still too large.
pub fn pcg(a: &SpdMatrix, b: &[f64], opts: &SolverOptions) -> Result<(Vec<f64>, SolveStats)> {
    let n = a.dim();
    let cap = opts.cap(n);
    let bnorm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok((x, SolveStats::default()));
    }
    let inv: Vec<f64> = a.diag.iter().map(|d| 1.0 / d).collect();
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut ap = vec![0.0; n];
    let mut it = 0;
    let mut restarts = 0;
    loop {
        for i in 0..n {
            z[i] = inv[i] * r[i];
        }
        p.copy_from_slice(&z);
        let mut rz = dot(&r, &z);
        while it < cap {
            if dot(&r, &r).sqrt() <= opts.rel_tol * bnorm {
                break;
            }
            a.mul_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                return Err(Error::NotConverged { iterations: it, residual: dot(&r, &r).sqrt() / bnorm });
            }
            let alpha = rz / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
                z[i] = inv[i] * r[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
            it += 1;
        }
        a.mul_into(&x, &mut ap);
        for i in 0..n {
            r[i] = b[i] - ap[i];
        }
        let rel = dot(&r, &r).sqrt() / bnorm;
        if rel <= opts.rel_tol {
            return Ok((x, SolveStats { iterations: it, rel_residual: rel }));
        }
        restarts += 1;
        if it >= cap || restarts > 4 {
            return Err(Error::NotConverged { iterations: it, residual: rel });
        }
    }
}
