//! Dirichlet solves on ℤᵈ regions invariant under coordinate permutations and sign flips,
//! reduced to one unknown per orbit. Valid only for data with the same symmetry.
//!
//! Orbit representatives are nonincreasing tuples of nonnegative coordinates. With orbit
//! indicators as basis the quadratic form becomes S = W·A_red, which is again symmetric
//! positive definite, so the plain PCG applies.

use super::cg::{pcg, SolveStats, SolverOptions, SpdMatrix};
use crate::error::{invalid, Error, Result};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitShape {
    /// Interior {|x|₁ < radius}.
    L1Ball { radius: usize },
    /// Interior {|x|_∞ ≤ half_width}.
    Cube { half_width: usize },
}

impl OrbitShape {
    fn inside(&self, rep: &[i32]) -> bool {
        match *self {
            OrbitShape::L1Ball { radius } => rep.iter().map(|v| v.unsigned_abs() as usize).sum::<usize>() < radius,
            OrbitShape::Cube { half_width } => rep.iter().all(|v| v.unsigned_abs() as usize <= half_width),
        }
    }

    fn max_coord(&self) -> usize {
        match *self {
            OrbitShape::L1Ball { radius } => radius.saturating_sub(1),
            OrbitShape::Cube { half_width } => half_width,
        }
    }
}

pub struct OrbitDomain {
    d: usize,
    shape: OrbitShape,
    reps: Vec<i32>,
    weights: Vec<f64>,
    index: HashMap<u128, u32>,
    matrix: SpdMatrix,
    pub options: SolverOptions,
}

fn key(rep: &[i32]) -> u128 {
    rep.iter().fold(0u128, |k, &v| (k << 16) | v as u128)
}

/// Canonical representative: absolute values sorted in nonincreasing order.
pub fn canonical(c: &[i32]) -> Vec<i32> {
    let mut r: Vec<i32> = c.iter().map(|v| v.abs()).collect();
    r.sort_unstable_by(|a, b| b.cmp(a));
    r
}

/// Number of lattice points in the orbit of a representative: d!/Π m! · 2^{#nonzero}.
pub fn orbit_size(rep: &[i32]) -> f64 {
    let mut size = (1..=rep.len()).map(|i| i as f64).product::<f64>();
    let mut i = 0;
    while i < rep.len() {
        let mut j = i;
        while j < rep.len() && rep[j] == rep[i] {
            j += 1;
        }
        size /= (1..=(j - i)).map(|v| v as f64).product::<f64>();
        i = j;
    }
    size * 2f64.powi(rep.iter().filter(|&&v| v != 0).count() as i32)
}

impl OrbitDomain {
    pub fn new(d: usize, shape: OrbitShape) -> Result<Self> {
        if d == 0 || d > 8 {
            return invalid("orbit solver supports 1 ≤ d ≤ 8");
        }
        let m = shape.max_coord();
        if m >= 1 << 15 {
            return invalid("orbit region too wide");
        }
        let mut reps = Vec::new();
        let mut cur = vec![0i32; d];
        let cap = crate::graph::max_vertices();
        fn rec(pos: usize, bound: i32, cur: &mut Vec<i32>, shape: &OrbitShape, reps: &mut Vec<i32>, cap: usize) -> Result<()> {
            if pos == cur.len() {
                if shape.inside(cur) {
                    if reps.len() / cur.len() >= cap {
                        return Err(Error::Resource(format!("more than {cap} orbit representatives")));
                    }
                    reps.extend_from_slice(cur);
                }
                return Ok(());
            }
            for v in (0..=bound).rev() {
                cur[pos] = v;
                if let OrbitShape::L1Ball { radius } = shape {
                    if cur[..=pos].iter().sum::<i32>() >= *radius as i32 {
                        continue;
                    }
                }
                rec(pos + 1, v, cur, shape, reps, cap)?;
            }
            Ok(())
        }
        rec(0, m as i32, &mut cur, &shape, &mut reps, cap)?;
        let n = reps.len() / d;
        let mut index = HashMap::with_capacity(n);
        for i in 0..n {
            index.insert(key(&reps[i * d..(i + 1) * d]), i as u32);
        }
        let weights: Vec<f64> = (0..n).map(|i| orbit_size(&reps[i * d..(i + 1) * d])).collect();
        let mut rows = Vec::with_capacity(n);
        let mut nb = vec![0i32; d];
        for i in 0..n {
            let rep = &reps[i * d..(i + 1) * d];
            let mut acc: Vec<(usize, f64)> = Vec::with_capacity(2 * d);
            for a in 0..d {
                for s in [-1, 1] {
                    nb.copy_from_slice(rep);
                    nb[a] += s;
                    let c = canonical(&nb);
                    if let Some(&j) = index.get(&key(&c)) {
                        match acc.iter_mut().find(|e| e.0 == j as usize) {
                            Some(e) => e.1 -= weights[i],
                            None => acc.push((j as usize, -weights[i])),
                        }
                    }
                }
            }
            acc.sort_by_key(|e| e.0);
            rows.push((2.0 * d as f64 * weights[i], acc));
        }
        let matrix = SpdMatrix::from_rows(rows.into_iter());
        Ok(OrbitDomain { d, shape, reps, weights, index, matrix, options: SolverOptions::default() })
    }

    pub fn with_options(mut self, options: SolverOptions) -> Self {
        self.options = options;
        self
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn shape(&self) -> OrbitShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn rep(&self, i: usize) -> &[i32] {
        &self.reps[i * self.d..(i + 1) * self.d]
    }

    /// Number of lattice points represented by representative `i`.
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Representative index of any interior lattice point.
    pub fn index_of(&self, c: &[i32]) -> Option<usize> {
        if c.len() != self.d {
            return None;
        }
        self.index.get(&key(&canonical(c))).map(|&i| i as usize)
    }

    pub fn origin(&self) -> usize {
        self.index_of(&vec![0; self.d]).expect("origin is interior")
    }

    /// Solves the full-lattice conductance system A u = b for orbit-constant b (one value per representative).
    pub fn solve_conductance(&self, b: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
        let rhs: Vec<f64> = b.iter().zip(&self.weights).map(|(v, w)| v * w).collect();
        pcg(&self.matrix, &rhs, &self.options)
    }

    /// g(0, ·) on the region, one value per representative.
    pub fn green_origin(&self) -> Result<(Vec<f64>, SolveStats)> {
        let mut b = vec![0.0; self.len()];
        b[self.origin()] = 1.0;
        self.solve_conductance(&b)
    }

    /// G f with unit conductances (μ ≡ 2d) for orbit-constant f.
    pub fn green_operator(&self, f: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
        let b: Vec<f64> = f.iter().map(|v| v * 2.0 * self.d as f64).collect();
        self.solve_conductance(&b)
    }

    /// −Δu at every representative, with u = 0 outside the region.
    pub fn neg_laplacian(&self, u: &[f64]) -> Vec<f64> {
        let d = self.d;
        let mut nb = vec![0i32; d];
        (0..self.len())
            .map(|i| {
                let rep = self.rep(i);
                let mut s = 2.0 * d as f64 * u[i];
                for a in 0..d {
                    for sg in [-1, 1] {
                        nb.copy_from_slice(rep);
                        nb[a] += sg;
                        if let Some(j) = self.index_of(&nb) {
                            s -= u[j];
                        }
                    }
                }
                s / (2.0 * d as f64)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_lattice, DomainSpec};
    use crate::solver::DirichletProblem;

    #[test]
    fn orbit_sizes_sum_to_ball() {
        let dom = OrbitDomain::new(3, OrbitShape::L1Ball { radius: 7 }).unwrap();
        let total: f64 = (0..dom.len()).map(|i| dom.weight(i)).sum();
        assert_eq!(total as u128, crate::graph::l1_ball_size(3, 6));
        let cube = OrbitDomain::new(2, OrbitShape::Cube { half_width: 4 }).unwrap();
        assert_eq!((0..cube.len()).map(|i| cube.weight(i)).sum::<f64>(), 81.0);
    }

    #[test]
    fn matches_full_solve() {
        let r = 9;
        let g = build_lattice(3, r).unwrap();
        let o = g.vertex_at(&[0, 0, 0]).unwrap();
        let p = DirichletProblem::new(&g, DomainSpec::ball(&g, o, r).unwrap()).unwrap().with_options(SolverOptions::tight());
        let full = p.green_vector(o).unwrap();
        let orb = OrbitDomain::new(3, OrbitShape::L1Ball { radius: r }).unwrap().with_options(SolverOptions::tight());
        let (red, _) = orb.green_origin().unwrap();
        for &x in p.domain().interior() {
            let i = orb.index_of(g.coord(x).unwrap()).unwrap();
            assert!((red[i] - full.values[x]).abs() < 1e-12, "{:?}", g.coord(x));
        }
        let lap = orb.neg_laplacian(&red);
        assert!((lap[orb.origin()] - 1.0 / 6.0).abs() < 1e-12);
        assert!(lap.iter().enumerate().all(|(i, v)| i == orb.origin() || v.abs() < 1e-12));
    }
}
