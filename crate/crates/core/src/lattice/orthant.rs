//! k-orthants A = {x ∈ ℤᵈ : x_1,…,x_k ≥ 1}: Green function by reflection, the Θ comparator and
//! the fixed-pole profile.

use super::table::GreenTable;
use crate::error::{invalid, Result};
use crate::graph::{build_orthant, OrthantBox};
use crate::rng::substream;
use crate::solver::{DirichletProblem, SolverOptions};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Orthant with k constrained axes and a truncation box.
#[derive(Debug, Clone, Serialize)]
pub struct OrthantSpec {
    pub d: usize,
    pub k: usize,
    /// Box extents: constrained axes run over 1..=ext, free axes over −ext..=ext.
    pub ext: Vec<usize>,
}

impl OrthantSpec {
    pub fn new(d: usize, k: usize, ext: Vec<usize>) -> Result<Self> {
        if k > d || d == 0 || d > 8 {
            return invalid(format!("need 0 ≤ k ≤ d ≤ 8, got k={k}, d={d}"));
        }
        if ext.len() != d {
            return invalid("one extent per axis");
        }
        Ok(OrthantSpec { d, k, ext })
    }

    pub fn cube(d: usize, k: usize, side: usize) -> Result<Self> {
        Self::new(d, k, vec![side; d])
    }

    /// Reflection group elements as bitmasks E ⊆ {0..k} with parity (−1)^{|E|}.
    pub fn group(&self) -> Vec<(u32, f64)> {
        (0..1u32 << self.k).map(|e| (e, if e.count_ones() % 2 == 0 { 1.0 } else { -1.0 })).collect()
    }

    /// g_E y: flips the sign of the coordinates in E.
    pub fn reflect(&self, e: u32, y: &[i32]) -> Vec<i32> {
        y.iter().enumerate().map(|(i, &v)| if e >> i & 1 == 1 { -v } else { v }).collect()
    }

    pub fn in_orthant(&self, x: &[i32]) -> bool {
        x.len() == self.d && x[..self.k].iter().all(|&v| v >= 1)
    }

    pub fn in_box(&self, x: &[i32]) -> bool {
        self.in_orthant(x) && x.iter().zip(&self.ext).all(|(&v, &e)| v.unsigned_abs() as usize <= e)
    }

    pub fn to_box(&self) -> Result<OrthantBox> {
        OrthantBox::new(self.d, self.k, self.ext.clone())
    }
}

/// G_A(x,y) = Σ_E (−1)^{|E|} G(x − g_E y).
pub fn orthant_green_reflection(table: &GreenTable, x: &[i32], y: &[i32], k: usize) -> Result<f64> {
    let d = table.dim();
    if x.len() != d || y.len() != d || k > d {
        return invalid("dimension mismatch");
    }
    let mut z = vec![0i32; d];
    let mut s = 0.0;
    for e in 0..1u32 << k {
        for i in 0..d {
            let yi = if e >> i & 1 == 1 { -y[i] } else { y[i] };
            z[i] = x[i] - yi;
        }
        let sign = if e.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * table.get(&z)?;
    }
    Ok(s)
}

fn euclid(x: &[i32], y: &[i32]) -> f64 {
    x.iter().zip(y).map(|(a, b)| ((a - b) as f64).powi(2)).sum::<f64>().sqrt()
}

/// Θ(x,y) = (1+|x−y|)^{2−d} Π_{i≤k} (1 ∧ x_i y_i/(1+|x−y|)²).
pub fn theta_comparator(x: &[i32], y: &[i32], d: usize, k: usize) -> f64 {
    let r = 1.0 + euclid(x, y);
    let mut t = r.powf(2.0 - d as f64);
    for i in 0..k {
        t *= f64::min(1.0, (x[i] as f64 * y[i] as f64) / (r * r));
    }
    t
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaSweep {
    pub pairs: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// max/min.
    pub spread: f64,
    pub argmin: (Vec<i32>, Vec<i32>),
    pub argmax: (Vec<i32>, Vec<i32>),
}

fn random_point(spec: &OrthantSpec, rng: &mut impl Rng) -> Vec<i32> {
    (0..spec.d)
        .map(|i| {
            let e = spec.ext[i] as i32;
            if i < spec.k { rng.random_range(1..=e) } else { rng.random_range(-e..=e) }
        })
        .collect()
}

/// min and max of G_A/Θ over pairs drawn uniformly from the box.
pub fn theta_sweep(table: &GreenTable, spec: &OrthantSpec, pairs: usize, seed: u64) -> Result<ThetaSweep> {
    let mut rng = substream(seed, 0);
    let sample: Vec<(Vec<i32>, Vec<i32>)> = (0..pairs).map(|_| (random_point(spec, &mut rng), random_point(spec, &mut rng))).collect();
    let vals: Result<Vec<f64>> = sample
        .par_iter()
        .map(|(x, y)| Ok(orthant_green_reflection(table, x, y, spec.k)? / theta_comparator(x, y, spec.d, spec.k)))
        .collect();
    let vals = vals?;
    let (mut imin, mut imax) = (0, 0);
    for (i, v) in vals.iter().enumerate() {
        if *v < vals[imin] {
            imin = i;
        }
        if *v > vals[imax] {
            imax = i;
        }
    }
    Ok(ThetaSweep {
        pairs,
        min_ratio: vals[imin],
        max_ratio: vals[imax],
        spread: vals[imax] / vals[imin],
        argmin: sample[imin].clone(),
        argmax: sample[imax].clone(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PoleComparison {
    pub pole: Vec<i32>,
    pub pairs: usize,
    pub max_rel_diff: f64,
    pub worst_x: Vec<i32>,
}

/// Compares the reflection formula with a direct Dirichlet solve on the orthant box, for every x
/// in the box with |x − y| ≤ max_dist, one solve per pole y.
pub fn reflection_vs_direct(table: &GreenTable, spec: &OrthantSpec, poles: &[Vec<i32>], max_dist: f64) -> Result<Vec<PoleComparison>> {
    let (g, dom) = build_orthant(&spec.to_box()?)?;
    let prob = DirichletProblem::new(&g, dom)?.with_options(SolverOptions::tight());
    poles
        .par_iter()
        .map(|y| {
            let yv = g.vertex_at(y).filter(|&v| prob.domain().contains(v));
            let Some(yv) = yv else {
                return invalid(format!("pole {y:?} outside the box"));
            };
            let col = prob.green_vector(yv)?;
            let mut cmp = PoleComparison { pole: y.clone(), pairs: 0, max_rel_diff: 0.0, worst_x: y.clone() };
            for &x in prob.domain().interior() {
                let xc = g.coord(x).unwrap();
                if euclid(xc, y) > max_dist {
                    continue;
                }
                let ga = orthant_green_reflection(table, xc, y, spec.k)?;
                let rel = (ga - col.values[x]).abs() / ga;
                cmp.pairs += 1;
                if rel > cmp.max_rel_diff {
                    cmp.max_rel_diff = rel;
                    cmp.worst_x = xc.to_vec();
                }
            }
            Ok(cmp)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPoleProfile {
    pub pole: Vec<i32>,
    /// (y, G_A(o,y) / (H(y)|y|^{−(d+2k−2)})) for |y| > 2|o|.
    pub far: Vec<(Vec<i32>, f64)>,
    /// The same ratio for |y| ≤ 2|o|.
    pub near: Vec<(Vec<i32>, f64)>,
    pub far_min: f64,
    pub far_max: f64,
}

/// Ratios of G_A(o,y) to the coordinate-product profile H(y)|y|^{−(d+2k−2)}, H(y) = Π_{i≤k} y_i.
pub fn fixed_pole_profile(table: &GreenTable, o: &[i32], k: usize, ys: &[Vec<i32>]) -> Result<FixedPoleProfile> {
    let d = table.dim();
    let zero = vec![0i32; d];
    let on = euclid(o, &zero);
    let mut rep = FixedPoleProfile { pole: o.to_vec(), far: vec![], near: vec![], far_min: f64::INFINITY, far_max: 0.0 };
    for y in ys {
        if y[..k].iter().any(|&v| v < 1) {
            return invalid(format!("{y:?} is not in the orthant"));
        }
        let h: f64 = y[..k].iter().map(|&v| v as f64).product();
        let yn = euclid(y, &zero);
        let profile = h * yn.powf(-((d + 2 * k) as f64 - 2.0));
        let ratio = orthant_green_reflection(table, o, y, k)? / profile;
        if yn > 2.0 * on {
            rep.far_min = rep.far_min.min(ratio);
            rep.far_max = rep.far_max.max(ratio);
            rep.far.push((y.clone(), ratio));
        } else {
            rep.near.push((y.clone(), ratio));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_structure() {
        let s = OrthantSpec::cube(3, 2, 5).unwrap();
        let g = s.group();
        assert_eq!(g.len(), 4);
        assert_eq!(g[0], (0, 1.0));
        let y = vec![2, 3, -1];
        for (e, _) in g {
            assert_eq!(s.reflect(e, &s.reflect(e, &y)), y);
        }
    }

    #[test]
    fn theta_special_cases() {
        assert_eq!(theta_comparator(&[3, 1, 2], &[3, 1, 2], 3, 2), 1.0);
        let t = theta_comparator(&[50, 50, 0], &[51, 50, 0], 3, 2);
        assert!((t - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reflection_properties() {
        let t = GreenTable::new(3, 12).unwrap();
        // k = 0 is the full-space value.
        assert_eq!(orthant_green_reflection(&t, &[1, 2, 0], &[3, 0, 1], 0).unwrap(), t.get(&[-2, 2, -1]).unwrap());
        // Symmetry and vanishing on the reflecting plane.
        for (x, y) in [([1, 2, 0], [3, 1, 1]), ([2, 4, -1], [5, 1, 3])] {
            for k in 1..=2 {
                let a = orthant_green_reflection(&t, &x, &y, k).unwrap();
                let b = orthant_green_reflection(&t, &y, &x, k).unwrap();
                assert!(a > 0.0 && (a - b).abs() <= 1e-8 * a);
            }
            let mut xb = x;
            xb[0] = 0;
            assert!(orthant_green_reflection(&t, &xb, &y, 1).unwrap().abs() < 1e-12);
        }
        // Decreasing toward the boundary along a ray.
        let vals: Vec<f64> = (0..=5).map(|h| orthant_green_reflection(&t, &[h, 0, 0], &[5, 0, 0], 1).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fixed_pole_boundary_vanishing() {
        let t = GreenTable::new(3, 14).unwrap();
        let ys: Vec<Vec<i32>> = vec![vec![6, 6, 6], vec![1, 6, 6], vec![9, 9, 9], vec![1, 1, 1]];
        let p = fixed_pole_profile(&t, &[1, 1, 1], 3, &ys).unwrap();
        assert_eq!(p.far.len(), 3);
        assert!(p.far_min > 0.0 && p.far_max / p.far_min < 5.0, "{p:?}");
        let k0 = fixed_pole_profile(&t, &[0, 0, 0], 0, &[vec![6, 0, 0], vec![12, 0, 0]]).unwrap();
        let slope = (k0.far[1].1 / k0.far[0].1).ln();
        assert!(slope.abs() < 0.2);
    }
}
