//! Volume-type conditions built from ball profiles of μ and ν = σμ:
//! the series Σ_n T(n)^{q−1} ν(B(o,n)) n/μ(B(o,n)) and the sup over x of
//! [Σ_m m ν(B(x,m) ∩ B(o,n))/μ(B(x,m))] T(n)^{q−1}, with T(n) = Σ_{m≥n} m/μ(B(o,m)).

use super::quasi_metric::{volumes_around, TailSums};
use super::series::{classify_partial_sums, classify_sweep, Classification};
use crate::error::{invalid, Result};
use crate::graph::WeightedGraph;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ThmMainReport {
    pub q: f64,
    pub n_max: usize,
    pub depth: usize,
    /// Prefix sums of the first series, n = 1..=n_max.
    pub e1_partial_sums: Vec<f64>,
    pub e1_classification: Classification,
    /// sup over the x sample, n = 1..=n_max.
    pub e2_values: Vec<f64>,
    /// Running maximum of e2 compared at n_max/2 and n_max.
    pub e2_classification: Classification,
    pub x_sample: Vec<usize>,
    pub max_remainder_fraction: f64,
}

/// A(x,n) = Σ_{y ∈ B(o,n)} ν(y) R_x(max(d(x,y),1)) for n = 0..=n_max.
fn inner_sums(g: &WeightedGraph, nu: &[f64], dist_o: &[usize], x: usize, n_max: usize, depth: usize) -> Result<(Vec<f64>, f64)> {
    let (vols, dist_x) = volumes_around(g, x, depth)?;
    let t = TailSums::from_volumes(&vols)?;
    let mut by_shell = vec![0.0; n_max + 1];
    for y in 0..g.num_vertices() {
        let n = dist_o[y];
        if n > n_max || nu[y] == 0.0 {
            continue;
        }
        let m = dist_x[y];
        if m > depth {
            return invalid(format!("profile depth {depth} too small for sample vertex {x}"));
        }
        by_shell[n] += nu[y] * t.at(m.max(1));
    }
    for n in 1..=n_max {
        by_shell[n] += by_shell[n - 1];
    }
    Ok((by_shell, t.remainder / t.at(depth.min(t.depth()))))
}

/// Both conditions on a graph truncation; `depth` bounds every profile used.
pub fn thm_main_conditions(g: &WeightedGraph, o: usize, sigma: &[f64], q: f64, n_max: usize, depth: usize, x_sample: &[usize]) -> Result<ThmMainReport> {
    if !(q > 1.0) {
        return invalid("q must exceed 1");
    }
    if n_max < 4 || n_max > depth {
        return invalid("need 4 ≤ n_max ≤ depth");
    }
    let nu: Vec<f64> = (0..g.num_vertices()).map(|x| sigma[x] * g.measure(x)).collect();
    let (vol_o, dist_o) = volumes_around(g, o, depth)?;
    let t_o = TailSums::from_volumes(&vol_o)?;
    let mut nu_ball = vec![0.0; n_max + 1];
    for y in 0..g.num_vertices() {
        if dist_o[y] <= n_max {
            nu_ball[dist_o[y]] += nu[y];
        }
    }
    for n in 1..=n_max {
        nu_ball[n] += nu_ball[n - 1];
    }
    let mut e1 = Vec::with_capacity(n_max);
    let mut acc = 0.0;
    for n in 1..=n_max {
        acc += t_o.at(n).powf(q - 1.0) * nu_ball[n] / vol_o[n] * n as f64;
        e1.push(acc);
    }
    let inner: Result<Vec<(Vec<f64>, f64)>> = x_sample.par_iter().map(|&x| inner_sums(g, &nu, &dist_o, x, n_max, depth)).collect();
    let inner = inner?;
    let mut frac = t_o.remainder / t_o.at(n_max);
    let mut e2 = vec![0.0; n_max];
    for (a, f) in &inner {
        frac = frac.max(*f);
        for n in 1..=n_max {
            e2[n - 1] = f64::max(e2[n - 1], a[n] * t_o.at(n).powf(q - 1.0));
        }
    }
    let running = |n: usize| e2[..n].iter().copied().fold(0.0, f64::max);
    Ok(ThmMainReport {
        q,
        n_max,
        depth,
        e1_classification: classify_partial_sums(&e1),
        e1_partial_sums: e1,
        e2_classification: classify_sweep(&[running(n_max / 2), running(n_max)]),
        e2_values: e2,
        x_sample: x_sample.to_vec(),
        max_remainder_fraction: frac,
    })
}

/// Lattice sample for the sup over x: the origin and, for each distance t, the points t·e_1 and
/// the most diagonal point of ℓ¹ norm t.
pub fn lattice_x_sample(g: &WeightedGraph, distances: &[usize]) -> Result<Vec<usize>> {
    let d = g.dim();
    if d == 0 {
        return invalid("graph has no lattice coordinates");
    }
    let mut out = vec![g.vertex_at(&vec![0; d]).ok_or_else(|| crate::Error::InvalidArgument("origin missing".into()))?];
    for &t in distances {
        let mut axis = vec![0i32; d];
        axis[0] = t as i32;
        let mut diag = vec![(t / d) as i32; d];
        for c in diag.iter_mut().take(t % d) {
            *c += 1;
        }
        for c in [axis, diag] {
            let v = g.vertex_at(&c).ok_or_else(|| crate::Error::InvalidArgument(format!("{c:?} outside the lattice")))?;
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    Ok(out)
}
