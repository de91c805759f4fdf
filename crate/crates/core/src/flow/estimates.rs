//! Path-level estimates across metric cuts: first-exit reciprocals and the L_R lower bound.

use super::current::UnitFlow;
use super::paths::sample_map;
use crate::error::{invalid, Error, Result};
use crate::graph::{BallProfile, DomainKind, DomainSpec};
use crate::solver::GreenSolution;
use serde::Serialize;

/// Paper radius of a ball(o, R) domain: the interior is B(o, R−1) in closed-ball terms.
pub fn inner_radius(dom: &DomainSpec) -> Result<usize> {
    match dom.kind() {
        DomainKind::Ball { radius, .. } if *radius >= 2 => Ok(radius - 1),
        DomainKind::Ball { .. } => invalid("ball radius must be at least 2"),
        _ => invalid("cut-based estimates need a ball domain"),
    }
}

/// (Σ_{k=n}^{r} 1/b_k)^{-1}, the conductance of the cuts n..r in series.
pub fn series_conductance(profile: &BallProfile, n: usize, r: usize) -> Result<f64> {
    if r > profile.r_max {
        return Err(Error::Censored { requested: r, safe: profile.r_max });
    }
    Ok(1.0 / (n..=r).map(|k| 1.0 / profile.b(k)).sum::<f64>())
}

#[derive(Debug, Clone, Serialize)]
pub struct FirstExitStats {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Monte Carlo mean of 1/V_{τ_n}.
    pub mean_reciprocal: f64,
    pub stderr: f64,
    pub bound: f64,
    pub holds: bool,
    /// Per exponent q: (mean V^{q−1}, (mean V^{-1})^{−(q−1)}, holds).
    pub moments: Vec<(f64, f64, f64, bool)>,
}

/// E[1/V_{τ_n}] against (Σ_{k=n}^{R} 1/b_k)^{-1}; the verdict allows 3 standard errors and a
/// 1e-9 relative round-off margin (the bound is attained with equality on a path graph).
pub fn first_exit_stats(flow: &UnitFlow, profile: &BallProfile, n: usize, samples: usize, seed: u64, qs: &[f64]) -> Result<FirstExitStats> {
    let r = match flow.ball_radius {
        Some(radius) if radius >= 2 => radius - 1,
        _ => return invalid("first-exit statistics need a flow from a ball domain"),
    };
    if n < 1 || n > r {
        return invalid(format!("need 1 ≤ n ≤ {r}, got n = {n}"));
    }
    if samples < 2 {
        return invalid("need at least two samples");
    }
    let bound = series_conductance(profile, n, r)?;
    let vals: Vec<Option<f64>> = sample_map(flow, samples, seed, |p| p.first_exit(n).map(|i| p.voltages[i]))?;
    let vals: Vec<f64> = vals.into_iter().collect::<Option<_>>().ok_or_else(|| Error::Invariant(format!("a sampled path never reached S_{n}")))?;
    let m = vals.len() as f64;
    let recip: Vec<f64> = vals.iter().map(|v| 1.0 / v).collect();
    let mean = recip.iter().sum::<f64>() / m;
    let var = recip.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let stderr = (var / m).sqrt();
    let moments = qs
        .iter()
        .map(|&q| {
            let lhs = vals.iter().map(|v| v.powf(q - 1.0)).sum::<f64>() / m;
            let rhs = mean.powf(-(q - 1.0));
            (q, lhs, rhs, lhs >= rhs * (1.0 - 1e-12))
        })
        .collect();
    Ok(FirstExitStats { n, samples, seed, mean_reciprocal: mean, stderr, bound, holds: mean <= bound * (1.0 + 1e-9) + 3.0 * stderr, moments })
}

#[derive(Debug, Clone, Serialize)]
pub struct LrEnergy {
    pub q: f64,
    pub radius: usize,
    pub l_r: f64,
    pub lower_bound: f64,
    pub holds: bool,
}

/// L_R = Σ g_R^q μ and ((q−1)/4) Σ_{n=1}^{R} n (Σ_{k=n}^{R} 1/b_k)^{q−1}.
pub fn lr_energy(graph: &crate::graph::WeightedGraph, dom: &DomainSpec, gs: &GreenSolution, profile: &BallProfile, q: f64) -> Result<LrEnergy> {
    if !(q > 1.0) {
        return invalid("q must exceed 1");
    }
    let r = inner_radius(dom)?;
    let l_r = dom.interior().iter().map(|&x| gs.values[x].powf(q) * graph.measure(x)).sum::<f64>();
    let lower_bound = b_series_term_sum(profile, r, q)? * (q - 1.0) / 4.0;
    Ok(LrEnergy { q, radius: r, l_r, lower_bound, holds: l_r >= lower_bound * (1.0 - 1e-12) })
}

/// Σ_{n=1}^{r} n (Σ_{k=n}^{r} 1/b_k)^{q−1}.
pub fn b_series_term_sum(profile: &BallProfile, r: usize, q: f64) -> Result<f64> {
    if r > profile.r_max {
        return Err(Error::Censored { requested: r, safe: profile.r_max });
    }
    let mut tail = 0.0;
    let mut total = 0.0;
    for n in (1..=r).rev() {
        tail += 1.0 / profile.b(n);
        total += n as f64 * tail.powf(q - 1.0);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::orient_current;
    use crate::graph::{ball_profile, build_lattice, WeightedGraph};
    use crate::solver::{DirichletProblem, SolverOptions};

    fn setup(d: usize, r: usize) -> (WeightedGraph, DomainSpec, GreenSolution, BallProfile) {
        let g = build_lattice(d, r).unwrap();
        let o = g.vertex_at(&vec![0; d]).unwrap();
        let dom = DomainSpec::ball(&g, o, r).unwrap();
        let gs = DirichletProblem::new(&g, dom.clone()).unwrap().with_options(SolverOptions::tight()).green_vector(o).unwrap();
        let prof = ball_profile(&g, o, r - 1).unwrap();
        (g, dom, gs, prof)
    }

    #[test]
    fn segment_first_exit_is_tight() {
        let r = 9;
        let (g, dom, gs, prof) = setup(1, r);
        let f = orient_current(&g, &dom, &gs).unwrap();
        let s = first_exit_stats(&f, &prof, 1, 100, 5, &[2.0]).unwrap();
        assert!((s.mean_reciprocal - 2.0 / (r - 1) as f64).abs() < 1e-12);
        assert!((s.bound - 2.0 / (r - 1) as f64).abs() < 1e-12);
        assert!(s.holds);
        assert!(s.moments[0].3);
    }

    #[test]
    fn segment_energy_closed_form() {
        let (g, dom, gs, prof) = setup(1, 10);
        let e = lr_energy(&g, &dom, &gs, &prof, 2.0).unwrap();
        let exact: f64 = (-9..=9i32).map(|x| ((10 - x.abs()) as f64 / 2.0).powi(2) * 2.0).sum();
        let bound: f64 = 0.25 * (1..=9).map(|n| n as f64 * (10 - n) as f64 / 2.0).sum::<f64>();
        assert!((e.l_r - exact).abs() < 1e-9 * exact);
        assert!((e.lower_bound - bound).abs() < 1e-12 * bound);
        assert!(e.holds);
        let near_one = lr_energy(&g, &dom, &gs, &prof, 1.0 + 1e-9).unwrap();
        assert!(near_one.lower_bound < 1e-6 && near_one.holds);
    }

    #[test]
    fn star_first_exit() {
        let m = 4;
        let edges: Vec<_> = (1..=m).map(|i| (0, i, 1.0)).chain((1..=m).map(|i| (i, m + i, 1.0))).collect();
        let g = WeightedGraph::from_edges(2 * m + 1, &edges).unwrap();
        let dom = DomainSpec::ball(&g, 0, 2).unwrap();
        let gs = DirichletProblem::new(&g, dom.clone()).unwrap().with_options(SolverOptions::tight()).green_vector(0).unwrap();
        let f = orient_current(&g, &dom, &gs).unwrap();
        let prof = ball_profile(&g, 0, 1).unwrap();
        let s = first_exit_stats(&f, &prof, 1, 50, 1, &[]).unwrap();
        // Arms are two unit resistors in series, m in parallel: g(o) = 2/m, and each arm carries 1/m.
        assert!((gs.at_pole() - 2.0 / m as f64).abs() < 1e-14);
        let v1 = gs.at_pole() - 1.0 / m as f64;
        assert!((s.mean_reciprocal - 1.0 / v1).abs() < 1e-12);
        assert_eq!(s.bound, 1.0 / (1.0 / m as f64));
        assert!(s.holds);
    }
}
