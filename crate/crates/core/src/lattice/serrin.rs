//! Sweeps of the Green-potential sup-ratio across truncations and exponents on ℤᵈ and k-orthants.

use crate::criteria::{classify_sweep, potential_ratio, Classification, CriterionReport};
use crate::error::{invalid, Result};
use crate::graph::{build_orthant, OrthantBox};
use crate::solver::{DirichletProblem, OrbitDomain, OrbitShape};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SerrinDomain {
    /// ℓ¹ balls of ℤᵈ, weight (1+|x|)^{−α}, pole at the origin.
    Lattice { d: usize },
    /// Orthant boxes, weight |x|^{−α}, pole at (1,…,1,0,…,0).
    Orthant { d: usize, k: usize },
}

impl SerrinDomain {
    pub fn dim(&self) -> usize {
        match *self {
            SerrinDomain::Lattice { d } | SerrinDomain::Orthant { d, .. } => d,
        }
    }

    /// Critical exponent: (d−α)/(d−2) on ℤᵈ and (d+k−α)/(d+k−2) on k-orthants.
    pub fn threshold(&self, alpha: f64) -> f64 {
        match *self {
            SerrinDomain::Lattice { d } => (d as f64 - alpha) / (d as f64 - 2.0),
            SerrinDomain::Orthant { d, k } => ((d + k) as f64 - alpha) / ((d + k) as f64 - 2.0),
        }
    }
}

/// sup_x G(σ g^q)/g on the ℓ¹ ball of radius R via the orbit solver.
pub fn lattice_ratio(d: usize, radius: usize, alpha: f64, q: f64) -> Result<f64> {
    let dom = OrbitDomain::new(d, OrbitShape::L1Ball { radius })?;
    let (g, _) = dom.green_origin()?;
    let f: Vec<f64> = (0..dom.len())
        .map(|i| {
            let r = dom.rep(i).iter().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt();
            (1.0 + r).powf(-alpha) * g[i].powf(q)
        })
        .collect();
    let (v, _) = dom.green_operator(&f)?;
    Ok((0..dom.len()).map(|i| v[i] / g[i]).fold(0.0, f64::max))
}

/// The same ratio on the orthant box of side L with the full solver.
pub fn orthant_ratio(d: usize, k: usize, side: usize, alpha: f64, q: f64) -> Result<f64> {
    let (g, dom) = build_orthant(&OrthantBox::cube(d, k, side)?)?;
    let pole: Vec<i32> = (0..d).map(|i| i32::from(i < k)).collect();
    let o = g.vertex_at(&pole).expect("pole in box");
    let sigma: Vec<f64> = (0..g.num_vertices()).map(|x| g.euclid_norm(x).unwrap().powf(-alpha)).collect();
    let prob = DirichletProblem::new(&g, dom)?;
    Ok(potential_ratio(&prob, &sigma, q, o)?.sup)
}

#[derive(Debug, Clone, Serialize)]
pub struct SerrinSweep {
    pub domain: SerrinDomain,
    pub alpha: f64,
    pub threshold: f64,
    pub reports: Vec<CriterionReport>,
    /// Adjacent grid points (q_lo, q_hi) where the classification changes from growing to bounded.
    pub crossover: Option<(f64, f64)>,
    pub bracket_contains_threshold: Option<bool>,
    /// No growing verdict above a bounded one.
    pub monotone_in_q: bool,
}

/// Ratio trajectories for every q across the radii, classified by the doubling-sweep rule on the
/// last step.
pub fn serrin_sweep(domain: SerrinDomain, alpha: f64, qs: &[f64], radii: &[usize]) -> Result<SerrinSweep> {
    let d = domain.dim();
    if d < 3 {
        return invalid("Serrin sweeps need d ≥ 3");
    }
    if qs.is_empty() || radii.len() < 2 || qs.iter().any(|q| !(*q > 1.0)) {
        return invalid("need q > 1 and at least two radii");
    }
    let mut qs = qs.to_vec();
    qs.sort_by(f64::total_cmp);
    let jobs: Vec<(usize, usize)> = (0..qs.len()).flat_map(|i| (0..radii.len()).map(move |j| (i, j))).collect();
    let vals: Result<Vec<f64>> = jobs
        .par_iter()
        .map(|&(i, j)| match domain {
            SerrinDomain::Lattice { d } => lattice_ratio(d, radii[j], alpha, qs[i]),
            SerrinDomain::Orthant { d, k } => orthant_ratio(d, k, radii[j], alpha, qs[i]),
        })
        .collect();
    let vals = vals?;
    let threshold = domain.threshold(alpha);
    let mut reports = Vec::new();
    for (i, &q) in qs.iter().enumerate() {
        let traj: Vec<f64> = vals[i * radii.len()..(i + 1) * radii.len()].to_vec();
        let mut rep = CriterionReport::new("potential_ratio", classify_sweep(&traj), "sweep: last-step change < 10% bounded, factor ≥ 1.5 growing")
            .param("q", q)
            .param("alpha", alpha)
            .param("d", d as f64)
            .tolerance("stable_change", crate::criteria::STABLE_CHANGE)
            .tolerance("growth_factor", crate::criteria::GROWTH_FACTOR)
            .with_points(radii.iter().copied().zip(traj));
        if let SerrinDomain::Orthant { k, .. } = domain {
            rep = rep.param("k", k as f64);
        }
        reports.push(rep);
    }
    let cls: Vec<Classification> = reports.iter().map(|r| r.classification).collect();
    let monotone_in_q = !cls.iter().enumerate().any(|(i, c)| *c == Classification::Growing && cls[..i].contains(&Classification::Bounded));
    let crossover = (1..qs.len())
        .find(|&i| cls[i - 1] == Classification::Growing && cls[i] == Classification::Bounded)
        .map(|i| (qs[i - 1], qs[i]));
    Ok(SerrinSweep {
        domain,
        alpha,
        threshold,
        reports,
        crossover,
        bracket_contains_threshold: crossover.map(|(lo, hi)| lo <= threshold && threshold < hi),
        monotone_in_q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_lattice, DomainSpec};
    use crate::solver::SolverOptions;

    #[test]
    fn orbit_ratio_matches_full_solver() {
        let r = 8;
        let g = build_lattice(3, r).unwrap();
        let o = g.vertex_at(&[0, 0, 0]).unwrap();
        let p = DirichletProblem::new(&g, DomainSpec::ball(&g, o, r).unwrap()).unwrap().with_options(SolverOptions::tight());
        let sigma: Vec<f64> = (0..g.num_vertices()).map(|x| (1.0 + g.euclid_norm(x).unwrap()).powf(-1.0)).collect();
        let full = potential_ratio(&p, &sigma, 2.5, o).unwrap().sup;
        let orb = lattice_ratio(3, r, 1.0, 2.5).unwrap();
        assert!((full - orb).abs() < 1e-8 * full);
    }

    #[test]
    fn thresholds() {
        assert_eq!(SerrinDomain::Lattice { d: 3 }.threshold(0.0), 3.0);
        assert_eq!(SerrinDomain::Orthant { d: 3, k: 1 }.threshold(0.0), 2.0);
        assert!((SerrinDomain::Lattice { d: 5 }.threshold(1.0) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn small_lattice_sweep() {
        let s = serrin_sweep(SerrinDomain::Lattice { d: 3 }, 0.0, &[2.0, 4.0], &[10, 20]).unwrap();
        assert_eq!(s.reports[0].classification, Classification::Growing);
        assert!(s.monotone_in_q);
    }
}
