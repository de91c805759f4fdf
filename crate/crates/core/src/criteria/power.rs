//! The pointwise power inequality [G_Ω σ]^s ≤ s G_Ω[(G_Ω σ)^{s−1} σ].

use crate::error::{invalid, Result};
use crate::solver::DirichletProblem;
use serde::Serialize;

/// Relative slack floor below which the inequality counts as violated.
pub const SLACK_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct PowerInequalityReport {
    pub s: f64,
    /// min over the interior of s·G[(Gσ)^{s−1}σ] − (Gσ)^s.
    pub min_slack: f64,
    /// min over the interior of the slack divided by the right-hand side.
    pub min_relative_slack: f64,
    pub argmin: usize,
    pub violations: usize,
    pub holds: bool,
}

/// Checks the inequality at every interior vertex with two Dirichlet solves.
pub fn g_power_inequality_check(prob: &DirichletProblem, sigma: &[f64], s: f64) -> Result<PowerInequalityReport> {
    if !(s > 1.0) {
        return invalid("s must exceed 1");
    }
    if sigma.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return invalid("σ must be finite and nonnegative");
    }
    let (v, _) = prob.green_operator(sigma)?;
    let f: Vec<f64> = v.iter().zip(sigma).map(|(a, b)| if *b > 0.0 { a.max(0.0).powf(s - 1.0) * b } else { 0.0 }).collect();
    let (w, _) = prob.green_operator(&f)?;
    let mut rep = PowerInequalityReport { s, min_slack: f64::INFINITY, min_relative_slack: f64::INFINITY, argmin: usize::MAX, violations: 0, holds: true };
    for &x in prob.domain().interior() {
        let lhs = v[x].max(0.0).powf(s);
        let rhs = s * w[x];
        let slack = rhs - lhs;
        let rel = if rhs > 0.0 { slack / rhs } else if lhs == 0.0 { 0.0 } else { f64::NEG_INFINITY };
        if rel < rep.min_relative_slack {
            rep.min_relative_slack = rel;
            rep.argmin = x;
        }
        rep.min_slack = rep.min_slack.min(slack);
        if rel < -SLACK_FLOOR {
            rep.violations += 1;
        }
    }
    rep.holds = rep.violations == 0;
    Ok(rep)
}
