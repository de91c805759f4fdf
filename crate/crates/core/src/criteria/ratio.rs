//! The Green-potential ratio sup_x G_Ω(σ g^q)(x)/g(x) and the supersolution built from it.

use crate::error::{invalid, Result};
use crate::solver::{DirichletProblem, GreenProvider, GreenSolution, PotentialField};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub q: f64,
    pub pole: usize,
    pub sup: f64,
    pub argmax: usize,
    #[serde(skip)]
    pub green: Vec<f64>,
    #[serde(skip)]
    pub potential: Vec<f64>,
}

fn source(gs: &GreenSolution, sigma: &[f64], q: f64) -> Vec<f64> {
    gs.values.iter().zip(sigma).map(|(g, s)| if *g > 0.0 { s * g.powf(q) } else { 0.0 }).collect()
}

fn sup_ratio(prob: &DirichletProblem, green: &[f64], potential: &[f64]) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, usize::MAX);
    for &x in prob.domain().interior() {
        let r = potential[x] / green[x];
        if r > best.0 {
            best = (r, x);
        }
    }
    best
}

/// sup over the interior of G_Ω(σ g_Ω(o,·)^q)/g_Ω(o,·), exact via one extra solve.
pub fn potential_ratio(prob: &DirichletProblem, sigma: &[f64], q: f64, pole: usize) -> Result<RatioReport> {
    if !(q > 1.0) {
        return invalid("q must exceed 1");
    }
    if !(sigma[pole] > 0.0) {
        return invalid("σ must be positive at the pole");
    }
    let gs = prob.green_vector(pole)?;
    let (potential, _) = prob.green_operator(&source(&gs, sigma, q))?;
    let (sup, argmax) = sup_ratio(prob, &gs.values, &potential);
    Ok(RatioReport { q, pole, sup, argmax, green: gs.values, potential })
}

/// The same ratio with G_Ω applied column by column through a Green provider.
pub fn potential_ratio_via_provider(provider: &dyn GreenProvider, sigma: &[f64], q: f64, pole: usize) -> Result<RatioReport> {
    let prob = provider.problem();
    let gs = prob.green_vector(pole)?;
    let f = PotentialField::new("σ g^q", source(&gs, sigma, q));
    let potential = crate::solver::green_operator_apply(provider, &f)?.values;
    let (sup, argmax) = sup_ratio(prob, &gs.values, &potential);
    Ok(RatioReport { q, pole, sup, argmax, green: gs.values, potential })
}

#[derive(Debug, Clone, Serialize)]
pub struct SupersolutionReport {
    pub c: f64,
    /// U at the pole.
    pub u_pole: f64,
    /// min over checked interior vertices of −ΔU − σU^q.
    pub min_slack: f64,
    pub argmin: usize,
    /// Slack at the vertex where the ratio attains its sup.
    pub slack_at_argmax: f64,
    pub checked: usize,
    /// Interior vertices adjacent to the boundary, excluded from the check.
    pub skipped_shell: usize,
    /// Checked vertices with negative computed slack.
    pub negative: usize,
    /// Round-off allowance: SLACK_FLOOR · max σU^q.
    pub floor: f64,
    pub verified: bool,
    #[serde(skip)]
    pub u: PotentialField,
}

/// Relative floor for the pointwise check. Where U^q is many orders below its maximum the true
/// slack is smaller than the solve error, so slack ≥ −1e-10·max σU^q counts as satisfied.
pub const SUPERSOLUTION_FLOOR: f64 = 1e-10;

/// U = C^{q/(1−q)} G_Ω(σ g^q), checked pointwise for −ΔU ≥ σU^q with −Δ evaluated on the graph.
pub fn construct_supersolution(prob: &DirichletProblem, sigma: &[f64], ratio: &RatioReport, c: f64) -> Result<SupersolutionReport> {
    if !(c > 0.0) {
        return invalid("C must be positive");
    }
    let q = ratio.q;
    let scale = c.powf(q / (1.0 - q));
    let u: Vec<f64> = ratio.potential.iter().map(|v| v * scale).collect();
    let lap = prob.neg_laplacian(&u);
    let graph = prob.graph();
    let dom = prob.domain();
    let mut min_slack = f64::INFINITY;
    let mut argmin = usize::MAX;
    let mut checked = 0;
    let mut skipped = 0;
    let mut negative = 0;
    let mut scale: f64 = 0.0;
    for &x in dom.interior() {
        scale = scale.max(sigma[x] * u[x].powf(q));
        if graph.neighbors(x).any(|(y, _)| !dom.contains(y)) {
            skipped += 1;
            continue;
        }
        checked += 1;
        let slack = lap[x] - sigma[x] * u[x].powf(q);
        if slack < 0.0 {
            negative += 1;
        }
        if slack < min_slack {
            min_slack = slack;
            argmin = x;
        }
    }
    let a = ratio.argmax;
    let slack_at_argmax = lap[a] - sigma[a] * u[a].powf(q);
    let floor = SUPERSOLUTION_FLOOR * scale;
    Ok(SupersolutionReport {
        c,
        u_pole: u[ratio.pole],
        min_slack,
        argmin,
        slack_at_argmax,
        checked,
        skipped_shell: skipped,
        negative,
        floor,
        verified: checked > 0 && min_slack >= -floor,
        u: PotentialField::new("supersolution", u),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_lattice, DomainSpec, WeightedGraph};
    use crate::solver::{DenseGreen, SolverOptions};

    #[test]
    fn single_vertex_ratio() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (0, 2, 2.0)]).unwrap();
        let p = DirichletProblem::new(&g, DomainSpec::explicit(&g, &[0]).unwrap()).unwrap();
        let sigma = vec![0.7; 3];
        let r = potential_ratio(&p, &sigma, 3.0, 0).unwrap();
        let g00: f64 = 1.0 / 3.0;
        assert!((r.sup - 0.7 * g00.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn provider_route_agrees() {
        let g = build_lattice(3, 5).unwrap();
        let o = g.vertex_at(&[0, 0, 0]).unwrap();
        let p = DirichletProblem::new(&g, DomainSpec::ball(&g, o, 5).unwrap()).unwrap().with_options(SolverOptions::tight());
        let sigma = vec![1.0; g.num_vertices()];
        let a = potential_ratio(&p, &sigma, 2.0, o).unwrap();
        let b = potential_ratio_via_provider(&DenseGreen::new(&p).unwrap(), &sigma, 2.0, o).unwrap();
        assert!((a.sup - b.sup).abs() < 1e-10 * a.sup);
    }

    #[test]
    fn supersolution_threshold() {
        let g = build_lattice(3, 12).unwrap();
        let o = g.vertex_at(&[0, 0, 0]).unwrap();
        let p = DirichletProblem::new(&g, DomainSpec::ball(&g, o, 12).unwrap()).unwrap().with_options(SolverOptions::tight());
        let sigma = vec![1.0; g.num_vertices()];
        let r = potential_ratio(&p, &sigma, 4.0, o).unwrap();
        let ok = construct_supersolution(&p, &sigma, &r, r.sup * 1.001).unwrap();
        assert!(ok.verified, "{ok:?}");
        let bad = construct_supersolution(&p, &sigma, &r, r.sup * 0.99).unwrap();
        assert!(bad.slack_at_argmax < 0.0);
    }
}
