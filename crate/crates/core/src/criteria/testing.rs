use crate::error::{invalid, Result};
use crate::graph::{DomainSpec, WeightedGraph};
use crate::solver::GreenSolution;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct TestingBound {
    pub q: f64,
    /// Σ_y g(o,y)^q σ(y) μ(y).
    pub energy: f64,
    /// Upper bound for u(o) valid for every nonnegative solution.
    pub bound: f64,
}

/// u(o) ≤ [(q/(q−1))^{q/(q−1)} (Σ g^q σ μ)^{−1/(q−1)} / (σ(o) μ(o))]^{1/q}.
pub fn testing_bound(graph: &WeightedGraph, dom: &DomainSpec, gs: &GreenSolution, sigma: &[f64], q: f64) -> Result<TestingBound> {
    if !(q > 1.0) {
        return invalid("q must exceed 1");
    }
    let o = gs.pole;
    if !(sigma[o] > 0.0) {
        return invalid("σ must be positive at the pole");
    }
    let energy: f64 = dom.interior().iter().map(|&y| gs.values[y].powf(q) * sigma[y] * graph.measure(y)).sum();
    if !(energy > 0.0) {
        return invalid("degenerate domain: Green energy vanishes");
    }
    let p = q / (q - 1.0);
    let rhs = p.powf(p) * energy.powf(-1.0 / (q - 1.0)) / (sigma[o] * graph.measure(o));
    Ok(TestingBound { q, energy, bound: rhs.powf(1.0 / q) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_lattice;
    use crate::solver::DirichletProblem;

    #[test]
    fn scaling_invariance() {
        let g = build_lattice(2, 8).unwrap();
        let o = g.vertex_at(&[0, 0]).unwrap();
        let dom = DomainSpec::ball(&g, o, 8).unwrap();
        let sigma = vec![1.0; g.num_vertices()];
        let gs = DirichletProblem::new(&g, dom.clone()).unwrap().green_vector(o).unwrap();
        let b1 = testing_bound(&g, &dom, &gs, &sigma, 2.5).unwrap();
        let g2 = g.scaled(2.0);
        let gs2 = DirichletProblem::new(&g2, dom.clone()).unwrap().green_vector(o).unwrap();
        let b2 = testing_bound(&g2, &dom, &gs2, &sigma, 2.5).unwrap();
        // g scales by 1/2 and μ by 2, so the energy scales by 2^{1−q} and the bound by 2^0.
        assert!((b2.energy / b1.energy - 2f64.powf(1.0 - 2.5)).abs() < 1e-9);
        assert!((b2.bound / b1.bound - 1.0).abs() < 1e-9);
    }
}
