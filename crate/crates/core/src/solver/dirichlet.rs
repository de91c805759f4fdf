//! Dirichlet problems on a finite domain: −Δ restricted to Ω with zero data on ∂Ω.

use super::cg::{pcg, SolveStats, SolverOptions, SpdMatrix};
use crate::error::{invalid, Error, Result};
use crate::graph::{DomainKind, DomainSpec, WeightedGraph};
use serde::Serialize;

/// A function on the whole vertex set, zero outside the domain unless stated otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct PotentialField {
    pub label: String,
    pub values: Vec<f64>,
}

impl PotentialField {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        PotentialField { label: label.into(), values }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GreenSolution {
    pub pole: usize,
    /// g_Ω(pole, x) for every vertex of the graph, zero off the interior.
    pub values: Vec<f64>,
    pub capacity: f64,
    /// max over the interior of |−Δg(x) − δ_pole(x)/μ(pole)|.
    pub residual_norm: f64,
    pub stats: SolveStats,
}

impl GreenSolution {
    pub fn at(&self, x: usize) -> f64 {
        self.values[x]
    }

    pub fn at_pole(&self) -> f64 {
        self.values[self.pole]
    }
}

/// The conductance-form Dirichlet Laplacian of a domain, ready for repeated solves.
pub struct DirichletProblem<'a> {
    graph: &'a WeightedGraph,
    domain: DomainSpec,
    matrix: SpdMatrix,
    pub options: SolverOptions,
}

impl<'a> DirichletProblem<'a> {
    pub fn new(graph: &'a WeightedGraph, domain: DomainSpec) -> Result<Self> {
        if domain.is_empty() {
            return invalid("domain has no interior vertices");
        }
        if domain.boundary().is_empty() {
            return invalid("domain has an empty boundary; the Dirichlet problem is singular");
        }
        let matrix = SpdMatrix::from_rows(domain.interior().iter().map(|&x| {
            let off = graph.neighbors(x).filter_map(|(y, w)| domain.local(y).map(|j| (j, -w))).collect();
            (graph.measure(x), off)
        }));
        Ok(DirichletProblem { graph, domain, matrix, options: SolverOptions::default() })
    }

    pub fn with_options(mut self, options: SolverOptions) -> Self {
        self.options = options;
        self
    }

    pub fn graph(&self) -> &'a WeightedGraph {
        self.graph
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    /// Solves Σ_y μ_xy(u(x) − u(y)) = b(x) on Ω with u = 0 off Ω. `b` is indexed by graph vertex.
    pub fn solve_conductance(&self, b: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
        let rhs: Vec<f64> = self.domain.interior().iter().map(|&x| b[x]).collect();
        let (u, st) = pcg(&self.matrix, &rhs, &self.options)?;
        Ok((self.domain.extend(self.graph.num_vertices(), &u), st))
    }

    /// G_Ω f(x) = Σ_y g_Ω(x,y) f(y) μ(y), computed as a single solve of −Δu = f.
    pub fn green_operator(&self, f: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
        let b: Vec<f64> = (0..f.len()).map(|x| f[x] * self.graph.measure(x)).collect();
        self.solve_conductance(&b)
    }

    pub fn green_vector(&self, pole: usize) -> Result<GreenSolution> {
        if !self.domain.contains(pole) {
            return invalid(format!("pole {pole} is not an interior vertex"));
        }
        let mut b = vec![0.0; self.graph.num_vertices()];
        b[pole] = 1.0;
        let (values, stats) = self.solve_conductance(&b)?;
        let mut delta = vec![0.0; b.len()];
        delta[pole] = 1.0 / self.graph.measure(pole);
        let residual_norm = self.residual(&values, &delta);
        Ok(GreenSolution { pole, capacity: 1.0 / values[pole], values, residual_norm, stats })
    }

    /// Equilibrium potential φ (φ(o)=1, harmonic on Ω∖{o}, zero off Ω) and the capacity
    /// Σ_{y∼o} μ_oy (1 − φ(y)), solved on Ω∖{o} independently of the Green route.
    pub fn equilibrium_potential(&self, o: usize) -> Result<(PotentialField, f64, SolveStats)> {
        if !self.domain.contains(o) {
            return invalid(format!("pole {o} is not an interior vertex"));
        }
        let g = self.graph;
        let n = g.num_vertices();
        let mut phi = vec![0.0; n];
        phi[o] = 1.0;
        let mut stats = SolveStats::default();
        if self.domain.len() > 1 {
            let mask: Vec<bool> = (0..n).map(|x| x != o && self.domain.contains(x)).collect();
            let sub = DomainSpec::from_mask(g, DomainKind::Explicit, &mask)?;
            let prob = DirichletProblem::new(g, sub)?.with_options(self.options);
            let mut b = vec![0.0; n];
            for (y, w) in g.neighbors(o) {
                b[y] = w;
            }
            let (u, st) = prob.solve_conductance(&b)?;
            for x in 0..n {
                if mask[x] {
                    phi[x] = u[x];
                }
            }
            stats = st;
        }
        let cap: f64 = g.neighbors(o).map(|(y, w)| w * (1.0 - phi[y])).sum();
        if !(cap > 0.0) {
            return Err(Error::Invariant(format!("nonpositive capacity {cap}")));
        }
        Ok((PotentialField::new("equilibrium potential", phi), cap, stats))
    }

    /// −Δu(x) = (1/μ(x)) Σ_y μ_xy (u(x) − u(y)) at every interior vertex (graph-indexed, zero elsewhere).
    pub fn neg_laplacian(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; u.len()];
        for &x in self.domain.interior() {
            let s: f64 = self.graph.neighbors(x).map(|(y, w)| w * (u[x] - u[y])).sum();
            out[x] = s / self.graph.measure(x);
        }
        out
    }

    /// max over the interior of |−Δu − f|.
    pub fn residual(&self, u: &[f64], f: &[f64]) -> f64 {
        let l = self.neg_laplacian(u);
        self.domain.interior().iter().map(|&x| (l[x] - f[x]).abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_lattice;

    fn segment(r: usize) -> (WeightedGraph, usize) {
        let g = build_lattice(1, r).unwrap();
        let o = g.vertex_at(&[0]).unwrap();
        (g, o)
    }

    #[test]
    fn segment_green_is_linear() {
        let (g, o) = segment(10);
        let p = DirichletProblem::new(&g, DomainSpec::ball(&g, o, 10).unwrap()).unwrap();
        let gs = p.green_vector(o).unwrap();
        for x in -10..=10i32 {
            let v = gs.at(g.vertex_at(&[x]).unwrap());
            assert!((v - (10 - x.abs()) as f64 / 2.0).abs() < 1e-9);
        }
        assert!((gs.capacity - 0.2).abs() < 1e-12);
        let (phi, cap, _) = p.equilibrium_potential(o).unwrap();
        assert!((cap - 0.2).abs() < 1e-12);
        assert!((phi.values[g.vertex_at(&[4]).unwrap()] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn single_interior_vertex() {
        let (g, o) = segment(3);
        let p = DirichletProblem::new(&g, DomainSpec::ball(&g, o, 1).unwrap()).unwrap();
        let (phi, cap, _) = p.equilibrium_potential(o).unwrap();
        assert_eq!(cap, g.measure(o));
        assert_eq!(phi.values.iter().filter(|&&v| v != 0.0).count(), 1);
        assert!((p.green_vector(o).unwrap().at_pole() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_source_matches_quadratic() {
        // −Δv = 1 on {|x| < R} with v(±R) = 0 gives v(x) = R² − x².
        let (g, o) = segment(12);
        let p = DirichletProblem::new(&g, DomainSpec::ball(&g, o, 12).unwrap()).unwrap().with_options(SolverOptions::tight());
        let f = vec![1.0; g.num_vertices()];
        let (v, _) = p.green_operator(&f).unwrap();
        for x in -11..=11i32 {
            assert!((v[g.vertex_at(&[x]).unwrap()] - (144 - x * x) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_boundary_rejected() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let dom = DomainSpec::explicit(&g, &[0, 1]).unwrap();
        assert!(DirichletProblem::new(&g, dom).is_err());
    }
}
