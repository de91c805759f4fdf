//! Per-pole Green columns, either computed on demand or materialized for small domains.

use super::dirichlet::{DirichletProblem, PotentialField};
use crate::error::{invalid, Result};
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Interior size up to which the full Green matrix is materialized.
pub const DENSE_THRESHOLD: usize = 20_000;

pub trait GreenProvider: Sync {
    fn problem(&self) -> &DirichletProblem<'_>;
    /// g_Ω(·, y) over the whole vertex set.
    fn column(&self, y: usize) -> Result<Arc<Vec<f64>>>;

    fn value(&self, x: usize, y: usize) -> Result<f64> {
        Ok(self.column(y)?[x])
    }
}

pub struct OnDemandGreen<'p, 'g> {
    problem: &'p DirichletProblem<'g>,
    cache: Mutex<HashMap<usize, Arc<Vec<f64>>>>,
}

impl<'p, 'g> OnDemandGreen<'p, 'g> {
    pub fn new(problem: &'p DirichletProblem<'g>) -> Self {
        OnDemandGreen { problem, cache: Mutex::new(HashMap::new()) }
    }
}

impl GreenProvider for OnDemandGreen<'_, '_> {
    fn problem(&self) -> &DirichletProblem<'_> {
        self.problem
    }

    fn column(&self, y: usize) -> Result<Arc<Vec<f64>>> {
        if let Some(c) = self.cache.lock().unwrap().get(&y) {
            return Ok(c.clone());
        }
        let col = Arc::new(self.problem.green_vector(y)?.values);
        self.cache.lock().unwrap().insert(y, col.clone());
        Ok(col)
    }
}

pub struct DenseGreen<'p, 'g> {
    problem: &'p DirichletProblem<'g>,
    columns: HashMap<usize, Arc<Vec<f64>>>,
}

impl<'p, 'g> DenseGreen<'p, 'g> {
    pub fn new(problem: &'p DirichletProblem<'g>) -> Result<Self> {
        let interior = problem.domain().interior();
        let cols: Result<Vec<_>> = interior.par_iter().map(|&y| problem.green_vector(y).map(|s| (y, Arc::new(s.values)))).collect();
        Ok(DenseGreen { problem, columns: cols?.into_iter().collect() })
    }
}

impl GreenProvider for DenseGreen<'_, '_> {
    fn problem(&self) -> &DirichletProblem<'_> {
        self.problem
    }

    fn column(&self, y: usize) -> Result<Arc<Vec<f64>>> {
        match self.columns.get(&y) {
            Some(c) => Ok(c.clone()),
            None => invalid(format!("vertex {y} is not interior")),
        }
    }
}

/// Dense provider when the interior is at most `threshold`, on-demand otherwise.
pub fn green_provider<'p, 'g>(problem: &'p DirichletProblem<'g>, threshold: usize) -> Result<Box<dyn GreenProvider + 'p>> {
    if problem.domain().len() <= threshold {
        Ok(Box::new(DenseGreen::new(problem)?))
    } else {
        Ok(Box::new(OnDemandGreen::new(problem)))
    }
}

/// G_Ω f = Σ_y g_Ω(·,y) f(y) μ(y), summed column by column over the support of f.
pub fn green_operator_apply(provider: &dyn GreenProvider, f: &PotentialField) -> Result<PotentialField> {
    let prob = provider.problem();
    let g = prob.graph();
    let support: Vec<usize> = prob.domain().interior().iter().copied().filter(|&y| f.values[y] != 0.0).collect();
    let mut out = vec![0.0; g.num_vertices()];
    for y in support {
        let col = provider.column(y)?;
        let c = f.values[y] * g.measure(y);
        for x in 0..out.len() {
            out[x] += col[x] * c;
        }
    }
    Ok(PotentialField::new(format!("G[{}]", f.label), out))
}
