use crate::error::{invalid, Result};
use crate::graph::WeightedGraph;
use serde::{Deserialize, Serialize};

/// Potential weight σ ≥ 0 on vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PotentialWeight {
    Constant(f64),
    /// (1 + |x|)^{−α} with the Euclidean norm of the lattice coordinates.
    Radial { alpha: f64 },
    /// |x|^{−α} (Euclidean), intended for orthants where x ≠ 0.
    Power { alpha: f64 },
    /// Explicit per-vertex values.
    Table(Vec<f64>),
}

impl PotentialWeight {
    pub fn at_coord(&self, c: &[i32]) -> f64 {
        let r = c.iter().map(|&v| (v as f64) * (v as f64)).sum::<f64>().sqrt();
        match self {
            PotentialWeight::Constant(v) => *v,
            PotentialWeight::Radial { alpha } => (1.0 + r).powf(-alpha),
            PotentialWeight::Power { alpha } => {
                if r == 0.0 {
                    f64::INFINITY
                } else {
                    r.powf(-alpha)
                }
            }
            PotentialWeight::Table(_) => f64::NAN,
        }
    }

    /// σ at every vertex; validates σ ≥ 0, finite, and σ ≢ 0.
    pub fn values(&self, g: &WeightedGraph) -> Result<Vec<f64>> {
        let vals: Vec<f64> = match self {
            PotentialWeight::Constant(v) => vec![*v; g.num_vertices()],
            PotentialWeight::Table(t) => {
                if t.len() != g.num_vertices() {
                    return invalid("σ table length differs from vertex count");
                }
                t.clone()
            }
            _ => {
                if g.dim() == 0 {
                    return invalid("coordinate-based σ needs a lattice graph");
                }
                (0..g.num_vertices()).map(|x| self.at_coord(g.coord(x).unwrap())).collect()
            }
        };
        if vals.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return invalid("σ must be finite and nonnegative");
        }
        if vals.iter().all(|&v| v == 0.0) {
            return invalid("σ must not vanish identically");
        }
        Ok(vals)
    }

    /// ν(x) = σ(x) μ(x).
    pub fn nu(&self, g: &WeightedGraph) -> Result<Vec<f64>> {
        Ok(self.values(g)?.iter().enumerate().map(|(x, s)| s * g.measure(x)).collect())
    }
}
