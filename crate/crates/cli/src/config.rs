//! Experiment configuration. The clap argument structs double as the serialized config that is
//! echoed into every report, so a report can be replayed with `greenlane run --config`.

use clap::{Args, Subcommand, ValueEnum};
use greenlane::lattice::MAX_K;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;

pub const SCHEMA_VERSION: u32 = 1;

/// Where the network comes from: a ℤᵈ lattice around a pole, or an edge list around a root.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Network {
    /// Lattice dimension (ignored with --graph).
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub dim: usize,
    /// Pole coordinates, comma separated; defaults to the origin.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(default)]
    pub pole: Vec<i64>,
    /// Edge list with "u v w" records; the pole is --root.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub root: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GreenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub net: Network,
    /// Ball radius: the interior is every vertex at graph distance < radius from the pole.
    #[arg(long, allow_negative_numbers = true)]
    pub radius: i64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CapacityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub net: Network,
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub radius: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FlowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub net: Network,
    #[arg(long, allow_negative_numbers = true)]
    pub radius: i64,
    /// Monte Carlo paths for edge marginals and each first-exit level.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Paths checked against the path Hardy inequality.
    #[arg(long, default_value_t = 10_000)]
    #[serde(default = "hardy_default")]
    pub hardy_paths: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1.5, 2.0, 3.0])]
    pub q: Vec<f64>,
}

fn hardy_default() -> usize {
    10_000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Volume,
    Bk,
    Testing,
    Ratio,
    Tem1,
    Thmmain,
    #[value(name = "3g")]
    #[serde(rename = "3g")]
    ThreeG,
    Power,
}

impl Which {
    fn randomized(self) -> bool {
        self == Which::ThreeG
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CriterionArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Exponents q (for `power`, the exponents s).
    #[arg(long, value_delimiter = ',', default_values_t = [2.0])]
    pub q: Vec<f64>,
    /// σ(x) = (1 + |x|)^{−α}.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Truncation radii (for `volume` and `bk`, the largest is the series length).
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub radius: Vec<i64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SerrinKind {
    Lattice,
    Orthant,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SerrinArgs {
    #[arg(long, value_enum)]
    pub domain: SerrinKind,
    #[arg(long)]
    pub d: usize,
    /// Number of half-space constraints (orthant only).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<f64>,
    /// Ball radii (lattice) or box sides (orthant).
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub radii: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OrthantGreenArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub k: usize,
    /// One pair per line: the 2d integer coordinates of x then y, separated by spaces or commas.
    #[arg(long)]
    pub pairs: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct JthetaArgs {
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub a: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub ell: Vec<f64>,
}

/// One executable pipeline.
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Experiment {
    /// Dirichlet Green function of a ball: JSON header plus per-vertex CSV.
    Green(GreenArgs),
    /// Capacity of nested balls by the Green and equilibrium routes.
    Capacity(CapacityArgs),
    /// Unit current, path decomposition and path-level estimates.
    Flow(FlowArgs),
    /// One criterion evaluated across q and truncation grids on ℤᵈ.
    Criterion(CriterionArgs),
    /// Potential-ratio sweep across q on ℤᵈ balls or orthant boxes.
    Serrin(SerrinArgs),
    /// Orthant Green function by reflection, with the Θ comparator.
    OrthantGreen(OrthantGreenArgs),
    /// The nested integral J_β and its two-sided bounds.
    Jtheta(JthetaArgs),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Green(_) => "green",
            Experiment::Capacity(_) => "capacity",
            Experiment::Flow(_) => "flow",
            Experiment::Criterion(_) => "criterion",
            Experiment::Serrin(_) => "serrin",
            Experiment::OrthantGreen(_) => "orthant-green",
            Experiment::Jtheta(_) => "jtheta",
        }
    }
}

/// Everything that determines a run's output. Output paths and thread counts are deliberately
/// absent: they do not change the results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(flatten)]
    pub experiment: Experiment,
    /// Relative residual target for the linear solves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Vertex cap for graph builders.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_vertices: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub level: Level,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.level {
            Level::Error => "error",
            Level::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.field, self.message)
    }
}

struct Diags {
    prefix: &'static str,
    out: Vec<Diagnostic>,
}

impl Diags {
    fn error(&mut self, field: impl fmt::Display, message: impl Into<String>) {
        self.push(Level::Error, field, message);
    }

    fn warn(&mut self, field: impl fmt::Display, message: impl Into<String>) {
        self.push(Level::Warning, field, message);
    }

    fn push(&mut self, level: Level, field: impl fmt::Display, message: impl Into<String>) {
        self.out.push(Diagnostic { level, field: format!("{}.{field}", self.prefix), message: message.into() });
    }

    fn radius(&mut self, field: impl fmt::Display, r: i64, min: i64) {
        if r < 0 {
            self.error(field, format!("radius must be nonnegative, got {r}"));
        } else if r < min {
            self.error(field, format!("radius must be at least {min}, got {r}"));
        }
    }

    fn radii(&mut self, field: &str, rs: &[i64], min: i64) {
        if rs.is_empty() {
            self.error(field, "at least one radius is required");
        }
        for (i, &r) in rs.iter().enumerate() {
            self.radius(format_args!("{field}[{i}]"), r, min);
        }
    }

    fn exponents(&mut self, field: &str, qs: &[f64]) {
        if qs.is_empty() {
            self.error(field, "at least one exponent is required");
        }
        for (i, &q) in qs.iter().enumerate() {
            if !(q > 1.0) || !q.is_finite() {
                self.error(format_args!("{field}[{i}]"), "q must exceed 1");
            }
        }
    }

    fn seed(&mut self, seed: Option<u64>) {
        if seed.is_none() {
            self.error("seed", "randomized subcommands require an explicit --seed");
        }
    }

    fn network(&mut self, net: &Network) {
        match &net.graph {
            Some(path) => {
                if !path.is_file() {
                    self.error("graph", format!("edge list {} not found", path.display()));
                }
                if !net.pole.is_empty() {
                    self.warn("pole", "ignored for edge-list networks; the pole is --root");
                }
            }
            None => {
                if net.dim == 0 {
                    self.error("dim", "dimension must be at least 1");
                }
                if !net.pole.is_empty() && net.pole.len() != net.dim {
                    self.error("pole", format!("expected {} coordinates, got {}", net.dim, net.pole.len()));
                }
            }
        }
    }
}

/// Every violated constraint of a config; nothing is executed.
pub fn validate(cfg: &ExperimentConfig) -> Vec<Diagnostic> {
    let mut d = Diags { prefix: cfg.experiment.name(), out: Vec::new() };
    if cfg.schema_version != SCHEMA_VERSION {
        d.error("schema_version", format!("unsupported schema version {} (expected {SCHEMA_VERSION})", cfg.schema_version));
    }
    if let Some(t) = cfg.tol {
        if !(t > 0.0 && t < 1.0) {
            d.error("tol", "tolerance must lie in (0, 1)");
        }
    }
    if cfg.max_vertices == Some(0) {
        d.error("max_vertices", "vertex cap must be positive");
    }
    match &cfg.experiment {
        Experiment::Green(a) => {
            d.network(&a.net);
            d.radius("radius", a.radius, 1);
        }
        Experiment::Capacity(a) => {
            d.network(&a.net);
            d.radii("radius", &a.radius, 1);
        }
        Experiment::Flow(a) => {
            d.network(&a.net);
            d.radius("radius", a.radius, 2);
            d.exponents("q", &a.q);
            d.seed(a.seed);
            if a.samples < 2 {
                d.error("samples", "need at least two samples");
            }
        }
        Experiment::Criterion(a) => {
            if a.dim == 0 {
                d.error("dim", "dimension must be at least 1");
            }
            d.exponents("q", &a.q);
            let min = match a.which {
                Which::Thmmain => 4,
                Which::Ratio | Which::Tem1 | Which::ThreeG => 2,
                _ => 1,
            };
            d.radii("radius", &a.radius, min);
            if !a.alpha.is_finite() {
                d.error("alpha", "alpha must be finite");
            }
            if a.which.randomized() {
                d.seed(a.seed);
            }
        }
        Experiment::Serrin(a) => {
            if a.d < 3 {
                d.error("d", "sweeps need d ≥ 3");
            }
            if a.domain == SerrinKind::Orthant && !(1..=a.d.min(MAX_K)).contains(&a.k) {
                d.error("k", format!("need 1 ≤ k ≤ min(d, {MAX_K})"));
            }
            d.exponents("q", &a.q);
            d.radii("radii", &a.radii, 2);
            if a.radii.len() < 2 {
                d.error("radii", "at least two radii are needed to classify a sweep");
            }
            if !a.alpha.is_finite() {
                d.error("alpha", "alpha must be finite");
            } else if a.domain == SerrinKind::Lattice && a.alpha >= 2.0 {
                d.warn("alpha", format!("alpha = {} lies outside α < 2, where the lattice threshold (d−α)/(d−2) is established", a.alpha));
            }
        }
        Experiment::OrthantGreen(a) => {
            if a.d < 3 {
                d.error("d", "the lattice Green function needs d ≥ 3");
            }
            if !(1..=a.d.min(MAX_K)).contains(&a.k) {
                d.error("k", format!("need 1 ≤ k ≤ min(d, {MAX_K})"));
            }
            if !a.pairs.is_file() {
                d.error("pairs", format!("pairs file {} not found", a.pairs.display()));
            }
        }
        Experiment::Jtheta(a) => {
            if !(a.beta > 0.0) || !a.beta.is_finite() {
                d.error("beta", "beta must be positive");
            }
            if !(a.a > 0.0) || !a.a.is_finite() {
                d.error("a", "a must be positive");
            }
            if a.ell.is_empty() || a.ell.len() > MAX_K {
                d.error("ell", format!("need between 1 and {MAX_K} lengths"));
            }
            for (i, l) in a.ell.iter().enumerate() {
                if !(*l >= 0.0) || !l.is_finite() {
                    d.error(format_args!("ell[{i}]"), "lengths must be finite and nonnegative");
                }
            }
        }
    }
    d.out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn serrin(alpha: f64, q: Vec<f64>, radii: Vec<i64>) -> ExperimentConfig {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            experiment: Experiment::Serrin(SerrinArgs { domain: SerrinKind::Lattice, d: 3, k: 1, alpha, q, radii }),
            tol: None,
            max_vertices: None,
        }
    }

    #[test]
    fn diagnostics_carry_field_paths() {
        let diags = validate(&serrin(2.0, vec![1.0, 3.0], vec![10, -5]));
        let shown: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        assert!(shown.contains(&"error: serrin.q[0]: q must exceed 1".to_string()), "{shown:?}");
        assert!(shown.iter().any(|s| s.starts_with("error: serrin.radii[1]: radius must be nonnegative")));
        assert!(diags.iter().any(|d| d.level == Level::Warning && d.field == "serrin.alpha"));
        assert!(validate(&serrin(0.0, vec![2.0, 4.0], vec![10, 20])).is_empty());
    }

    #[test]
    fn config_round_trips() {
        let cfg = serrin(1.0, vec![2.0], vec![4, 8]);
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"command\":\"serrin\""));
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
    }
}
