//! Unit current from a Green voltage, its path decomposition, and path-level estimates.

mod current;
mod estimates;
mod hardy;
mod paths;

pub use current::{edge_marginals_exact, orient_current, FlowReport, UnitFlow, FLOW_TOL, ZERO_DROP};
pub use estimates::{b_series_term_sum, first_exit_stats, inner_radius, lr_energy, series_conductance, FirstExitStats, LrEnergy};
pub use hardy::{hardy_sequence_check, path_hardy_check, path_hardy_from_drops, InequalityCheck};
pub use paths::{edge_marginals_mc, sample_map, sample_path, PathSampler, SampledPath};
