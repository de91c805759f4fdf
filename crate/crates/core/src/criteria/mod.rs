//! Existence and nonexistence criteria evaluated on finite truncations.

mod power;
mod quasi_metric;
mod ratio;
mod report;
mod series;
mod tem1;
mod testing;
mod three_g;
mod thm_main;
mod weight;

pub use power::{g_power_inequality_check, PowerInequalityReport, SLACK_FLOOR};
pub use quasi_metric::{quasi_metric_tail, volumes_around, QuasiMetricReport, TailSums, MIN_TAIL_EXPONENT};
pub use ratio::{construct_supersolution, potential_ratio, potential_ratio_via_provider, RatioReport, SupersolutionReport, SUPERSOLUTION_FLOOR};
pub use report::{CriterionReport, SweepPoint};
pub use series::*;
pub use tem1::{level_grid, tem1_conditions, LevelSetValue, Tem1Report};
pub use testing::{testing_bound, TestingBound};
pub use three_g::{three_g_constant, triple_kappas, ThreeGReport};
pub use thm_main::{lattice_x_sample, thm_main_conditions, ThmMainReport};
pub use weight::PotentialWeight;
