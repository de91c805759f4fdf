//! ℤᵈ and k-orthant computations: tabulated lattice Green functions, the reflection formula,
//! comparators, the J_β integral and exponent sweeps.

mod jtheta;
mod orthant;
mod serrin;
mod table;

pub use jtheta::{integrate, j_theta_integral, j_theta_lower_constant, j_theta_one, j_theta_profile, j_theta_upper_constant, JThetaReport, MAX_K};
pub use orthant::{fixed_pole_profile, orthant_green_reflection, reflection_vs_direct, theta_comparator, theta_sweep, FixedPoleProfile, OrthantSpec, PoleComparison, ThetaSweep};
pub use serrin::{lattice_ratio, orthant_ratio, serrin_sweep, SerrinDomain, SerrinSweep};
pub use table::{zd_green_fit, GreenFit, GreenTable};
