//! Dirichlet solvers: equilibrium potentials, capacities, Green vectors and the Green operator.

mod cg;
mod dirichlet;
mod green;
mod heat;
mod orbit;

pub use cg::{pcg, SolveStats, SolverOptions, SpdMatrix};
pub use dirichlet::{DirichletProblem, GreenSolution, PotentialField};
pub use green::{green_operator_apply, green_provider, DenseGreen, GreenProvider, OnDemandGreen, DENSE_THRESHOLD};
pub use heat::heat_kernel_green;
pub use orbit::{canonical, orbit_size, OrbitDomain, OrbitShape};
