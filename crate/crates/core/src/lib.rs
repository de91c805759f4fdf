//! Discrete potential theory on weighted graphs: Dirichlet Green functions, capacities,
//! unit-current path decompositions, and the existence criteria for −Δu ≥ σu^q built on them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod error;
pub mod flow;
pub mod graph;
pub mod lattice;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
