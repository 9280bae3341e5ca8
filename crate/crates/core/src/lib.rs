//! Modeling and benchmarking toolkit for constrained binary optimization.
//!
//! The pipeline runs from a weighted graph ([`graph`]) through a constrained
//! model ([`model`]) into QUBO/Ising form ([`qubo`]), with discrete variables
//! mapped onto qubits by [`encoding`]. Solutions come from exact and heuristic
//! classical solvers ([`solvers`]) or from state-vector simulation of quantum
//! annealing and QAOA ([`quantum`]). [`bench`] ties it together into
//! reproducible benchmark runs.
//!
//! All model coefficients are exact rationals ([`Rational`]); floating point
//! only appears inside the samplers.

pub mod bench;
pub mod encoding;
mod error;
pub mod graph;
pub mod model;
pub mod quantum;
pub mod qubo;
pub mod rational;
pub mod solvers;

pub use error::{Error, Result};
pub use rational::Rational;
