//! State-vector quantum circuit simulation with a quantum-jump (Monte Carlo
//! wave function) engine, a Lindblad master-equation reference integrator,
//! and a fault-injection harness measuring the resilience of six quantum
//! algorithms to logical Pauli and coherent Z-rotation errors.
//!
//! The crate is organized along the pipeline:
//!
//! - [`linalg`], [`state`], [`gates`]: dense complex kernels, state vectors,
//!   the gate set.
//! - [`circuit`]: DAG circuits with deterministic node order and error
//!   injection by node substitution.
//! - [`algorithms`]: builders plus success predicates for Bernstein-Vazirani,
//!   Deutsch-Jozsa, Grover, Simon, QPE, and Hamiltonian evolution.
//! - [`lindblad`] / [`trajectory`]: density-matrix evolution and its
//!   stochastic pure-state unraveling.
//! - [`montecarlo`]: the fault-injection experiment harness.
//!
//! Monte Carlo work (trajectory ensembles, per-run fault injection) is
//! data-parallel via rayon under the default `parallel` feature, with a
//! sequential fallback when the feature is disabled. RNG streams are derived
//! per work item, so results are identical either way.

pub mod algorithms;
pub mod circuit;
pub mod error;
pub mod exec;
pub mod gates;
pub mod lindblad;
pub mod linalg;
pub mod montecarlo;
pub mod seeding;
pub mod state;
pub mod trajectory;

pub use error::{Error, Result};
