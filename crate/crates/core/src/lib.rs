//! Genetic-algorithm search over multi-qubit dynamical decoupling (DD)
//! strategies.
//!
//! The crate is organized bottom-up:
//!
//! - [`pauli`]: the eight-element decoupling group and frame algebra.
//! - [`strategy`]: DD sequences, per-color strategies, coloring, baselines.
//! - [`circuit`] and [`scheduler`]: timed circuits, idle gaps, DD insertion.
//! - [`sim`]: noisy trajectory simulator and stabilizer tableau.
//! - [`metrics`]: utilities, polarization and decay fitting.
//! - [`ga`]: the genetic algorithm and the exploration study.
//! - [`workloads`]: BV, GHZ, Grover, mirror and MRB circuit generators.
//! - [`backend`]: the execution-backend interface.

pub mod backend;
pub mod circuit;
pub mod error;
pub mod ga;
pub mod linalg;
pub mod metrics;
pub mod pauli;
pub mod scheduler;
pub mod seed;
pub mod sim;
pub mod strategy;
pub mod workloads;

pub use error::{Error, Result};

/// Crate version, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
