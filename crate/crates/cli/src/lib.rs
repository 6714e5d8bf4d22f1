//! Experiment drivers behind the `ddforge` command line: configuration,
//! training, baseline comparison, MRB scans, exploration and replay.

pub mod commands;
pub mod config;
pub mod error;
pub mod eval;
pub mod report;
pub mod workload;

pub use config::{ExperimentConfig, LoadedConfig};
pub use error::{CliError, CliResult};
