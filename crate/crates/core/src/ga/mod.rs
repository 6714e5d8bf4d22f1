//! Genetic search over DD strategies.

pub mod engine;
pub mod explore;
pub mod operators;

pub use engine::{run_gadd, Checkpoint, GAConfig, TrainingResult, UtilityEvaluator};
