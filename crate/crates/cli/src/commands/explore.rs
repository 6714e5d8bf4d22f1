use std::path::Path;

use ddforge_core::ga::explore::{simulate_exploration, ExplorationConfig, ExplorationTable, InitMode};
use serde::{Deserialize, Serialize};

use crate::config::LoadedConfig;
use crate::error::CliResult;
use crate::report::{Meta, OutDir};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalCounts {
    pub mutation_prob: f64,
    pub uniform: f64,
    pub random: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreReport {
    pub meta: Meta,
    pub config: ExplorationConfig,
    /// Cumulative unique sequences after the last iteration.
    pub final_counts: Vec<FinalCounts>,
    pub table: ExplorationTable,
}

pub fn run(config: &LoadedConfig, out: &Path) -> CliResult<ExploreReport> {
    let e = &config.config.explore;
    let ec = ExplorationConfig {
        initial_size: e.initial_size,
        sequence_length: e.sequence_length,
        sample_size: e.sample_size,
        trials: e.trials,
        iterations: e.iterations,
        mutation_probs: e.mutation_probs.clone(),
        seed: config.config.seed,
    };
    let out = OutDir::create(out)?;
    let table = simulate_exploration(&ec, &[InitMode::Uniform, InitMode::Random])?;
    let final_counts = ec
        .mutation_probs
        .iter()
        .map(|&p| {
            let u = table.mean_unique(InitMode::Uniform, p, ec.iterations).unwrap_or(f64::NAN);
            let r = table.mean_unique(InitMode::Random, p, ec.iterations).unwrap_or(f64::NAN);
            FinalCounts { mutation_prob: p, uniform: u, random: r, gap: u - r }
        })
        .collect();
    out.write("report.csv", &table.to_csv())?;
    let report = ExploreReport { meta: Meta::new("explore", config), config: ec, final_counts, table };
    out.write_json("report.json", &report)?;
    Ok(report)
}
