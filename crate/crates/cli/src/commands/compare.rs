use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{report_seeds, setup};
use crate::config::LoadedConfig;
use crate::error::CliResult;
use crate::eval::{best_baseline, candidates, load_strategy, score, Score};
use crate::report::{scores_csv, Meta, OutDir};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub meta: Meta,
    pub workload: String,
    pub num_colors: usize,
    pub comparison: Vec<Score>,
    pub best_baseline: Option<String>,
}

pub fn run(config: &LoadedConfig, out: &Path) -> CliResult<CompareReport> {
    let cfg = &config.config;
    let gadd = match &cfg.gadd_strategy {
        Some(p) => Some(load_strategy(&config.existing_path(p)?)?),
        None => None,
    };
    let out = OutDir::create(out)?;
    let s = setup(cfg)?;
    let cands = candidates(cfg, s.coloring.num_colors, gadd)?;
    let seeds = report_seeds(cfg.seed, cfg.repeats);
    let comparison = score(&s.exp.circuits, &s.coloring, cfg, &s.backend, &cands, &seeds)?;
    let report = CompareReport {
        meta: Meta::new("compare-baselines", config),
        workload: s.exp.label.clone(),
        num_colors: s.coloring.num_colors,
        best_baseline: best_baseline(&comparison).map(|b| b.name.clone()),
        comparison,
    };
    out.write_json("report.json", &report)?;
    out.write("report.csv", &scores_csv(&[("comparison", &report.comparison)]))?;
    Ok(report)
}
