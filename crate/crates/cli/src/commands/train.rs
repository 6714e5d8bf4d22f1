use std::path::Path;

use ddforge_core::ga::engine::{CircuitEvaluator, IterationRecord};
use ddforge_core::ga::{run_gadd, Checkpoint};
use ddforge_core::strategy::DDStrategy;
use serde::{Deserialize, Serialize};

use super::{report_seeds, setup};
use crate::config::LoadedConfig;
use crate::error::{CliError, CliResult};
use crate::eval::{best_baseline, candidates, find, score, Score, GADD};
use crate::report::{scores_csv, Meta, OutDir};

pub const TRACE: &str = "trace.jsonl";

pub fn checkpoint_name(generation: usize) -> String {
    format!("checkpoint_{generation}.json")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub iteration: usize,
    /// Best utility among the survivors, as measured during training.
    pub best_utility: f64,
    pub mean_utility: f64,
    pub mutation_prob: f64,
    pub best_strategy: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub meta: Meta,
    pub workload: String,
    pub num_colors: usize,
    pub best_strategy: DDStrategy,
    pub best_strategy_label: String,
    pub training_best_utility: f64,
    /// Utilities of the initial population.
    pub initial_utilities: Vec<f64>,
    pub curve: Vec<CurvePoint>,
    pub comparison: Vec<Score>,
    pub best_baseline: Option<String>,
    /// GADD mean minus the best baseline mean.
    pub gadd_margin: Option<f64>,
    /// First iteration whose training best exceeds the best baseline mean.
    pub first_iteration_above_baselines: Option<usize>,
    /// Scores on every Grover oracle, when requested.
    pub transfer: Option<Vec<Score>>,
}

pub fn read_checkpoint(path: &Path) -> CliResult<Checkpoint> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ddforge_core::Error::CheckpointCorrupt(format!("{}: {e}", path.display())))?;
    let cp: Checkpoint = serde_json::from_str(&text)
        .map_err(|e| ddforge_core::Error::CheckpointCorrupt(format!("{}: {e}", path.display())))?;
    if cp.strategies.is_empty() || cp.strategies.len() != cp.utilities.len() {
        return Err(ddforge_core::Error::CheckpointCorrupt(format!(
            "{}: {} strategies but {} utilities",
            path.display(),
            cp.strategies.len(),
            cp.utilities.len()
        ))
        .into());
    }
    Ok(cp)
}

/// Records already in the trace, up to and including `generation`.
fn previous_records(out: &OutDir, generation: usize) -> CliResult<Vec<IterationRecord>> {
    let Ok(text) = std::fs::read_to_string(out.path(TRACE)) else {
        return Ok(Vec::new());
    };
    let mut records = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let rec: IterationRecord = serde_json::from_str(line)
            .map_err(|e| CliError::Config(format!("existing {TRACE} is unreadable: {e}")))?;
        if rec.iteration <= generation {
            records.push(rec);
        }
    }
    Ok(records)
}

pub fn run(config: &LoadedConfig, out: &Path, resume: Option<&Path>) -> CliResult<TrainReport> {
    let cfg = &config.config;
    let out = OutDir::create(out)?;
    let s = setup(cfg)?;
    let ga = cfg.ga_config();
    let mut evaluator = CircuitEvaluator {
        circuits: s.exp.circuits.clone(),
        coloring: s.coloring.clone(),
        timing: cfg.timing(),
        repetitions: cfg.dd.repetitions,
        shots: cfg.shots,
        backend: &s.backend,
    };

    let checkpoint = resume.map(read_checkpoint).transpose()?;
    let mut records = match &checkpoint {
        Some(cp) => previous_records(&out, cp.generation)?,
        None => Vec::new(),
    };
    let mut trace = String::new();
    for r in &records {
        trace.push_str(&serde_json::to_string(r).expect("records serialize"));
        trace.push('\n');
    }
    out.write(TRACE, &trace)?;

    let mut write_error = None;
    let result = run_gadd(&mut evaluator, s.coloring.num_colors, &ga, checkpoint.as_ref(), &mut |rec, cp| {
        let written = out
            .append_line(TRACE, &serde_json::to_string(rec).expect("records serialize"))
            .and_then(|_| out.write_json(&checkpoint_name(cp.generation), cp));
        written.map_err(|e| {
            let msg = e.to_string();
            write_error = Some(e);
            ddforge_core::Error::Config(msg)
        })
    });
    if let Some(e) = write_error {
        return Err(e);
    }
    let result = result?;
    records.extend(result.records.iter().cloned());

    let seeds = report_seeds(cfg.seed, cfg.repeats);
    let cands = candidates(cfg, s.coloring.num_colors, Some(result.best_strategy.clone()))?;
    let comparison = score(&s.exp.circuits, &s.coloring, cfg, &s.backend, &cands, &seeds)?;
    let transfer = match &s.exp.transfer {
        Some(circuits) => Some(score(circuits, &s.coloring, cfg, &s.backend, &cands, &seeds)?),
        None => None,
    };

    let best = best_baseline(&comparison);
    let best_mean = best.and_then(|b| b.mean);
    let gadd_mean = find(&comparison, GADD).and_then(|g| g.mean);
    let curve: Vec<CurvePoint> = records
        .iter()
        .map(|r| CurvePoint {
            iteration: r.iteration,
            best_utility: r.best_utility,
            mean_utility: r.utilities.iter().sum::<f64>() / r.utilities.len().max(1) as f64,
            mutation_prob: r.mutation_prob,
            best_strategy: r.best_strategy.to_string(),
        })
        .collect();
    let first_above = best_mean.and_then(|b| curve.iter().find(|p| p.best_utility > b).map(|p| p.iteration));
    let report = TrainReport {
        meta: Meta::new("train", config),
        workload: s.exp.label.clone(),
        num_colors: s.coloring.num_colors,
        best_strategy_label: result.best_strategy.to_string(),
        best_strategy: result.best_strategy,
        training_best_utility: result.best_utility,
        initial_utilities: records.first().map(|r| r.utilities.clone()).unwrap_or_default(),
        curve,
        best_baseline: best.map(|b| b.name.clone()),
        gadd_margin: gadd_mean.zip(best_mean).map(|(g, b)| g - b),
        first_iteration_above_baselines: first_above,
        comparison,
        transfer,
    };
    out.write_json("report.json", &report)?;
    let mut sections: Vec<(&str, &[Score])> = vec![("comparison", &report.comparison)];
    if let Some(t) = &report.transfer {
        sections.push(("transfer", t));
    }
    out.write("report.csv", &scores_csv(&sections))?;
    Ok(report)
}
