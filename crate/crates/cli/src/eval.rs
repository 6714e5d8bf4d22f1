//! Scoring named strategies with repeated, seeded evaluations.

use std::path::Path;

use ddforge_core::backend::{Capabilities, ExecutionBackend, HardwareBackendStub, LocalSimulatorBackend};
use ddforge_core::circuit::ScheduledCircuit;
use ddforge_core::ga::engine::{CircuitEvaluator, TrainingCircuit};
use ddforge_core::sim::{CountsDistribution, NoiseModel, SimOptions};
use ddforge_core::strategy::{canonical_strategies, Baseline, ColorAssignment, DDStrategy};
use ddforge_core::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const NO_DD: &str = "none";
pub const GADD: &str = "GADD";

/// Forwards to a backend and reports every submission failure as a
/// backend error.
pub struct GuardedBackend(Box<dyn ExecutionBackend>);

impl ExecutionBackend for GuardedBackend {
    fn name(&self) -> &str {
        self.0.name()
    }

    fn capabilities(&self) -> Capabilities {
        self.0.capabilities()
    }

    fn submit(&self, circuits: &[ScheduledCircuit], shots: u64, seed: u64) -> Result<Vec<CountsDistribution>> {
        self.0.submit(circuits, shots, seed).map_err(|e| match e {
            Error::Backend(_) | Error::TooManyQubits { .. } => e,
            other => Error::Backend(format!("{}: {other}", self.0.name())),
        })
    }
}

pub fn make_backend(config: &ExperimentConfig, noise: NoiseModel) -> CliResult<GuardedBackend> {
    let inner: Box<dyn ExecutionBackend> = match config.backend.split_once(':') {
        None if config.backend == "local" => {
            let options = SimOptions { trajectories: config.trajectories, ..Default::default() };
            Box::new(LocalSimulatorBackend::new(noise, options)?)
        }
        Some(("hardware", name)) => Box::new(HardwareBackendStub { name: name.to_string() }),
        _ => return Err(CliError::Config(format!("unknown backend {:?}", config.backend))),
    };
    Ok(GuardedBackend(inner))
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub name: String,
    /// `None` for the bare circuit.
    pub strategy: Option<DDStrategy>,
    pub unsupported: Option<String>,
}

/// `GADD` (if given), no-DD, then the configured baselines in canonical
/// order.
pub fn candidates(config: &ExperimentConfig, colors: usize, gadd: Option<DDStrategy>) -> CliResult<Vec<Candidate>> {
    let canonical = canonical_strategies(colors);
    let wanted: Vec<String> = match &config.baselines {
        Some(list) => list.clone(),
        None => std::iter::once(NO_DD.to_string()).chain(canonical.iter().map(|(n, _)| n.clone())).collect(),
    };
    let mut out = Vec::new();
    if let Some(s) = gadd {
        out.push(Candidate { name: GADD.into(), strategy: Some(s), unsupported: None });
    }
    for name in wanted {
        if name == NO_DD {
            out.push(Candidate { name, strategy: None, unsupported: None });
            continue;
        }
        match canonical.iter().find(|(n, _)| *n == name) {
            Some((_, Baseline::Strategy(s))) => {
                out.push(Candidate { name, strategy: Some(s.clone()), unsupported: None })
            }
            Some((_, Baseline::Unsupported(why))) => {
                out.push(Candidate { name, strategy: None, unsupported: Some(why.clone()) })
            }
            None => return Err(CliError::Config(format!("unknown baseline {name:?}"))),
        }
    }
    Ok(out)
}

/// Reads a strategy from a strategy JSON file or from a training report's
/// `best_strategy`.
pub fn load_strategy(path: &Path) -> CliResult<DDStrategy> {
    let bad = |e: String| CliError::Config(format!("cannot load strategy from {}: {e}", path.display()));
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let value = value.get("best_strategy").cloned().unwrap_or(value);
    serde_json::from_value(value).map_err(|e| bad(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub name: String,
    pub strategy: Option<String>,
    pub status: Status,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    pub max: Option<f64>,
    pub samples: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Scores every candidate once per seed; all candidates share each seed.
pub fn score(
    circuits: &[TrainingCircuit],
    coloring: &ColorAssignment,
    config: &ExperimentConfig,
    backend: &dyn ExecutionBackend,
    cands: &[Candidate],
    seeds: &[u64],
) -> CliResult<Vec<Score>> {
    let evaluator = CircuitEvaluator {
        circuits: circuits.to_vec(),
        coloring: coloring.clone(),
        timing: config.timing(),
        repetitions: config.dd.repetitions,
        shots: config.shots,
        backend,
    };
    let runnable = |c: &Candidate| -> Option<String> {
        if let Some(why) = &c.unsupported {
            return Some(why.clone());
        }
        match &c.strategy {
            Some(s) if s.num_colors() < coloring.num_colors => Some(format!(
                "strategy has {} colors but the register needs {}",
                s.num_colors(),
                coloring.num_colors
            )),
            _ => None,
        }
    };
    let active: Vec<usize> = (0..cands.len()).filter(|&i| runnable(&cands[i]).is_none()).collect();
    let options: Vec<Option<&DDStrategy>> = active.iter().map(|&i| cands[i].strategy.as_ref()).collect();
    let mut samples = vec![Vec::with_capacity(seeds.len()); cands.len()];
    for &seed in seeds {
        let u = evaluator.evaluate_options(&options, seed)?;
        for (&i, x) in active.iter().zip(u) {
            samples[i].push(x);
        }
    }
    Ok(cands
        .iter()
        .zip(samples)
        .map(|(c, xs)| {
            let label = c.strategy.as_ref().map(ToString::to_string);
            match runnable(c) {
                Some(why) => Score {
                    name: c.name.clone(),
                    strategy: label,
                    status: Status::Unsupported,
                    mean: None,
                    stderr: None,
                    max: None,
                    samples: Vec::new(),
                    note: Some(why),
                },
                None => {
                    let (m, se) = mean_stderr(&xs);
                    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    Score {
                        name: c.name.clone(),
                        strategy: label,
                        status: Status::Ok,
                        mean: Some(m),
                        stderr: Some(se),
                        max: Some(max),
                        samples: xs,
                        note: None,
                    }
                }
            }
        })
        .collect())
}

/// Best supported score among those not named `GADD`.
pub fn best_baseline(scores: &[Score]) -> Option<&Score> {
    scores
        .iter()
        .filter(|s| s.name != GADD && s.status == Status::Ok)
        .max_by(|a, b| a.mean.unwrap_or(f64::NAN).total_cmp(&b.mean.unwrap_or(f64::NAN)))
}

pub fn find<'a>(scores: &'a [Score], name: &str) -> Option<&'a Score> {
    scores.iter().find(|s| s.name == name)
}
