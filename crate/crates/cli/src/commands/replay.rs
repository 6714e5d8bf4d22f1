use std::path::Path;

use ddforge_core::seed;
use ddforge_core::sim::NoiseModel;
use serde::{Deserialize, Serialize};

use super::train::read_checkpoint;
use super::{report_seeds, setup};
use crate::config::LoadedConfig;
use crate::error::{CliError, CliResult};
use crate::eval::{candidates, find, make_backend, score, Candidate, Score, Status, GADD};
use crate::report::{scores_csv, Meta, OutDir};

const PERTURB_STREAM: u64 = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub meta: Meta,
    pub workload: String,
    pub checkpoint_generation: usize,
    pub perturbation: f64,
    pub noise: NoiseModel,
    /// The saved best strategy (`GADD`) followed by the baselines.
    pub comparison: Vec<Score>,
    /// Every distinct strategy of the saved population.
    pub population: Vec<Score>,
    /// Whether `GADD` still has a higher mean than every baseline.
    pub ranking_preserved: bool,
    pub regression: bool,
}

pub fn run(config: &LoadedConfig, out: &Path, checkpoint: Option<&Path>) -> CliResult<ReplayReport> {
    let cfg = &config.config;
    let path = match checkpoint {
        Some(p) => p.to_path_buf(),
        None => {
            let p = cfg.replay.checkpoint.as_ref().ok_or_else(|| {
                CliError::Config("replay needs --checkpoint or replay.checkpoint".into())
            })?;
            config.dir.join(p)
        }
    };
    let cp = read_checkpoint(&path)?;
    let out = OutDir::create(out)?;
    let mut s = setup(cfg)?;
    let noise = s.noise.perturbed(cfg.replay.perturbation, &mut seed::rng(cfg.seed, &[PERTURB_STREAM]));
    s.backend = make_backend(cfg, noise.clone())?;

    let best = ddforge_core::ga::operators::top_indices(&cp.utilities, 1)[0];
    let seeds = report_seeds(cfg.seed, cfg.replay.repeats);
    let cands = candidates(cfg, s.coloring.num_colors, Some(cp.strategies[best].clone()))?;
    let comparison = score(&s.exp.circuits, &s.coloring, cfg, &s.backend, &cands, &seeds)?;

    let mut distinct = Vec::new();
    for st in &cp.strategies {
        if !distinct.contains(st) {
            distinct.push(st.clone());
        }
    }
    let pop: Vec<Candidate> = distinct
        .into_iter()
        .enumerate()
        .map(|(i, st)| Candidate { name: format!("population_{i}"), strategy: Some(st), unsupported: None })
        .collect();
    let population = score(&s.exp.circuits, &s.coloring, cfg, &s.backend, &pop, &seeds)?;

    let gadd = find(&comparison, GADD).and_then(|g| g.mean).unwrap_or(f64::NAN);
    let ranking_preserved = comparison
        .iter()
        .filter(|c| c.name != GADD && c.status == Status::Ok)
        .all(|c| c.mean.is_some_and(|m| gadd > m));
    let report = ReplayReport {
        meta: Meta::new("replay", config),
        workload: s.exp.label.clone(),
        checkpoint_generation: cp.generation,
        perturbation: cfg.replay.perturbation,
        noise,
        comparison,
        population,
        ranking_preserved,
        regression: !ranking_preserved,
    };
    out.write_json("report.json", &report)?;
    out.write("report.csv", &scores_csv(&[("comparison", &report.comparison), ("population", &report.population)]))?;
    Ok(report)
}
