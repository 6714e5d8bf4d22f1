//! How much of the sequence space the GA reaches when utilities carry no
//! information: every sequence gets a persistent random utility, every pair
//! of the population reproduces, and a sample of the children survives.

use std::collections::HashSet;

use rand::seq::index::sample_weighted;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::operators::{crossover, mutate};
use crate::error::{Error, Result};
use crate::seed;
use crate::strategy::population::{random_sequences, uniform_sequences};
use crate::strategy::DDSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    Uniform,
    Random,
}

impl InitMode {
    fn tag(self) -> u64 {
        match self {
            InitMode::Uniform => 0,
            InitMode::Random => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationConfig {
    pub initial_size: usize,
    pub sequence_length: usize,
    /// Children kept as the next population.
    pub sample_size: usize,
    pub trials: usize,
    pub iterations: usize,
    pub mutation_probs: Vec<f64>,
    pub seed: u64,
}

impl Default for ExplorationConfig {
    fn default() -> Self {
        ExplorationConfig {
            initial_size: 16,
            sequence_length: 8,
            sample_size: 100,
            trials: 25,
            iterations: 7,
            mutation_probs: (1..=9).map(|i| i as f64 / 10.0).collect(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationRow {
    pub init: InitMode,
    pub mutation_prob: f64,
    /// 0 is the initial population.
    pub iteration: usize,
    /// Cumulative distinct sequences seen, averaged over trials.
    pub mean_unique: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationTable {
    pub rows: Vec<ExplorationRow>,
}

impl ExplorationTable {
    pub fn mean_unique(&self, init: InitMode, mutation_prob: f64, iteration: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.init == init && r.mutation_prob == mutation_prob && r.iteration == iteration)
            .map(|r| r.mean_unique)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("init,mutation_prob,iteration,mean_unique\n");
        for r in &self.rows {
            let init = match r.init {
                InitMode::Uniform => "uniform",
                InitMode::Random => "random",
            };
            s.push_str(&format!("{init},{},{},{}\n", r.mutation_prob, r.iteration, r.mean_unique));
        }
        s
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Persistent utility in `(0, 1]` for a sequence within one trial.
fn hashed_utility(trial_key: u64, seq: &DDSequence) -> f64 {
    let h = seq.pulses().iter().fold(trial_key, |h, p| splitmix(h ^ p.index() as u64));
    ((h >> 11) + 1) as f64 / (1u64 << 53) as f64
}

/// Cumulative unique counts, one per iteration (index 0 is the start).
pub fn exploration_trial<R: Rng>(
    initial: Vec<DDSequence>,
    mutation_prob: f64,
    iterations: usize,
    sample_size: usize,
    trial_key: u64,
    rng: &mut R,
) -> Vec<usize> {
    let mut seen: HashSet<DDSequence> = initial.iter().cloned().collect();
    let mut population = initial;
    let mut out = vec![seen.len()];
    for _ in 0..iterations {
        let mut children = Vec::new();
        let mut distinct = HashSet::new();
        for i in 0..population.len() {
            for j in i + 1..population.len() {
                let (a, b) = crossover(&population[i], &population[j], rng);
                for c in [mutate(&a, mutation_prob, rng), mutate(&b, mutation_prob, rng)] {
                    if distinct.insert(c.clone()) {
                        children.push(c);
                    }
                }
            }
        }
        seen.extend(children.iter().cloned());
        out.push(seen.len());
        population = if children.len() <= sample_size {
            children
        } else {
            let picked = sample_weighted(
                rng,
                children.len(),
                |i| (10.0 * hashed_utility(trial_key, &children[i]) + 1.0).ln(),
                sample_size,
            )
            .expect("positive weights");
            let mut idx = picked.into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| children[i].clone()).collect()
        };
    }
    out
}

/// Mean cumulative unique-sequence counts per (initialization, mutation
/// probability, iteration).
pub fn simulate_exploration(config: &ExplorationConfig, modes: &[InitMode]) -> Result<ExplorationTable> {
    if config.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if config.mutation_probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Config("mutation probabilities must lie in [0, 1]".into()));
    }
    let mut rows = Vec::new();
    for &mode in modes {
        for (pi, &prob) in config.mutation_probs.iter().enumerate() {
            let mut sums = vec![0usize; config.iterations + 1];
            for t in 0..config.trials {
                let mut rng = seed::rng(config.seed, &[mode.tag(), pi as u64, t as u64]);
                let initial = match mode {
                    InitMode::Uniform => uniform_sequences(config.initial_size, config.sequence_length, &mut rng)?,
                    InitMode::Random => random_sequences(config.initial_size, config.sequence_length, &mut rng)?,
                };
                // The utility landscape depends on the trial only, so both
                // modes see the same one.
                let key = seed::derive(config.seed, &[u64::MAX, t as u64]);
                let counts = exploration_trial(initial, prob, config.iterations, config.sample_size, key, &mut rng);
                for (s, c) in sums.iter_mut().zip(counts) {
                    *s += c;
                }
            }
            for (iteration, s) in sums.into_iter().enumerate() {
                rows.push(ExplorationRow {
                    init: mode,
                    mutation_prob: prob,
                    iteration,
                    mean_unique: s as f64 / config.trials as f64,
                });
            }
        }
    }
    Ok(ExplorationTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::XY4;

    #[test]
    fn converged_population_without_mutation_only_flips_signs() {
        // Crossover re-draws the sign at its site, so the reachable set is
        // the 2^4 sign variants of XY4 and nothing else.
        let seq: DDSequence = XY4.parse().unwrap();
        let mut rng = seed::rng(0, &[]);
        let counts = exploration_trial(vec![seq.clone(); 10], 0.0, 6, 100, 1, &mut rng);
        assert_eq!(counts[0], 1);
        assert!(counts.iter().all(|&c| c <= 16));
    }

    #[test]
    fn single_trial_is_deterministic() {
        let cfg = ExplorationConfig { trials: 1, iterations: 2, mutation_probs: vec![0.3], ..Default::default() };
        let a = simulate_exploration(&cfg, &[InitMode::Uniform, InitMode::Random]).unwrap();
        let b = simulate_exploration(&cfg, &[InitMode::Uniform, InitMode::Random]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 6);
        assert_eq!(a.mean_unique(InitMode::Uniform, 0.3, 0), Some(16.0));
    }

    #[test]
    fn counts_are_cumulative() {
        let cfg = ExplorationConfig { trials: 2, iterations: 3, mutation_probs: vec![0.5], ..Default::default() };
        let t = simulate_exploration(&cfg, &[InitMode::Random]).unwrap();
        let xs: Vec<f64> = (0..=3).map(|i| t.mean_unique(InitMode::Random, 0.5, i).unwrap()).collect();
        assert!(xs.windows(2).all(|w| w[0] <= w[1]));
    }
}
