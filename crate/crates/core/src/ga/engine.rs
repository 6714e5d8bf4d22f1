//! The training loop: evaluate, select, reproduce, mutate, survive.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::operators::{
    mutate_strategy, next_generation, select_pairs, selection_weights, strategy_crossover, top_indices,
    update_mutation_prob, MutationSchedule,
};
use crate::backend::ExecutionBackend;
use crate::circuit::ScheduledCircuit;
use crate::error::{Error, Result};
use crate::metrics::{one_norm_utility, success_probability};
use crate::scheduler::{find_idle_gaps, insert_dd_with, GateTimingModel};
use crate::seed;
use crate::sim::{CountsDistribution, ProbabilityMap};
use crate::strategy::{population::uniform_initial_population, ColorAssignment, DDSequence, DDStrategy, Population};

const INIT_STREAM: u64 = 1;
const OPS_STREAM: u64 = 2;
const EVAL_STREAM: u64 = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GAConfig {
    pub population_size: usize,
    pub sequence_length: usize,
    pub iterations: usize,
    pub shots: u64,
    pub mutation_prob_init: f64,
    pub mutation: MutationSchedule,
    /// Stop once the best utility reaches this value.
    pub early_stop: Option<f64>,
    pub seed: u64,
}

impl Default for GAConfig {
    fn default() -> Self {
        GAConfig {
            population_size: 16,
            sequence_length: 8,
            iterations: 20,
            shots: 2000,
            mutation_prob_init: 0.7,
            mutation: MutationSchedule::default(),
            early_stop: None,
            seed: 0,
        }
    }
}

impl GAConfig {
    pub fn validate(&self) -> Result<()> {
        let k = self.population_size;
        if k == 0 || k % 8 != 0 {
            return Err(Error::InvalidPopulationSize(k));
        }
        if self.sequence_length < 2 {
            return Err(Error::Config("sequence length must be at least 2".into()));
        }
        if self.shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        let m = &self.mutation;
        if !(0.0 < m.low && m.low <= self.mutation_prob_init && self.mutation_prob_init <= m.high && m.high < 1.0) {
            return Err(Error::Config("mutation bounds must satisfy 0 < low <= init <= high < 1".into()));
        }
        if !(m.far_threshold > m.close_threshold && m.close_threshold >= 0.0) {
            return Err(Error::Config("need far_threshold > close_threshold >= 0".into()));
        }
        Ok(())
    }
}

/// Scores a batch of strategies. Implementations must be deterministic in
/// `(strategies, seed)` and score each strategy independently of the others
/// in the batch.
pub trait UtilityEvaluator {
    fn evaluate(&mut self, strategies: &[DDStrategy], seed: u64) -> Result<Vec<f64>>;

    /// Whether sequences of this length fit anywhere.
    fn has_insertable_gaps(&self, _sequence_length: usize) -> bool {
        true
    }
}

/// What a training circuit is scored against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainingTarget {
    /// Success probability of one bitstring.
    Bitstring(String),
    /// One-norm agreement with an ideal distribution.
    Distribution(ProbabilityMap),
}

impl TrainingTarget {
    pub fn utility(&self, counts: &CountsDistribution) -> f64 {
        match self {
            TrainingTarget::Bitstring(b) => success_probability(counts, b),
            TrainingTarget::Distribution(p) => one_norm_utility(counts, p),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingCircuit {
    pub circuit: ScheduledCircuit,
    pub target: TrainingTarget,
}

/// Inserts each strategy into every training circuit, runs the batch on a
/// backend and averages the per-circuit utilities.
pub struct CircuitEvaluator<'a> {
    pub circuits: Vec<TrainingCircuit>,
    pub coloring: ColorAssignment,
    pub timing: GateTimingModel,
    pub repetitions: usize,
    pub shots: u64,
    pub backend: &'a dyn ExecutionBackend,
}

impl CircuitEvaluator<'_> {
    /// Decorated circuits for one strategy (`None`: bare circuits).
    pub fn decorate(&self, strategy: Option<&DDStrategy>) -> Result<Vec<ScheduledCircuit>> {
        self.circuits
            .iter()
            .map(|tc| match strategy {
                Some(s) => Ok(insert_dd_with(&tc.circuit, s, &self.coloring, &self.timing, self.repetitions)?.0),
                None => Ok(tc.circuit.clone()),
            })
            .collect()
    }

    /// Mean utility for each entry (`None`: no DD).
    pub fn evaluate_options(&self, strategies: &[Option<&DDStrategy>], seed: u64) -> Result<Vec<f64>> {
        let mut index: HashMap<Option<&DDStrategy>, usize> = HashMap::new();
        let mut unique = Vec::new();
        for s in strategies {
            index.entry(*s).or_insert_with(|| {
                unique.push(*s);
                unique.len() - 1
            });
        }
        let mut batch = Vec::with_capacity(unique.len() * self.circuits.len());
        for s in &unique {
            batch.extend(self.decorate(*s)?);
        }
        let counts = self.backend.submit(&batch, self.shots, seed)?;
        let m = self.circuits.len();
        let scores: Vec<f64> = counts
            .chunks(m)
            .map(|chunk| {
                chunk.iter().zip(&self.circuits).map(|(c, tc)| tc.target.utility(c)).sum::<f64>() / m as f64
            })
            .collect();
        Ok(strategies.iter().map(|s| scores[index[s]]).collect())
    }
}

impl UtilityEvaluator for CircuitEvaluator<'_> {
    fn evaluate(&mut self, strategies: &[DDStrategy], seed: u64) -> Result<Vec<f64>> {
        let opts: Vec<Option<&DDStrategy>> = strategies.iter().map(Some).collect();
        self.evaluate_options(&opts, seed)
    }

    fn has_insertable_gaps(&self, sequence_length: usize) -> bool {
        let need = sequence_length as f64 * self.timing.pulse_duration * self.repetitions.max(1) as f64;
        self.circuits.iter().any(|tc| !find_idle_gaps(&tc.circuit, need).is_empty())
    }
}

/// Synthetic landscape: the fraction of sites matching a hidden target
/// sequence per color. Deterministic and backend-free.
#[derive(Clone, Debug)]
pub struct TargetMatchEvaluator {
    pub target: Vec<DDSequence>,
}

impl UtilityEvaluator for TargetMatchEvaluator {
    fn evaluate(&mut self, strategies: &[DDStrategy], _seed: u64) -> Result<Vec<f64>> {
        Ok(strategies
            .iter()
            .map(|s| {
                let mut hits = 0;
                let mut total = 0;
                for (q, t) in s.sequences().iter().zip(&self.target) {
                    hits += q.pulses().iter().zip(t.pulses()).filter(|(a, b)| a == b).count();
                    total += t.len();
                }
                hits as f64 / total.max(1) as f64
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Utilities of every strategy evaluated in this iteration (parents
    /// first, then offspring).
    pub utilities: Vec<f64>,
    /// Max utility over the surviving population.
    pub best_utility: f64,
    pub best_strategy: DDStrategy,
    /// Mutation probability used to produce this generation's offspring.
    pub mutation_prob: f64,
    pub parents_kept: usize,
    pub offspring_kept: usize,
}

/// Resumable GA state after a generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub generation: usize,
    pub mutation_prob: f64,
    pub strategies: Vec<DDStrategy>,
    pub utilities: Vec<f64>,
    pub master_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingResult {
    pub records: Vec<IterationRecord>,
    pub population: Population,
    pub best_strategy: DDStrategy,
    pub best_utility: f64,
}

/// Seed used to evaluate generation `iteration`.
pub fn evaluation_seed(master: u64, iteration: usize) -> u64 {
    seed::derive(master, &[EVAL_STREAM, iteration as u64])
}

fn best_of(strategies: &[DDStrategy], utilities: &[f64]) -> (DDStrategy, f64) {
    let i = top_indices(utilities, 1)[0];
    (strategies[i].clone(), utilities[i])
}

/// Runs the GA. `resume` continues from a checkpoint; `on_generation` sees
/// every record together with the matching checkpoint.
pub fn run_gadd(
    evaluator: &mut dyn UtilityEvaluator,
    num_colors: usize,
    config: &GAConfig,
    resume: Option<&Checkpoint>,
    on_generation: &mut dyn FnMut(&IterationRecord, &Checkpoint) -> Result<()>,
) -> Result<TrainingResult> {
    config.validate()?;
    if !evaluator.has_insertable_gaps(config.sequence_length) {
        return Err(Error::NoInsertableGaps);
    }
    let k = config.population_size;
    let mut records = Vec::new();

    let (mut strategies, mut utilities, mut mutation_prob, start) = match resume {
        Some(cp) => {
            if cp.master_seed != config.seed || cp.strategies.len() != k || cp.utilities.len() != k {
                return Err(Error::Config("checkpoint does not match the configuration".into()));
            }
            (cp.strategies.clone(), cp.utilities.clone(), cp.mutation_prob, cp.generation + 1)
        }
        None => {
            let mut rng = seed::rng(config.seed, &[INIT_STREAM]);
            let pop = uniform_initial_population(k, config.sequence_length, num_colors, &mut rng)?;
            let utilities = evaluator.evaluate(&pop.strategies, evaluation_seed(config.seed, 0))?;
            let (best_strategy, best_utility) = best_of(&pop.strategies, &utilities);
            let rec = IterationRecord {
                iteration: 0,
                utilities: utilities.clone(),
                best_utility,
                best_strategy,
                mutation_prob: config.mutation_prob_init,
                parents_kept: 0,
                offspring_kept: k,
            };
            let cp = Checkpoint {
                generation: 0,
                mutation_prob: config.mutation_prob_init,
                strategies: pop.strategies.clone(),
                utilities: utilities.clone(),
                master_seed: config.seed,
            };
            on_generation(&rec, &cp)?;
            records.push(rec);
            (pop.strategies, utilities, config.mutation_prob_init, 1)
        }
    };

    let target_hit = |u: &[f64]| config.early_stop.is_some_and(|t| u.iter().any(|&x| x >= t));
    let mut stopped = resume.is_none() && target_hit(&utilities);

    for it in start..=config.iterations {
        if stopped {
            break;
        }
        let mut rng = seed::rng(config.seed, &[OPS_STREAM, it as u64]);
        let probs = selection_weights(&utilities);
        let pairs = select_pairs(&probs, k, &mut rng);
        let mut offspring = Vec::with_capacity(2 * k);
        for (a, b) in pairs {
            let (c1, c2) = strategy_crossover(&strategies[a], &strategies[b], &mut rng);
            offspring.push(mutate_strategy(&c1, mutation_prob, &mut rng));
            offspring.push(mutate_strategy(&c2, mutation_prob, &mut rng));
        }

        let mut batch = strategies.clone();
        batch.extend(offspring.iter().cloned());
        let scored = evaluator.evaluate(&batch, evaluation_seed(config.seed, it))?;
        let (parent_u, offspring_u) = scored.split_at(k);
        let survivors = next_generation(&strategies, parent_u, &offspring, offspring_u);
        let used_prob = mutation_prob;
        strategies = survivors.iter().map(|s| s.0.clone()).collect();
        utilities = survivors.iter().map(|s| s.1).collect();
        mutation_prob =
            update_mutation_prob(mutation_prob, config.mutation.statistic.compute(&utilities), &config.mutation);

        let (best_strategy, best_utility) = best_of(&strategies, &utilities);
        let rec = IterationRecord {
            iteration: it,
            utilities: scored,
            best_utility,
            best_strategy,
            mutation_prob: used_prob,
            parents_kept: k / 4,
            offspring_kept: k - k / 4,
        };
        let cp = Checkpoint {
            generation: it,
            mutation_prob,
            strategies: strategies.clone(),
            utilities: utilities.clone(),
            master_seed: config.seed,
        };
        on_generation(&rec, &cp)?;
        records.push(rec);
        stopped = target_hit(&utilities);
    }

    let (best_strategy, best_utility) = best_of(&strategies, &utilities);
    let generation = records.last().map_or(start.saturating_sub(1), |r| r.iteration);
    Ok(TrainingResult {
        records,
        population: Population { strategies, utilities: Some(utilities), generation },
        best_strategy,
        best_utility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{frame_product, PauliFrame};

    fn target() -> TargetMatchEvaluator {
        TargetMatchEvaluator { target: vec!["XpYpXpYpZmZpImIp".parse().unwrap(); 2] }
    }

    fn config(iterations: usize, seed: u64) -> GAConfig {
        GAConfig { iterations, seed, ..Default::default() }
    }

    #[test]
    fn closure_and_composition() {
        let mut ev = target();
        let mut seen = 0;
        let res = run_gadd(&mut ev, 2, &config(10, 3), None, &mut |rec, cp| {
            seen += 1;
            assert_eq!(cp.strategies.len(), 16);
            for s in &cp.strategies {
                for q in s.sequences() {
                    assert_eq!(frame_product(q.pulses()), PauliFrame::I);
                }
            }
            if rec.iteration > 0 {
                assert_eq!(rec.utilities.len(), 48);
                assert_eq!((rec.parents_kept, rec.offspring_kept), (4, 12));
            }
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, 11);
        assert_eq!(res.records.len(), 11);
        assert_eq!(res.population.size(), 16);
    }

    #[test]
    fn zero_iterations_evaluates_initial_population() {
        let res = run_gadd(&mut target(), 1, &config(0, 1), None, &mut |_, _| Ok(())).unwrap();
        assert_eq!(res.records.len(), 1);
        assert_eq!(res.records[0].utilities.len(), 16);
    }

    #[test]
    fn deterministic_and_resumable() {
        let mut cps = Vec::new();
        let full = run_gadd(&mut target(), 2, &config(8, 11), None, &mut |_, cp| {
            cps.push(cp.clone());
            Ok(())
        })
        .unwrap();
        let again = run_gadd(&mut target(), 2, &config(8, 11), None, &mut |_, _| Ok(())).unwrap();
        assert_eq!(full, again);
        let resumed = run_gadd(&mut target(), 2, &config(8, 11), Some(&cps[5]), &mut |_, _| Ok(())).unwrap();
        assert_eq!(resumed.population, full.population);
        assert_eq!(resumed.best_strategy, full.best_strategy);
        assert_eq!(resumed.records, full.records[6..].to_vec());
    }

    #[test]
    fn early_stop() {
        let cfg = GAConfig { early_stop: Some(0.5), ..config(50, 2) };
        let res = run_gadd(&mut target(), 1, &cfg, None, &mut |_, _| Ok(())).unwrap();
        assert!(res.records.len() < 51);
        assert!(res.best_utility >= 0.5);
    }

    #[test]
    fn config_validation() {
        assert!(matches!(GAConfig { population_size: 12, ..Default::default() }.validate(), Err(Error::InvalidPopulationSize(12))));
        assert!(GAConfig { mutation_prob_init: 0.95, ..Default::default() }.validate().is_err());
    }
}
