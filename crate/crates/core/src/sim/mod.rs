//! Circuit execution: noisy trajectories, exact ideal distributions and
//! stabilizer shortcuts for Clifford circuits.

pub mod counts;
pub mod noise;
pub mod stabilizer;
pub mod trajectory;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use counts::{CountsDistribution, ProbabilityMap};
pub use noise::{NoiseModel, ZZCoupling};

use crate::circuit::{Instruction, ScheduledCircuit};
use crate::error::{Error, Result};
use trajectory::Prepared;

pub const DEFAULT_MAX_QUBITS: usize = 14;

const SAMPLE_STREAM: u64 = 0x7361_6d70;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOptions {
    /// Independent noise realizations; `None` means one per shot. Shots are
    /// drawn from the mixture of the per-trajectory distributions.
    pub trajectories: Option<usize>,
    pub max_qubits: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { trajectories: None, max_qubits: DEFAULT_MAX_QUBITS }
    }
}

/// Instructions ordered by the midpoint of their time slot (stable).
pub fn time_ordered(circuit: &ScheduledCircuit) -> Vec<&Instruction> {
    let mut v: Vec<&Instruction> = circuit.instructions.iter().collect();
    v.sort_by(|a, b| (a.t0 + a.dt / 2.0).total_cmp(&(b.t0 + b.dt / 2.0)));
    v
}

fn check_size(circuit: &ScheduledCircuit, limit: usize) -> Result<()> {
    if circuit.num_qubits > limit {
        return Err(Error::TooManyQubits { qubits: circuit.num_qubits, limit });
    }
    Ok(())
}

/// Mixture of per-trajectory outcome distributions (before readout error),
/// indexed by classical-bit pattern.
fn mixture(
    circuit: &ScheduledCircuit,
    noise: &NoiseModel,
    trajectories: usize,
    seed: u64,
    options: &SimOptions,
) -> Result<(Prepared, Vec<f64>)> {
    check_size(circuit, options.max_qubits)?;
    circuit.validate()?;
    noise.validate()?;
    let prepared = Prepared::new(circuit, noise)?;
    let r_count = if noise.is_stochastic() { trajectories.max(1) } else { 1 };
    let mut acc = vec![0.0; 1 << prepared.measured_qubits().len()];
    for r in 0..r_count as u64 {
        let fields = prepared.draw_fields(seed, r);
        for (a, p) in acc.iter_mut().zip(prepared.run(&fields, seed, r)) {
            *a += p;
        }
    }
    let scale = 1.0 / r_count as f64;
    acc.iter_mut().for_each(|a| *a *= scale);
    Ok((prepared, acc))
}

fn bitstring(key: usize, width: usize) -> String {
    (0..width).map(|k| if (key >> k) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Monte-Carlo execution of `circuit` under `noise`. Deterministic in
/// `(circuit, noise, shots, seed, options)`.
pub fn simulate_counts(
    circuit: &ScheduledCircuit,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
    options: &SimOptions,
) -> Result<CountsDistribution> {
    if shots == 0 {
        return Err(Error::InvalidCircuit("shots must be at least 1".into()));
    }
    let trajectories = options.trajectories.unwrap_or(shots as usize);
    let (prepared, probs) = mixture(circuit, noise, trajectories, seed, options)?;
    let measured = prepared.measured_qubits();
    let width = measured.len();

    let mut cumulative = Vec::with_capacity(probs.len());
    let mut total = 0.0;
    for p in &probs {
        total += p;
        cumulative.push(total);
    }
    let readout: Option<Vec<f64>> = noise
        .readout_error
        .as_ref()
        .map(|r| measured.iter().map(|&q| r[q]).collect())
        .filter(|r: &Vec<f64>| r.iter().any(|&x| x > 0.0));

    let mut rng = crate::seed::rng(seed, &[SAMPLE_STREAM]);
    let mut hist = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let mut key = cumulative.partition_point(|&c| c <= u).min(probs.len() - 1);
        if let Some(r) = &readout {
            for (k, &e) in r.iter().enumerate() {
                if rng.random::<f64>() < e {
                    key ^= 1 << k;
                }
            }
        }
        hist[key] += 1;
    }
    let mut counts = CountsDistribution::new();
    for (key, &n) in hist.iter().enumerate() {
        if n > 0 {
            counts.add(&bitstring(key, width), n);
        }
    }
    Ok(counts)
}

/// Outcome probabilities averaged over `trajectories` noise realizations,
/// without shot noise or readout error.
pub fn simulate_probabilities(
    circuit: &ScheduledCircuit,
    noise: &NoiseModel,
    trajectories: usize,
    seed: u64,
    options: &SimOptions,
) -> Result<ProbabilityMap> {
    let (prepared, probs) = mixture(circuit, noise, trajectories, seed, options)?;
    let width = prepared.measured_qubits().len();
    Ok(probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 1e-14)
        .map(|(k, &p)| (bitstring(k, width), p))
        .collect())
}

/// Exact noiseless output distribution. Circuits above the statevector
/// limit are handled by the stabilizer path when they are Clifford.
pub fn simulate_ideal(circuit: &ScheduledCircuit) -> Result<ProbabilityMap> {
    if circuit.num_qubits <= DEFAULT_MAX_QUBITS {
        let noise = NoiseModel::noiseless(circuit.num_qubits);
        return simulate_probabilities(circuit, &noise, 1, 0, &SimOptions::default());
    }
    if !circuit.is_clifford() {
        return Err(Error::TooManyQubits { qubits: circuit.num_qubits, limit: DEFAULT_MAX_QUBITS });
    }
    circuit.validate()?;
    stabilizer::clifford_distribution(circuit, 1 << 16)
}

/// The deterministic outcome of a Clifford circuit.
pub fn target_bitstring(circuit: &ScheduledCircuit) -> Result<String> {
    let mut t = stabilizer::run_clifford(circuit)?;
    circuit
        .measurements()
        .into_iter()
        .map(|(q, _)| match t.deterministic_outcome(q) {
            Some(b) => Ok(if b { '1' } else { '0' }),
            None => Err(Error::NondeterministicOutcome(q)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn measure_all(c: &mut ScheduledCircuit, t: f64) {
        for q in 0..c.num_qubits {
            c.push(Gate::Measure(q), vec![q], t, 700.0);
        }
    }

    #[test]
    fn noiseless_x_gives_one() {
        let mut c = ScheduledCircuit::new(1, vec![]);
        c.push(Gate::X, vec![0], 0.0, 50.0);
        measure_all(&mut c, 50.0);
        let counts = simulate_counts(&c, &NoiseModel::noiseless(1), 100, 1, &SimOptions::default()).unwrap();
        assert_eq!(counts.get("1"), 100);
    }

    #[test]
    fn ghz_ideal_both_paths() {
        let mut c = ScheduledCircuit::new(3, vec![(0, 1), (1, 2)]);
        c.push(Gate::H, vec![0], 0.0, 50.0);
        c.push(Gate::CX, vec![0, 1], 50.0, 500.0);
        c.push(Gate::CX, vec![1, 2], 550.0, 500.0);
        measure_all(&mut c, 1050.0);
        let sv = simulate_ideal(&c).unwrap();
        let tab = stabilizer::clifford_distribution(&c, 16).unwrap();
        for map in [sv, tab] {
            assert_eq!(map.len(), 2);
            assert!((map["000"] - 0.5).abs() < 1e-12);
            assert!((map["111"] - 0.5).abs() < 1e-12);
        }
        assert!(matches!(target_bitstring(&c), Err(Error::NondeterministicOutcome(_))));
    }

    #[test]
    fn target_of_simple_circuits() {
        let mut c = ScheduledCircuit::new(3, vec![]);
        measure_all(&mut c, 0.0);
        assert_eq!(target_bitstring(&c).unwrap(), "000");
        let mut c = ScheduledCircuit::new(3, vec![]);
        c.push(Gate::X, vec![1], 0.0, 50.0);
        measure_all(&mut c, 50.0);
        assert_eq!(target_bitstring(&c).unwrap(), "010");
    }

    #[test]
    fn too_many_qubits() {
        let mut c = ScheduledCircuit::new(15, vec![]);
        c.push(Gate::T, vec![0], 0.0, 0.0);
        let err = simulate_counts(&c, &NoiseModel::noiseless(15), 1, 0, &SimOptions::default());
        assert!(matches!(err, Err(Error::TooManyQubits { qubits: 15, limit: 14 })));
        assert!(matches!(simulate_ideal(&c), Err(Error::TooManyQubits { .. })));
    }

    #[test]
    fn readout_error_flips_bits() {
        let mut c = ScheduledCircuit::new(1, vec![]);
        measure_all(&mut c, 0.0);
        let mut noise = NoiseModel::noiseless(1);
        noise.readout_error = Some(vec![0.25]);
        let counts = simulate_counts(&c, &noise, 20000, 4, &SimOptions::default()).unwrap();
        let p = counts.get("1") as f64 / 20000.0;
        assert!((p - 0.25).abs() < 0.015, "{p}");
    }

    #[test]
    fn mid_circuit_reuse_rejected() {
        let mut c = ScheduledCircuit::new(1, vec![]);
        c.push(Gate::Measure(0), vec![0], 0.0, 700.0);
        c.push(Gate::X, vec![0], 800.0, 50.0);
        assert!(matches!(
            simulate_counts(&c, &NoiseModel::noiseless(1), 1, 0, &SimOptions::default()),
            Err(Error::Unsupported(_))
        ));
    }
}
