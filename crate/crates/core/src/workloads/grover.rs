//! Grover search with phase oracles built from CNOTs and `Rz` rotations.
//!
//! The multi-controlled Z is written as a phase polynomial: the product of
//! the qubit values equals a signed sum of parities over all nonempty
//! subsets, each parity is accumulated on the subset's highest qubit in
//! Gray-code order, and each receives an `Rz`. Marking a different bitstring
//! only flips the signs of some angles, so every oracle has the same
//! schedule.

use std::f64::consts::PI;

use crate::circuit::{Gate, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::scheduler::{schedule_asap, AbstractCircuit, GateTimingModel};

use super::Topology;

pub fn grover_angle(n: usize) -> f64 {
    (2f64.powf(-(n as f64) / 2.0)).asin()
}

/// Ideal success probability after `iterations` rounds.
pub fn grover_success_closed_form(n: usize, iterations: usize) -> f64 {
    ((2 * iterations + 1) as f64 * grover_angle(n)).sin().powi(2)
}

/// `round(π/(4θ) − 1/2)`.
pub fn default_grover_iterations(n: usize) -> usize {
    (PI / (4.0 * grover_angle(n)) - 0.5).round() as usize
}

/// Phase flip on `|marked⟩` (global phase aside).
fn phase_flip(ac: &mut AbstractCircuit, n: usize, marked: &[bool]) {
    let unit = PI / (1u64 << (n - 1)) as f64;
    for m in 0..n {
        let angle = |subset: usize| {
            let members = subset | (1 << m);
            let size = members.count_ones();
            let zeros = (0..n).filter(|&q| members >> q & 1 == 1 && !marked[q]).count();
            let mut a = if size % 2 == 1 { unit } else { -unit };
            if zeros % 2 == 1 {
                a = -a;
            }
            a
        };
        ac.gate(Gate::Rz(angle(0)), &[m]);
        for k in 1usize..1 << m {
            let j = k.trailing_zeros() as usize;
            ac.gate(Gate::CX, &[j, m]);
            ac.gate(Gate::Rz(angle(k ^ (k >> 1))), &[m]);
        }
        if m > 0 {
            ac.gate(Gate::CX, &[m - 1, m]);
        }
    }
}

/// Grover search for `oracle_bits` (character `k` is qubit `k`) on an
/// all-to-all register of `oracle_bits.len()` qubits.
pub fn grover_circuit(oracle_bits: &str, iterations: usize, timing: &GateTimingModel) -> Result<ScheduledCircuit> {
    let n = oracle_bits.len();
    if n < 2 {
        return Err(Error::InvalidCircuit("Grover needs at least 2 qubits".into()));
    }
    let marked: Vec<bool> = oracle_bits
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("bad oracle bitstring {oracle_bits:?}"))),
        })
        .collect::<Result<_>>()?;
    let mut ac = AbstractCircuit::new(n, Topology::all_to_all(n).edges);
    for q in 0..n {
        ac.gate(Gate::H, &[q]);
    }
    for _ in 0..iterations {
        phase_flip(&mut ac, n, &marked);
        for q in 0..n {
            ac.gate(Gate::H, &[q]);
        }
        phase_flip(&mut ac, n, &vec![false; n]);
        for q in 0..n {
            ac.gate(Gate::H, &[q]);
        }
    }
    ac.measure_all();
    schedule_asap(&ac, timing)
}

/// All `2ⁿ` oracle bitstrings in counting order.
pub fn all_oracles(n: usize) -> Vec<String> {
    (0..1usize << n).map(|v| (0..n).map(|q| if v >> q & 1 == 1 { '1' } else { '0' }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::simulate_ideal;

    #[test]
    fn closed_form_values() {
        assert!((grover_success_closed_form(2, 1) - 1.0).abs() < 1e-12);
        assert_eq!(default_grover_iterations(5), 4);
        assert!((grover_success_closed_form(5, 4) - 0.9992).abs() < 1e-4);
    }

    #[test]
    fn matches_closed_form() {
        let timing = GateTimingModel::default();
        for n in 2..=4 {
            for t in 0..=3 {
                for oracle in all_oracles(n).into_iter().step_by(3) {
                    let c = grover_circuit(&oracle, t, &timing).unwrap();
                    let p = simulate_ideal(&c).unwrap();
                    let got = p.get(&oracle).copied().unwrap_or(0.0);
                    assert!((got - grover_success_closed_form(n, t)).abs() < 1e-9, "n={n} t={t} {oracle}");
                }
            }
        }
    }

    #[test]
    fn oracles_share_schedule() {
        let timing = GateTimingModel::default();
        let a = grover_circuit("00000", 2, &timing).unwrap();
        let b = grover_circuit("11010", 2, &timing).unwrap();
        assert_eq!(a.instructions.len(), b.instructions.len());
        let mut differ = 0;
        for (x, y) in a.instructions.iter().zip(&b.instructions) {
            assert_eq!((x.t0, x.dt, &x.qubits), (y.t0, y.dt, &y.qubits));
            if x.gate != y.gate {
                assert!(matches!((x.gate, y.gate), (Gate::Rz(_), Gate::Rz(_))));
                differ += 1;
            }
        }
        assert!(differ > 0);
    }
}
