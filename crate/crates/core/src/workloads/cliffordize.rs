//! Replaces non-Clifford single-qubit gates by nearby Clifford gates,
//! rounding each phase to one of its two neighbouring multiples of `π/2`
//! with probabilities that preserve the phase in expectation.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;

use crate::circuit::{Gate, Instruction, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2};

/// Rounds `phi` (taken mod 2π) to the quadrant bound `b` above it with
/// probability `(phi − a)/(π/2)`, otherwise to the bound `a` below.
pub fn round_phase<R: Rng>(phi: f64, rng: &mut R) -> f64 {
    let phi = phi.rem_euclid(TAU);
    let k = (phi / FRAC_PI_2).floor();
    let a = k * FRAC_PI_2;
    let frac = (phi - a) / FRAC_PI_2;
    if frac < 1e-12 {
        return a % TAU;
    }
    if frac > 1.0 - 1e-12 {
        return (a + FRAC_PI_2) % TAU;
    }
    if rng.random::<f64>() < frac {
        (a + FRAC_PI_2) % TAU
    } else {
        a
    }
}

fn sx() -> Mat2 {
    linalg::rx(FRAC_PI_2)
}

/// `U(θ, φ, λ) ≅ Rz(φ + π) · SX · Rz(θ + π) · SX · Rz(λ)`.
pub fn zsx_angles(theta: f64, phi: f64, lambda: f64) -> [f64; 3] {
    [phi + PI, theta + PI, lambda]
}

pub fn zsx_matrix(angles: [f64; 3]) -> Mat2 {
    let [a, b, c] = angles;
    linalg::matmul(&linalg::rz(a), &linalg::matmul(&sx(), &linalg::matmul(&linalg::rz(b), &linalg::matmul(&sx(), &linalg::rz(c)))))
}

fn round_gate<R: Rng>(gate: Gate, rng: &mut R) -> Result<Gate> {
    if gate.is_clifford() {
        return Ok(gate);
    }
    let Some(m) = gate.matrix() else {
        return Err(Error::UnsupportedGate(gate.name()));
    };
    Ok(match gate {
        Gate::Rx(a) => Gate::Rx(round_phase(a, rng)),
        Gate::Ry(a) => Gate::Ry(round_phase(a, rng)),
        _ if linalg::is_diagonal(&m) => Gate::Rz(round_phase(m[1][1].arg() - m[0][0].arg(), rng)),
        _ => {
            let (t, p, l) = linalg::u3_angles(&m);
            let angles = zsx_angles(t, p, l).map(|a| round_phase(a, rng));
            let (t, p, l) = linalg::u3_angles(&zsx_matrix(angles));
            Gate::U(t, p, l)
        }
    })
}

/// Gate-for-gate Clifford approximation with identical timing.
pub fn cliffordize<R: Rng>(circuit: &ScheduledCircuit, rng: &mut R) -> Result<ScheduledCircuit> {
    let mut out = circuit.clone();
    out.instructions = circuit
        .instructions
        .iter()
        .map(|i| Ok(Instruction { gate: round_gate(i.gate, rng)?, ..i.clone() }))
        .collect::<Result<_>>()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use crate::workloads::grover_circuit;
    use crate::scheduler::GateTimingModel;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn zsx_decomposition_matches_u3() {
        for (t, p, l) in [(0.3, 1.2, -0.7), (PI, 0.0, 0.0), (2.0, -2.5, 0.9)] {
            let d = linalg::phase_distance(&linalg::u3(t, p, l), &zsx_matrix(zsx_angles(t, p, l)));
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn tdg_rounds_to_three_halves_pi_or_zero() {
        let mut rng = seed::rng(1, &[]);
        let mut high = 0;
        for _ in 0..4000 {
            let r = round_phase(-FRAC_PI_4, &mut rng);
            assert!(r == 0.0 || (r - 1.5 * PI).abs() < 1e-12);
            high += usize::from(r != 0.0);
        }
        assert!((high as f64 / 4000.0 - 0.5).abs() < 0.04);
        assert_eq!(round_phase(FRAC_PI_2, &mut rng), FRAC_PI_2);
    }

    #[test]
    fn rounding_is_unbiased() {
        let mut rng = seed::rng(2, &[]);
        let n = 10_000;
        let hits = (0..n).filter(|_| round_phase(FRAC_PI_4, &mut rng) > 0.0).count() as f64;
        let p = hits / n as f64;
        let se = (0.25 / n as f64).sqrt();
        assert!(((p * FRAC_PI_2) - FRAC_PI_4).abs() <= 3.0 * se * FRAC_PI_2);
    }

    #[test]
    fn output_is_clifford_with_same_timing() {
        let timing = GateTimingModel::default();
        let grover = grover_circuit("10110", 1, &timing).unwrap();
        let mut mixed = ScheduledCircuit::new(2, vec![]);
        mixed.push(Gate::U(0.3, 0.2, 0.1), vec![0], 0.0, 50.0);
        mixed.push(Gate::Rx(0.4), vec![1], 0.0, 50.0);
        mixed.push(Gate::T, vec![1], 50.0, 0.0);
        let mut rng = seed::rng(3, &[]);
        for c in [grover, mixed] {
            assert!(!c.is_clifford());
            let out = cliffordize(&c, &mut rng).unwrap();
            assert!(out.is_clifford());
            assert_eq!(out.instructions.len(), c.instructions.len());
            for (a, b) in out.instructions.iter().zip(&c.instructions) {
                assert_eq!((a.t0, a.dt, &a.qubits), (b.t0, b.dt, &b.qubits));
            }
        }
    }

    #[test]
    fn two_qubit_non_clifford_rejected() {
        let mut c = ScheduledCircuit::new(2, vec![(0, 1)]);
        c.push(Gate::CP(0.3), vec![0, 1], 0.0, 500.0);
        assert!(matches!(cliffordize(&c, &mut seed::rng(0, &[])), Err(Error::UnsupportedGate(_))));
    }
}
