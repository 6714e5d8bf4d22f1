//! Mirror randomized benchmarking circuits.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::pauli::PauliFrame;
use crate::scheduler::{schedule_asap, AbstractCircuit, GateTimingModel};
use crate::seed;
use crate::sim::stabilizer::CliffordAction;

use super::mirror::mirror_circuit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MrbFlavor {
    Clifford,
    Su2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MrbSpec {
    pub width: usize,
    /// Benchmark depth; even.
    pub depth: usize,
    pub two_qubit_density: f64,
    pub flavor: MrbFlavor,
    /// Coupling edges among qubits `0..width`.
    pub edges: Vec<(usize, usize)>,
    pub seed: u64,
}

impl MrbSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 {
            return Err(Error::Config("MRB width must be positive".into()));
        }
        if self.depth % 2 != 0 {
            return Err(Error::Config(format!("MRB depth {} is odd", self.depth)));
        }
        if !(0.0..=1.0).contains(&self.two_qubit_density) {
            return Err(Error::Config("two-qubit density must lie in [0, 1]".into()));
        }
        for &(a, b) in &self.edges {
            if a == b || a >= self.width || b >= self.width {
                return Err(Error::InvalidEdge(a, b));
            }
        }
        Ok(())
    }
}

/// The 24 single-qubit Cliffords as `U` gates.
pub fn clifford_gates() -> &'static [Gate] {
    static TABLE: OnceLock<Vec<Gate>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut seen: Vec<CliffordAction> = Vec::new();
        let mut out = Vec::new();
        for t in 0..3 {
            for p in 0..4 {
                for l in 0..4 {
                    let g = Gate::U(t as f64 * FRAC_PI_2, p as f64 * FRAC_PI_2, l as f64 * FRAC_PI_2);
                    let a = CliffordAction::from_matrix(&g.matrix().expect("1q")).expect("Clifford");
                    if !seen.contains(&a) {
                        seen.push(a);
                        out.push(g);
                    }
                }
            }
        }
        assert_eq!(out.len(), 24);
        out
    })
}

/// Haar-random `SU(2)` element as a `U` gate.
pub fn haar_gate<R: Rng>(rng: &mut R) -> Gate {
    let theta = (1.0 - 2.0 * rng.random::<f64>()).acos();
    Gate::U(theta, rng.random::<f64>() * TAU, rng.random::<f64>() * TAU)
}

fn greedy_matching<R: Rng>(edges: &[(usize, usize)], n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut order = edges.to_vec();
    order.shuffle(rng);
    let mut used = vec![false; n];
    let mut out = Vec::new();
    for (a, b) in order {
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            out.push((a, b));
        }
    }
    out
}

/// Random matching whose expected share of occupied qubits is about `xi`:
/// a greedy candidate matching over shuffled edges, each candidate kept
/// with probability `min(1, ξN / (2 E|candidates|))`.
pub fn edge_grab_sample<R: Rng>(edges: &[(usize, usize)], n: usize, xi: f64, rng: &mut R) -> Vec<(usize, usize)> {
    if xi <= 0.0 || edges.is_empty() {
        return Vec::new();
    }
    // The expected candidate count depends only on the graph.
    let mut pre = seed::rng(edges.len() as u64, &[n as u64]);
    let mean = (0..100).map(|_| greedy_matching(edges, n, &mut pre).len()).sum::<usize>() as f64 / 100.0;
    let keep = (xi * n as f64 / (2.0 * mean)).min(1.0);
    greedy_matching(edges, n, rng).into_iter().filter(|_| rng.random::<f64>() < keep).collect()
}

fn random_pauli_layer<R: Rng>(ac: &mut AbstractCircuit, rng: &mut R) {
    for q in 0..ac.num_qubits {
        match PauliFrame::ALL[rng.random_range(0..4)] {
            PauliFrame::I => {}
            PauliFrame::X => {
                ac.gate(Gate::X, &[q]);
            }
            PauliFrame::Y => {
                ac.gate(Gate::Y, &[q]);
            }
            PauliFrame::Z => {
                ac.gate(Gate::Z, &[q]);
            }
        }
    }
    ac.barrier();
}

/// Random Clifford layer, `D/2` dressed benchmark layers, their mirror
/// image around a random Pauli layer, and a measurement. Returns the
/// circuit and its ideal outcome.
pub fn mrb_circuit(spec: &MrbSpec, timing: &GateTimingModel) -> Result<(ScheduledCircuit, String)> {
    spec.validate()?;
    let mut rng = seed::rng(spec.seed, &[]);
    let cliffords = clifford_gates();
    let mut ac = AbstractCircuit::new(spec.width, spec.edges.clone());
    for q in 0..spec.width {
        ac.gate(cliffords[rng.random_range(0..24)], &[q]);
    }
    ac.barrier();
    for _ in 0..spec.depth / 2 {
        random_pauli_layer(&mut ac, &mut rng);
        for q in 0..spec.width {
            let g = match spec.flavor {
                MrbFlavor::Clifford => cliffords[rng.random_range(0..24)],
                MrbFlavor::Su2 => haar_gate(&mut rng),
            };
            ac.gate(g, &[q]);
        }
        ac.barrier();
        for (a, b) in edge_grab_sample(&spec.edges, spec.width, spec.two_qubit_density, &mut rng) {
            if rng.random::<bool>() {
                ac.gate(Gate::CX, &[a, b]);
            } else {
                ac.gate(Gate::CX, &[b, a]);
            }
        }
        ac.barrier();
    }
    let motif = schedule_asap(&ac, timing)?;
    mirror_circuit(&motif, timing, &mut rng)
}

/// `count` fixed MRB circuits; circuit `i` uses seed `derive(seed, [i])`.
pub fn mrb_training_set(spec: &MrbSpec, count: usize, timing: &GateTimingModel) -> Result<Vec<(ScheduledCircuit, String)>> {
    if count == 0 {
        return Err(Error::Config("training set needs at least one circuit".into()));
    }
    (0..count)
        .map(|i| mrb_circuit(&MrbSpec { seed: seed::derive(spec.seed, &[i as u64]), ..spec.clone() }, timing))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::simulate_ideal;
    use crate::workloads::Topology;

    fn spec(width: usize, depth: usize, flavor: MrbFlavor, seed: u64) -> MrbSpec {
        MrbSpec { width, depth, two_qubit_density: 0.25, flavor, edges: Topology::linear(width).edges, seed }
    }

    #[test]
    fn noiseless_success_is_one() {
        let timing = GateTimingModel::default();
        for s in 0..4 {
            for (w, d, f) in [(6, 6, MrbFlavor::Clifford), (4, 4, MrbFlavor::Su2), (3, 0, MrbFlavor::Clifford)] {
                let (c, target) = mrb_circuit(&spec(w, d, f, s), &timing).unwrap();
                let p = simulate_ideal(&c).unwrap();
                assert!((p.get(&target).copied().unwrap_or(0.0) - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn edge_grab_is_a_matching_with_calibrated_density() {
        let edges = Topology::linear(10).edges;
        let mut rng = seed::rng(8, &[]);
        let mut occupied = 0usize;
        let trials = 10_000;
        for _ in 0..trials {
            let m = edge_grab_sample(&edges, 10, 0.25, &mut rng);
            let mut used = [false; 10];
            for (a, b) in &m {
                assert!(!used[*a] && !used[*b]);
                used[*a] = true;
                used[*b] = true;
            }
            occupied += 2 * m.len();
        }
        let frac = occupied as f64 / (10 * trials) as f64;
        assert!((frac - 0.25).abs() < 0.05, "{frac}");
        assert!(edge_grab_sample(&edges, 10, 0.0, &mut rng).is_empty());
    }

    #[test]
    fn training_set_is_fixed() {
        let timing = GateTimingModel::default();
        let s = MrbSpec { width: 10, depth: 6, ..spec(10, 6, MrbFlavor::Clifford, 3) };
        let a = mrb_training_set(&s, 5, &timing).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a, mrb_training_set(&s, 5, &timing).unwrap());
        assert_ne!(a[0], a[1]);
        assert!(mrb_training_set(&s, 0, &timing).is_err());
    }

    #[test]
    fn odd_depth_rejected() {
        assert!(mrb_circuit(&spec(4, 3, MrbFlavor::Clifford, 0), &GateTimingModel::default()).is_err());
    }
}
