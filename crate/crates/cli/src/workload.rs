//! Turns the `[workload]` section into training circuits.

use ddforge_core::circuit::ScheduledCircuit;
use ddforge_core::ga::engine::{TrainingCircuit, TrainingTarget};
use ddforge_core::scheduler::GateTimingModel;
use ddforge_core::seed;
use ddforge_core::sim::simulate_ideal;
use ddforge_core::workloads::grover::all_oracles;
use ddforge_core::workloads::{
    bv_circuit, cliffordize, default_grover_iterations, ghz_circuit, grover_circuit, mrb_training_set, MrbSpec,
    Topology,
};

use crate::config::{parse_topology, ExperimentConfig, WorkloadConfig};
use crate::error::{CliError, CliResult};

pub const CLIFFORDIZE_STREAM: u64 = 20;

/// Circuits a strategy is scored on, all on one register.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub label: String,
    pub num_qubits: usize,
    pub edges: Vec<(usize, usize)>,
    pub circuits: Vec<TrainingCircuit>,
    /// Extra circuits scored after training (Grover: every oracle).
    pub transfer: Option<Vec<TrainingCircuit>>,
}

/// The subgraph on the first `n` qubits of a BFS from qubit 0, relabelled.
pub fn first_n(topology: &Topology, n: usize) -> CliResult<Topology> {
    let order = topology.bfs(0);
    if order.len() < n {
        return Err(CliError::Config(format!("topology reaches only {} qubits, {n} needed", order.len())));
    }
    let nodes: Vec<usize> = order[..n].iter().map(|&(q, _)| q).collect();
    Ok(topology.induced(&nodes))
}

fn from_circuit(label: String, circuits: Vec<TrainingCircuit>) -> Experiment {
    let c = &circuits[0].circuit;
    Experiment { label, num_qubits: c.num_qubits, edges: c.coupling_edges.clone(), circuits, transfer: None }
}

fn grover_oracle_circuit(bits: &str, iterations: usize, timing: &GateTimingModel) -> CliResult<TrainingCircuit> {
    Ok(TrainingCircuit {
        circuit: grover_circuit(bits, iterations, timing)?,
        target: TrainingTarget::Bitstring(bits.to_string()),
    })
}

pub fn build(config: &ExperimentConfig) -> CliResult<Experiment> {
    let timing = config.timing();
    match config.workload()? {
        WorkloadConfig::Bv { size, topology } => {
            let topo = parse_topology(topology.as_deref(), size + 1)?;
            let (circuit, target) = bv_circuit(*size, &topo, &timing)?;
            let tc = TrainingCircuit { circuit, target: TrainingTarget::Bitstring(target) };
            Ok(from_circuit(format!("bv-{size}"), vec![tc]))
        }
        WorkloadConfig::Ghz { size, topology } => {
            let topo = parse_topology(topology.as_deref(), *size)?;
            let (circuit, ideal) = ghz_circuit(*size, &topo, &timing)?;
            let tc = TrainingCircuit { circuit, target: TrainingTarget::Distribution(ideal) };
            Ok(from_circuit(format!("ghz-{size}"), vec![tc]))
        }
        WorkloadConfig::Grover { oracle, iterations, cliffordize: cliff, transfer_oracles } => {
            let n = oracle.len();
            let its = iterations.unwrap_or_else(|| default_grover_iterations(n));
            let mut circuit = grover_circuit(oracle, its, &timing)?;
            if *cliff {
                circuit = cliffordize(&circuit, &mut seed::rng(config.seed, &[CLIFFORDIZE_STREAM]))?;
            }
            let ideal = simulate_ideal(&circuit)?;
            let tc = TrainingCircuit { circuit, target: TrainingTarget::Distribution(ideal) };
            let label = format!("grover-{oracle}{}", if *cliff { "-cliffordized" } else { "" });
            let mut exp = from_circuit(label, vec![tc]);
            if *transfer_oracles {
                let all = all_oracles(n)
                    .iter()
                    .map(|bits| grover_oracle_circuit(bits, its, &timing))
                    .collect::<CliResult<Vec<_>>>()?;
                exp.transfer = Some(all);
            }
            Ok(exp)
        }
        WorkloadConfig::Mrb { width, depth, density, flavor, circuits, topology } => {
            let topo = first_n(&parse_topology(topology.as_deref(), *width)?, *width)?;
            let spec = MrbSpec {
                width: *width,
                depth: *depth,
                two_qubit_density: *density,
                flavor: *flavor,
                edges: topo.edges,
                seed: config.seed,
            };
            let set = mrb_training_set(&spec, *circuits, &timing)?
                .into_iter()
                .map(|(circuit, target)| TrainingCircuit { circuit, target: TrainingTarget::Bitstring(target) })
                .collect();
            Ok(from_circuit(format!("mrb-{width}x{depth}"), set))
        }
    }
}

/// Circuits for the `workload` subcommand: the training set, then any
/// transfer circuits.
pub fn all_circuits(exp: &Experiment) -> Vec<&TrainingCircuit> {
    exp.circuits.iter().chain(exp.transfer.iter().flatten()).collect()
}

pub fn target_json(tc: &TrainingCircuit) -> serde_json::Value {
    match &tc.target {
        TrainingTarget::Bitstring(b) => serde_json::json!(b),
        TrainingTarget::Distribution(p) => serde_json::json!(p),
    }
}

pub fn circuit_json(circuit: &ScheduledCircuit) -> serde_json::Value {
    serde_json::to_value(circuit).expect("circuit serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse;

    #[test]
    fn builds_each_kind() {
        let bv = build(&parse("seed = 1\n[workload]\nkind = \"bv\"\nsize = 3\n").unwrap()).unwrap();
        assert_eq!(bv.num_qubits, 4);
        assert_eq!(bv.edges, vec![(0, 1), (1, 2), (2, 3)]);

        let ghz = build(&parse("seed = 1\n[workload]\nkind = \"ghz\"\nsize = 4\ntopology = \"grid:2x3\"\n").unwrap())
            .unwrap();
        assert_eq!(ghz.num_qubits, 4);

        let text = "seed = 1\n[workload]\nkind = \"grover\"\noracle = \"101\"\ntransfer_oracles = true\ncliffordize = true\n";
        let g = build(&parse(text).unwrap()).unwrap();
        assert!(g.circuits[0].circuit.is_clifford());
        assert_eq!(g.transfer.as_ref().unwrap().len(), 8);

        let m = build(&parse("seed = 1\n[workload]\nkind = \"mrb\"\nwidth = 4\ndepth = 2\ncircuits = 3\n").unwrap())
            .unwrap();
        assert_eq!(m.circuits.len(), 3);
    }

    #[test]
    fn missing_workload_is_a_config_error() {
        assert!(matches!(build(&parse("seed = 1\n").unwrap()), Err(CliError::Config(_))));
    }
}
