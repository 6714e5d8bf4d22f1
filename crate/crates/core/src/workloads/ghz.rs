//! GHZ preparation by CNOT fan-out along a breadth-first tree.

use crate::circuit::{Gate, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::scheduler::{schedule_asap, AbstractCircuit, GateTimingModel};
use crate::sim::ProbabilityMap;

use super::Topology;

/// GHZ state on the first `n` qubits reached by a BFS from qubit 0. Qubits
/// are relabelled in BFS order. Returns the circuit and the ideal
/// distribution.
pub fn ghz_circuit(n: usize, topology: &Topology, timing: &GateTimingModel) -> Result<(ScheduledCircuit, ProbabilityMap)> {
    if n < 2 {
        return Err(Error::InvalidCircuit("GHZ needs at least 2 qubits".into()));
    }
    if topology.num_qubits < n {
        return Err(Error::TopologyTooSmall { required: n, available: topology.num_qubits });
    }
    let order = topology.bfs(0);
    if order.len() < n {
        return Err(Error::TopologyDisconnected);
    }
    let order = &order[..n];
    let nodes: Vec<usize> = order.iter().map(|&(q, _)| q).collect();
    let label = |q: usize| nodes.iter().position(|&x| x == q).expect("visited");
    let mut ac = AbstractCircuit::new(n, topology.induced(&nodes).edges);
    ac.gate(Gate::H, &[0]);
    for &(q, parent) in &order[1..] {
        ac.gate(Gate::CX, &[label(parent.expect("non-root")), label(q)]);
    }
    ac.measure_all();
    let ideal = ProbabilityMap::from([("0".repeat(n), 0.5), ("1".repeat(n), 0.5)]);
    Ok((schedule_asap(&ac, timing)?, ideal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::simulate_ideal;

    #[test]
    fn ideal_distribution() {
        let timing = GateTimingModel::default();
        for (n, topo) in [(2, Topology::linear(2)), (3, Topology::linear(3)), (8, Topology::heavy_hex_fragment())] {
            let (c, ideal) = ghz_circuit(n, &topo, &timing).unwrap();
            let p = simulate_ideal(&c).unwrap();
            for (k, v) in &ideal {
                assert!((p[k] - v).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn disconnected() {
        let topo = Topology::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(matches!(ghz_circuit(3, &topo, &GateTimingModel::default()), Err(Error::TopologyDisconnected)));
    }
}
