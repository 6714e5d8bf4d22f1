//! Bernstein–Vazirani with the all-ones secret.

use crate::circuit::{Gate, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::scheduler::{schedule_asap, AbstractCircuit, GateTimingModel};

use super::Topology;

/// BV on `n` problem qubits plus an ancilla, laid out on qubits `0..=n` of
/// the topology. If the ancilla (qubit `n`) touches every problem qubit the
/// oracle is a CNOT fan-in; otherwise the qubits must form the chain
/// `0 - 1 - ... - n` and the ancilla is swapped down the chain. Returns the
/// circuit and the target bitstring `1ⁿ`.
pub fn bv_circuit(n: usize, topology: &Topology, timing: &GateTimingModel) -> Result<(ScheduledCircuit, String)> {
    if n == 0 || topology.num_qubits < n + 1 {
        return Err(Error::TopologyTooSmall { required: n + 1, available: topology.num_qubits });
    }
    let nodes: Vec<usize> = (0..=n).collect();
    let topo = topology.induced(&nodes);
    let star = (0..n).all(|q| topo.has_edge(q, n));
    let chain = (0..n).all(|q| topo.has_edge(q, q + 1));
    if !star && !chain {
        return Err(Error::Unsupported("BV routing needs the chain 0 - 1 - ... - n or a star around qubit n".into()));
    }

    let mut ac = AbstractCircuit::new(n + 1, topo.edges.clone());
    for q in 0..n {
        ac.gate(Gate::H, &[q]);
    }
    ac.gate(Gate::X, &[n]).gate(Gate::H, &[n]);

    // Physical position of each problem qubit at the end.
    let mut position: Vec<usize> = (0..n).collect();
    if star {
        for q in 0..n {
            ac.gate(Gate::CX, &[q, n]);
        }
    } else {
        // Ancilla sits at i + 1; CNOT from i, then swap. The CNOT cancels
        // against the first CNOT of the swap, leaving two.
        for i in (0..n).rev() {
            if i == 0 {
                ac.gate(Gate::CX, &[0, 1]);
            } else {
                ac.gate(Gate::CX, &[i + 1, i]).gate(Gate::CX, &[i, i + 1]);
                position[i] = i + 1;
            }
        }
    }
    for &p in &position {
        ac.gate(Gate::H, &[p]);
    }
    ac.barrier();
    for (clbit, &p) in position.iter().enumerate() {
        ac.gate(Gate::Measure(clbit), &[p]);
    }
    Ok((schedule_asap(&ac, timing)?, "1".repeat(n)))
}
