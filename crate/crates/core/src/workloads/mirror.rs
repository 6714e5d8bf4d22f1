//! Mirror circuits: a motif, a random Pauli layer, then the motif undone in
//! reverse with the same idle timings. The output is deterministic and is
//! found by pushing the Pauli layer through the inverse half.

use rand::Rng;

use crate::circuit::{Gate, GateClass, Instruction, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pauli::PauliFrame;
use crate::scheduler::GateTimingModel;
use crate::sim::stabilizer::CliffordAction;

/// A Pauli frame on `n` qubits, signs dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameTracker {
    pub frame: Vec<PauliFrame>,
}

impl FrameTracker {
    pub fn new(frame: Vec<PauliFrame>) -> Self {
        FrameTracker { frame }
    }

    /// Conjugates the frame by a Clifford gate: `F ↦ G F G†`.
    pub fn conjugate(&mut self, gate: &Gate, qubits: &[usize]) -> Result<()> {
        match gate {
            Gate::CX | Gate::CZ => {
                let (c, t) = (qubits[0], qubits[1]);
                let (xc, zc) = self.frame[c].bits();
                let (xt, zt) = self.frame[t].bits();
                let (nc, nt) = if *gate == Gate::CX {
                    ((xc, zc ^ zt), (xt ^ xc, zt))
                } else {
                    ((xc, zc ^ xt), (xt, zt ^ xc))
                };
                self.frame[c] = PauliFrame::from_bits(nc.0, nc.1);
                self.frame[t] = PauliFrame::from_bits(nt.0, nt.1);
                Ok(())
            }
            Gate::CP(_) => {
                // Diagonal, so it commutes with Z-type frames only.
                if qubits.iter().any(|&q| self.frame[q].flips_bit()) {
                    return Err(Error::UnsupportedGate(gate.name()));
                }
                Ok(())
            }
            Gate::Measure(_) => Err(Error::NonInvertibleGate(gate.name())),
            _ => {
                let m = gate.matrix().expect("single-qubit gate");
                let action = CliffordAction::from_matrix(&m).ok_or_else(|| Error::UnsupportedGate(gate.name()))?;
                let q = qubits[0];
                self.frame[q] = action.conjugate(self.frame[q]).0;
                Ok(())
            }
        }
    }

    /// Bits produced by measuring `F|0…0⟩`.
    pub fn bitstring(&self, qubits: &[usize]) -> String {
        qubits.iter().map(|&q| if self.frame[q].flips_bit() { '1' } else { '0' }).collect()
    }
}

/// Gate on one qubit realizing `F g F` for a non-Clifford `g`, so the frame
/// passes through unchanged. Diagonal results stay virtual `Rz` gates.
pub(crate) fn frame_compiled(gate: Gate, frame: PauliFrame) -> Gate {
    let m = gate.matrix().expect("single-qubit gate");
    let f = frame.matrix();
    let h = linalg::matmul(&f, &linalg::matmul(&m, &f));
    if linalg::is_diagonal(&h) {
        return Gate::Rz(h[1][1].arg() - h[0][0].arg());
    }
    let (t, p, l) = linalg::u3_angles(&h);
    Gate::U(t, p, l)
}

fn pauli_gate(p: PauliFrame) -> Option<Gate> {
    match p {
        PauliFrame::I => None,
        PauliFrame::X => Some(Gate::X),
        PauliFrame::Y => Some(Gate::Y),
        PauliFrame::Z => Some(Gate::Z),
    }
}

/// Pushes `frame` through `gate` placed after it. Non-Clifford single-qubit
/// gates are replaced by their frame-compiled form. Returns the gate to
/// emit.
pub(crate) fn pass_frame(tracker: &mut FrameTracker, gate: Gate, qubits: &[usize]) -> Result<Gate> {
    if gate.arity() == 1 && !gate.is_clifford() {
        return Ok(frame_compiled(gate, tracker.frame[qubits[0]]));
    }
    tracker.conjugate(&gate, qubits)?;
    Ok(gate)
}

/// Motif, uniformly random Pauli layer, time-reversed inverse, and a final
/// measurement of every qubit. Returns the circuit and its deterministic
/// outcome.
pub fn mirror_circuit<R: Rng>(
    motif: &ScheduledCircuit,
    timing: &GateTimingModel,
    rng: &mut R,
) -> Result<(ScheduledCircuit, String)> {
    if let Some(m) = motif.instructions.iter().find(|i| i.gate.class() == GateClass::Measure) {
        return Err(Error::NonInvertibleGate(m.gate.name()));
    }
    let n = motif.num_qubits;
    let t = motif.duration();
    let mid = t + timing.one_qubit_duration;
    let mut out = motif.clone();

    let layer: Vec<PauliFrame> = (0..n).map(|_| PauliFrame::ALL[rng.random_range(0..4)]).collect();
    for (q, &p) in layer.iter().enumerate() {
        if let Some(g) = pauli_gate(p) {
            out.push(g, vec![q], t, timing.duration(&g));
        }
    }

    let mut tracker = FrameTracker::new(layer);
    let mut motif_order: Vec<&Instruction> = motif.instructions.iter().collect();
    // Undo in reverse time order; ties follow the reverse of the stable
    // midpoint order.
    motif_order.sort_by(|a, b| (a.t0 + a.dt / 2.0).total_cmp(&(b.t0 + b.dt / 2.0)));
    for ins in motif_order.into_iter().rev() {
        let inv = ins.gate.inverse()?;
        let gate = pass_frame(&mut tracker, inv, &ins.qubits)?;
        let t0 = mid + (t - ins.end());
        out.push(gate, ins.qubits.clone(), t0, ins.dt);
    }
    let end = mid + t;
    for q in 0..n {
        out.push(Gate::Measure(q), vec![q], end, timing.measurement_duration);
    }
    out.sort();
    out.validate()?;
    let qubits: Vec<usize> = (0..n).collect();
    Ok((out, tracker.bitstring(&qubits)))
}
