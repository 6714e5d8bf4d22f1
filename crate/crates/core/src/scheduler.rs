//! ASAP scheduling, idle-gap detection and DD insertion.

use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, GateClass, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::strategy::{ColorAssignment, DDStrategy, TimingMode};

/// Instruction durations in ns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateTimingModel {
    pub one_qubit_duration: f64,
    pub two_qubit_duration: f64,
    pub pulse_duration: f64,
    pub measurement_duration: f64,
}

impl Default for GateTimingModel {
    fn default() -> Self {
        GateTimingModel {
            one_qubit_duration: 50.0,
            two_qubit_duration: 500.0,
            pulse_duration: 50.0,
            measurement_duration: 700.0,
        }
    }
}

impl GateTimingModel {
    pub fn validate(&self) -> Result<()> {
        let all = [self.one_qubit_duration, self.two_qubit_duration, self.pulse_duration, self.measurement_duration];
        if all.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
            return Err(Error::Config("gate durations must be positive".into()));
        }
        Ok(())
    }

    pub fn duration(&self, gate: &Gate) -> f64 {
        match gate.class() {
            GateClass::Virtual => 0.0,
            GateClass::Single => self.one_qubit_duration,
            GateClass::Pulse => self.pulse_duration,
            GateClass::Two => self.two_qubit_duration,
            GateClass::Measure => self.measurement_duration,
        }
    }
}

/// Untimed operation.
#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    Gate(Gate, Vec<usize>),
    /// Synchronizes the listed qubits (all qubits if empty). Emits nothing.
    Barrier(Vec<usize>),
}

/// Ordered gate list awaiting scheduling.
#[derive(Clone, Debug, PartialEq)]
pub struct AbstractCircuit {
    pub num_qubits: usize,
    pub edges: Vec<(usize, usize)>,
    pub ops: Vec<Op>,
}

impl AbstractCircuit {
    pub fn new(num_qubits: usize, edges: Vec<(usize, usize)>) -> Self {
        AbstractCircuit { num_qubits, edges, ops: Vec::new() }
    }

    pub fn gate(&mut self, gate: Gate, qubits: &[usize]) -> &mut Self {
        self.ops.push(Op::Gate(gate, qubits.to_vec()));
        self
    }

    pub fn barrier(&mut self) -> &mut Self {
        self.ops.push(Op::Barrier(Vec::new()));
        self
    }

    /// Barrier, then a measurement of every qubit into the classical bit of
    /// the same index.
    pub fn measure_all(&mut self) -> &mut Self {
        self.ops.push(Op::Barrier(Vec::new()));
        for q in 0..self.num_qubits {
            self.ops.push(Op::Gate(Gate::Measure(q), vec![q]));
        }
        self
    }
}

/// Each gate starts when all of its qubits are free.
pub fn schedule_asap(circuit: &AbstractCircuit, timing: &GateTimingModel) -> Result<ScheduledCircuit> {
    let mut out = ScheduledCircuit::new(circuit.num_qubits, circuit.edges.clone());
    let mut ready = vec![0.0f64; circuit.num_qubits];
    for op in &circuit.ops {
        match op {
            Op::Gate(gate, qubits) => {
                for &q in qubits {
                    if q >= circuit.num_qubits {
                        return Err(Error::InvalidCircuit(format!("qubit {q} out of range")));
                    }
                }
                if gate.arity() == 2 && !out.has_edge(qubits[0], qubits[1]) {
                    return Err(Error::InvalidEdge(qubits[0], qubits[1]));
                }
                let start = qubits.iter().map(|&q| ready[q]).fold(0.0, f64::max);
                let dt = timing.duration(gate);
                for &q in qubits {
                    ready[q] = start + dt;
                }
                out.push(*gate, qubits.clone(), start, dt);
            }
            Op::Barrier(qubits) => {
                let qs: Vec<usize> =
                    if qubits.is_empty() { (0..circuit.num_qubits).collect() } else { qubits.clone() };
                let t = qs.iter().map(|&q| ready[q]).fold(0.0, f64::max);
                for q in qs {
                    ready[q] = t;
                }
            }
        }
    }
    out.validate()?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdleGap {
    pub qubit: usize,
    pub start: f64,
    pub end: f64,
}

impl IdleGap {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// Maximal idle intervals between a qubit's first and last instruction,
/// at least `min_duration` long. Zero-duration gates split gaps.
pub fn find_idle_gaps(circuit: &ScheduledCircuit, min_duration: f64) -> Vec<IdleGap> {
    let mut spans: Vec<Vec<(f64, f64)>> = vec![Vec::new(); circuit.num_qubits];
    for ins in &circuit.instructions {
        for &q in &ins.qubits {
            spans[q].push((ins.t0, ins.end()));
        }
    }
    let mut gaps = Vec::new();
    for (q, s) in spans.iter_mut().enumerate() {
        s.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut busy_until = match s.first() {
            Some(&(_, e)) => e,
            None => continue,
        };
        for &(start, end) in &s[1..] {
            if start > busy_until && start - busy_until >= min_duration {
                gaps.push(IdleGap { qubit: q, start: busy_until, end: start });
            }
            busy_until = busy_until.max(end);
        }
    }
    gaps
}

/// Pulse start times for `count` pulses of width `tp` in `gap`.
pub fn pulse_starts(gap: &IdleGap, count: usize, tp: f64, mode: TimingMode) -> Vec<f64> {
    let l = count as f64;
    let slack = gap.duration() - l * tp;
    let step = slack / l + tp;
    let offset = match mode {
        TimingMode::Symmetric => slack / (2.0 * l),
        TimingMode::AsymEarly => 0.0,
        TimingMode::AsymLate => slack / l,
    };
    (0..count).map(|k| gap.start + offset + k as f64 * step).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertionReport {
    pub gaps_filled: usize,
    pub gaps_skipped: usize,
    pub pulses: usize,
}

/// Fills every idle gap with the sequence of its qubit's color, placed
/// `repetitions` times back to back. Gaps too short for the whole train are
/// skipped and counted.
pub fn insert_dd_with(
    circuit: &ScheduledCircuit,
    strategy: &DDStrategy,
    coloring: &ColorAssignment,
    timing: &GateTimingModel,
    repetitions: usize,
) -> Result<(ScheduledCircuit, InsertionReport)> {
    if coloring.colors.len() != circuit.num_qubits {
        return Err(Error::InvalidStrategy("coloring does not cover the circuit".into()));
    }
    if let Some(&c) = coloring.colors.iter().max() {
        if c >= strategy.num_colors() {
            return Err(Error::InvalidStrategy(format!(
                "strategy has {} colors but the coloring uses {}",
                strategy.num_colors(),
                c + 1
            )));
        }
    }
    let reps = repetitions.max(1);
    let tp = timing.pulse_duration;
    let mut out = circuit.clone();
    let mut report = InsertionReport::default();
    for gap in find_idle_gaps(circuit, 0.0) {
        let color = coloring.color(gap.qubit);
        let seq = &strategy.sequences()[color];
        let count = seq.len() * reps;
        if gap.duration() + 1e-9 < count as f64 * tp {
            report.gaps_skipped += 1;
            continue;
        }
        let starts = pulse_starts(&gap, count, tp, strategy.timing()[color]);
        for (k, t) in starts.into_iter().enumerate() {
            out.push(Gate::Pulse(seq.pulses()[k % seq.len()]), vec![gap.qubit], t, tp);
        }
        report.gaps_filled += 1;
        report.pulses += count;
    }
    out.sort();
    Ok((out, report))
}

pub fn insert_dd(
    circuit: &ScheduledCircuit,
    strategy: &DDStrategy,
    coloring: &ColorAssignment,
    timing: &GateTimingModel,
) -> Result<(ScheduledCircuit, InsertionReport)> {
    insert_dd_with(circuit, strategy, coloring, timing, 1)
}
