//! Timed circuits: a flat list of instructions, each with a start time and a
//! duration in nanoseconds, on a fixed coupling graph.
//!
//! Serialized form:
//!
//! ```json
//! {"qubits": 2, "edges": [[0, 1]],
//!  "instructions": [{"gate": "h", "qubits": [0], "t0": 0.0, "dt": 50.0, "params": []}]}
//! ```
//!
//! DD pulses use their two-character labels (`"Xp"`, `"Im"`, ...) as the gate
//! name; measurements are `"measure"` with the classical bit index as their
//! single parameter.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, C64};
use crate::pauli::PulseLabel;

/// Instruction-level gate set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    SX,
    SXdg,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    /// `U(θ, φ, λ)`, a generic physical single-qubit gate.
    U(f64, f64, f64),
    /// A DD pulse.
    Pulse(PulseLabel),
    CX,
    CZ,
    /// Controlled phase `diag(1, 1, 1, e^{iφ})`.
    CP(f64),
    /// Terminal measurement into the given classical bit.
    Measure(usize),
}

/// How an instruction occupies hardware time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateClass {
    /// Frame change with zero duration.
    Virtual,
    /// Physical single-qubit gate.
    Single,
    Pulse,
    Two,
    Measure,
}

impl Gate {
    pub fn class(&self) -> GateClass {
        match self {
            Gate::Z | Gate::S | Gate::Sdg | Gate::T | Gate::Tdg | Gate::Rz(_) => GateClass::Virtual,
            Gate::X | Gate::Y | Gate::H | Gate::SX | Gate::SXdg | Gate::Rx(_) | Gate::Ry(_) | Gate::U(..) => {
                GateClass::Single
            }
            Gate::Pulse(_) => GateClass::Pulse,
            Gate::CX | Gate::CZ | Gate::CP(_) => GateClass::Two,
            Gate::Measure(_) => GateClass::Measure,
        }
    }

    pub fn arity(&self) -> usize {
        match self.class() {
            GateClass::Two => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Gate::X => "x".into(),
            Gate::Y => "y".into(),
            Gate::Z => "z".into(),
            Gate::H => "h".into(),
            Gate::S => "s".into(),
            Gate::Sdg => "sdg".into(),
            Gate::T => "t".into(),
            Gate::Tdg => "tdg".into(),
            Gate::SX => "sx".into(),
            Gate::SXdg => "sxdg".into(),
            Gate::Rx(_) => "rx".into(),
            Gate::Ry(_) => "ry".into(),
            Gate::Rz(_) => "rz".into(),
            Gate::U(..) => "u".into(),
            Gate::Pulse(l) => l.to_string(),
            Gate::CX => "cx".into(),
            Gate::CZ => "cz".into(),
            Gate::CP(_) => "cp".into(),
            Gate::Measure(_) => "measure".into(),
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::Rx(a) | Gate::Ry(a) | Gate::Rz(a) | Gate::CP(a) => vec![a],
            Gate::U(t, p, l) => vec![t, p, l],
            Gate::Measure(c) => vec![c as f64],
            _ => Vec::new(),
        }
    }

    pub fn from_parts(name: &str, params: &[f64]) -> Result<Gate> {
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("gate {name} takes {n} parameters, got {}", params.len())))
            }
        };
        let gate = match name {
            "x" => Gate::X,
            "y" => Gate::Y,
            "z" => Gate::Z,
            "h" => Gate::H,
            "s" => Gate::S,
            "sdg" => Gate::Sdg,
            "t" => Gate::T,
            "tdg" => Gate::Tdg,
            "sx" => Gate::SX,
            "sxdg" => Gate::SXdg,
            "cx" => Gate::CX,
            "cz" => Gate::CZ,
            "rx" => {
                want(1)?;
                return Ok(Gate::Rx(params[0]));
            }
            "ry" => {
                want(1)?;
                return Ok(Gate::Ry(params[0]));
            }
            "rz" => {
                want(1)?;
                return Ok(Gate::Rz(params[0]));
            }
            "cp" => {
                want(1)?;
                return Ok(Gate::CP(params[0]));
            }
            "u" => {
                want(3)?;
                return Ok(Gate::U(params[0], params[1], params[2]));
            }
            "measure" => {
                want(1)?;
                let c = params[0];
                if c < 0.0 || c.fract() != 0.0 {
                    return Err(Error::Parse(format!("invalid classical bit {c}")));
                }
                return Ok(Gate::Measure(c as usize));
            }
            other => match other.parse::<PulseLabel>() {
                Ok(label) => Gate::Pulse(label),
                Err(_) => return Err(Error::Parse(format!("unknown gate {other:?}"))),
            },
        };
        want(0)?;
        Ok(gate)
    }

    /// Ideal single-qubit matrix. `None` for two-qubit gates and measurement.
    pub fn matrix(&self) -> Option<Mat2> {
        let m = match *self {
            Gate::X => linalg::rx(PI),
            Gate::Y => linalg::ry(PI),
            Gate::Z => linalg::rz(PI),
            Gate::H => {
                let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Gate::S => linalg::rz(FRAC_PI_2),
            Gate::Sdg => linalg::rz(-FRAC_PI_2),
            Gate::T => linalg::rz(FRAC_PI_4),
            Gate::Tdg => linalg::rz(-FRAC_PI_4),
            Gate::SX => linalg::rx(FRAC_PI_2),
            Gate::SXdg => linalg::rx(-FRAC_PI_2),
            Gate::Rx(a) => linalg::rx(a),
            Gate::Ry(a) => linalg::ry(a),
            Gate::Rz(a) => linalg::rz(a),
            Gate::U(t, p, l) => linalg::u3(t, p, l),
            Gate::Pulse(label) => crate::pauli::pulse_unitary(label, 0.0),
            Gate::CX | Gate::CZ | Gate::CP(_) | Gate::Measure(_) => return None,
        };
        Some(m)
    }

    pub fn inverse(&self) -> Result<Gate> {
        Ok(match *self {
            Gate::X | Gate::Y | Gate::Z | Gate::H | Gate::CX | Gate::CZ => *self,
            Gate::S => Gate::Sdg,
            Gate::Sdg => Gate::S,
            Gate::T => Gate::Tdg,
            Gate::Tdg => Gate::T,
            Gate::SX => Gate::SXdg,
            Gate::SXdg => Gate::SX,
            Gate::Rx(a) => Gate::Rx(-a),
            Gate::Ry(a) => Gate::Ry(-a),
            Gate::Rz(a) => Gate::Rz(-a),
            Gate::CP(a) => Gate::CP(-a),
            Gate::U(t, p, l) => Gate::U(-t, -l, -p),
            Gate::Pulse(label) => Gate::Pulse(crate::pauli::PulseLabel::new(
                label.axis,
                match label.sign {
                    crate::pauli::Sign::Plus if !label.is_identity() => crate::pauli::Sign::Minus,
                    crate::pauli::Sign::Minus if !label.is_identity() => crate::pauli::Sign::Plus,
                    s => s,
                },
            )),
            Gate::Measure(_) => return Err(Error::NonInvertibleGate("measure".into())),
        })
    }

    /// Whether the gate maps Paulis to Paulis.
    pub fn is_clifford(&self) -> bool {
        match *self {
            Gate::CX | Gate::CZ | Gate::Measure(_) => true,
            Gate::CP(a) => is_multiple_of(a, PI),
            _ => self
                .matrix()
                .map(|m| crate::sim::stabilizer::CliffordAction::from_matrix(&m).is_some())
                .unwrap_or(false),
        }
    }
}

/// `a` is an integer multiple of `unit` up to rounding noise.
pub(crate) fn is_multiple_of(a: f64, unit: f64) -> bool {
    let k = (a / unit).round();
    (a - k * unit).abs() < 1e-9
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instruction {
    pub gate: Gate,
    pub qubits: Vec<usize>,
    /// Start time, ns.
    pub t0: f64,
    /// Duration, ns.
    pub dt: f64,
}

impl Instruction {
    pub fn new(gate: Gate, qubits: Vec<usize>, t0: f64, dt: f64) -> Self {
        Instruction { gate, qubits, t0, dt }
    }

    pub fn end(&self) -> f64 {
        self.t0 + self.dt
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct RawInstruction {
    gate: String,
    qubits: Vec<usize>,
    t0: f64,
    dt: f64,
    #[serde(default)]
    params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct RawCircuit {
    qubits: usize,
    edges: Vec<[usize; 2]>,
    instructions: Vec<RawInstruction>,
}

/// Timed instruction list on a coupling graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit", into = "RawCircuit")]
pub struct ScheduledCircuit {
    pub num_qubits: usize,
    pub coupling_edges: Vec<(usize, usize)>,
    pub instructions: Vec<Instruction>,
}

impl TryFrom<RawCircuit> for ScheduledCircuit {
    type Error = Error;

    fn try_from(raw: RawCircuit) -> Result<Self> {
        let instructions = raw
            .instructions
            .into_iter()
            .map(|ri| Ok(Instruction::new(Gate::from_parts(&ri.gate, &ri.params)?, ri.qubits, ri.t0, ri.dt)))
            .collect::<Result<Vec<_>>>()?;
        let circuit = ScheduledCircuit {
            num_qubits: raw.qubits,
            coupling_edges: raw.edges.into_iter().map(|[a, b]| (a, b)).collect(),
            instructions,
        };
        circuit.validate()?;
        Ok(circuit)
    }
}

impl From<ScheduledCircuit> for RawCircuit {
    fn from(c: ScheduledCircuit) -> Self {
        RawCircuit {
            qubits: c.num_qubits,
            edges: c.coupling_edges.iter().map(|&(a, b)| [a, b]).collect(),
            instructions: c
                .instructions
                .iter()
                .map(|i| RawInstruction {
                    gate: i.gate.name(),
                    qubits: i.qubits.clone(),
                    t0: i.t0,
                    dt: i.dt,
                    params: i.gate.params(),
                })
                .collect(),
        }
    }
}

impl ScheduledCircuit {
    pub fn new(num_qubits: usize, coupling_edges: Vec<(usize, usize)>) -> Self {
        ScheduledCircuit { num_qubits, coupling_edges, instructions: Vec::new() }
    }

    pub fn push(&mut self, gate: Gate, qubits: Vec<usize>, t0: f64, dt: f64) {
        self.instructions.push(Instruction::new(gate, qubits, t0, dt));
    }

    /// End time of the last instruction.
    pub fn duration(&self) -> f64 {
        self.instructions.iter().map(Instruction::end).fold(0.0, f64::max)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.coupling_edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    /// `(qubit, clbit)` for every measurement, ordered by classical bit.
    pub fn measurements(&self) -> Vec<(usize, usize)> {
        let mut m: Vec<(usize, usize)> = self
            .instructions
            .iter()
            .filter_map(|i| match i.gate {
                Gate::Measure(c) => Some((i.qubits[0], c)),
                _ => None,
            })
            .collect();
        m.sort_by_key(|&(_, c)| c);
        m
    }

    pub fn num_clbits(&self) -> usize {
        self.measurements().len()
    }

    /// Qubit pairs that share a two-qubit gate, each as `(min, max)`.
    pub fn interaction_edges(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<(usize, usize)> = self
            .instructions
            .iter()
            .filter(|i| i.gate.arity() == 2)
            .map(|i| (i.qubits[0].min(i.qubits[1]), i.qubits[0].max(i.qubits[1])))
            .collect();
        set.into_iter().collect()
    }

    pub fn is_clifford(&self) -> bool {
        self.instructions.iter().all(|i| i.gate.is_clifford())
    }

    /// Orders instructions by start time, then by first qubit.
    pub fn sort(&mut self) {
        self.instructions.sort_by(|a, b| {
            a.t0.total_cmp(&b.t0).then(a.qubits[0].cmp(&b.qubits[0])).then(a.dt.total_cmp(&b.dt))
        });
    }

    /// Stable 64-bit digest of the serialized circuit.
    pub fn content_hash(&self) -> u64 {
        let bytes = serde_json::to_vec(self).expect("circuit serializes");
        let digest = Sha256::digest(&bytes);
        u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Checks qubit ranges, arities, durations, coupling and per-qubit overlap.
    pub fn validate(&self) -> Result<()> {
        let mut per_qubit: Vec<Vec<(f64, f64)>> = vec![Vec::new(); self.num_qubits];
        let mut clbits = BTreeSet::new();
        for ins in &self.instructions {
            if ins.qubits.len() != ins.gate.arity() {
                return Err(Error::InvalidCircuit(format!("{} expects {} qubits", ins.gate.name(), ins.gate.arity())));
            }
            for &q in &ins.qubits {
                if q >= self.num_qubits {
                    return Err(Error::InvalidCircuit(format!("qubit {q} out of range")));
                }
            }
            if !(ins.t0 >= 0.0) || !ins.dt.is_finite() {
                return Err(Error::InvalidCircuit(format!("bad timing for {} at {}", ins.gate.name(), ins.t0)));
            }
            let virtual_gate = ins.gate.class() == GateClass::Virtual;
            if ins.dt < 0.0 || (ins.dt == 0.0 && !virtual_gate) {
                return Err(Error::InvalidCircuit(format!("{} needs a positive duration", ins.gate.name())));
            }
            if ins.gate.arity() == 2 {
                let (a, b) = (ins.qubits[0], ins.qubits[1]);
                if a == b {
                    return Err(Error::InvalidCircuit("two-qubit gate on a single qubit".into()));
                }
                if !self.has_edge(a, b) {
                    return Err(Error::InvalidEdge(a, b));
                }
            }
            if let Gate::Measure(c) = ins.gate {
                if !clbits.insert(c) {
                    return Err(Error::InvalidCircuit(format!("classical bit {c} written twice")));
                }
            }
            for &q in &ins.qubits {
                per_qubit[q].push((ins.t0, ins.end()));
            }
        }
        for (q, spans) in per_qubit.iter_mut().enumerate() {
            spans.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            for w in spans.windows(2) {
                let (a, b) = (w[0], w[1]);
                // b starts inside a's open interval
                if b.0 < a.1 - 1e-9 && !(a.1 == a.0 && b.0 == a.0) {
                    return Err(Error::InvalidCircuit(format!("overlapping instructions on qubit {q} at {}", b.0)));
                }
            }
        }
        for (i, &c) in clbits.iter().enumerate() {
            if i != c {
                return Err(Error::InvalidCircuit("classical bits must be 0..k".into()));
            }
        }
        Ok(())
    }
}
