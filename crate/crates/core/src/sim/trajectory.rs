//! Statevector trajectories under static random fields, always-on ZZ and
//! optional Markovian dephasing.
//!
//! Gates act instantaneously at the midpoint of their time slot while the
//! fields keep acting for the whole slot. Single-qubit evolution is kept as a
//! pending 2×2 matrix per qubit and ZZ as an accumulated phase per edge; both
//! are pushed into the state only when a qubit meets a non-diagonal gate, a
//! two-qubit gate, or its measurement. Within one such stretch the ZZ phase
//! and the field rotation are treated as commuting, which is exact for purely
//! longitudinal fields.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::noise::NoiseModel;
use super::time_ordered;
use crate::circuit::{Gate, GateClass, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, C64};
use crate::pauli::pulse_unitary_with;

const FIELD_STREAM: u64 = 0x6669_656c_64;
const MARKOV_STREAM: u64 = 0x6d61_726b;

#[derive(Clone, Debug)]
enum Kind {
    TwoEnd(usize, usize),
    Measure(usize),
    TwoStart(usize, usize),
    One { q: usize, m: Mat2, diagonal: bool },
    Two { a: usize, b: usize, gate: Gate },
}

impl Kind {
    // Tie order at equal times: release suspended couplings first, then
    // measurements, then new suspensions, then gate actions.
    fn rank(&self) -> u8 {
        match self {
            Kind::TwoEnd(..) => 0,
            Kind::Measure(_) => 1,
            Kind::TwoStart(..) => 2,
            Kind::One { .. } | Kind::Two { .. } => 3,
        }
    }
}

#[derive(Clone, Debug)]
struct Event {
    t: f64,
    kind: Kind,
}

/// Circuit and noise compiled into a time-ordered event list, shared by all
/// trajectories.
#[derive(Clone, Debug)]
pub struct Prepared {
    n: usize,
    events: Vec<Event>,
    edges: Vec<(usize, usize, f64)>,
    incident: Vec<Vec<usize>>,
    measured: Vec<usize>,
    sigma: Vec<[f64; 3]>,
    markov: Option<Vec<f64>>,
}

impl Prepared {
    pub fn new(circuit: &ScheduledCircuit, noise: &NoiseModel) -> Result<Self> {
        let n = circuit.num_qubits;
        if noise.num_qubits() < n {
            return Err(Error::Config(format!(
                "noise model covers {} qubits but the circuit has {n}",
                noise.num_qubits()
            )));
        }
        let mut events = Vec::new();
        let mut measured = vec![false; n];
        for ins in time_ordered(circuit) {
            for &q in &ins.qubits {
                if measured[q] {
                    return Err(Error::Unsupported(format!("instruction on qubit {q} after its measurement")));
                }
            }
            let mid = ins.t0 + ins.dt / 2.0;
            match ins.gate.class() {
                GateClass::Measure => {
                    measured[ins.qubits[0]] = true;
                    events.push(Event { t: ins.t0, kind: Kind::Measure(ins.qubits[0]) });
                }
                GateClass::Two => {
                    let (a, b) = (ins.qubits[0], ins.qubits[1]);
                    events.push(Event { t: ins.t0, kind: Kind::TwoStart(a, b) });
                    events.push(Event { t: mid, kind: Kind::Two { a, b, gate: ins.gate } });
                    events.push(Event { t: ins.end(), kind: Kind::TwoEnd(a, b) });
                }
                class => {
                    let m = match (class, ins.gate) {
                        (GateClass::Pulse, Gate::Pulse(label)) => {
                            pulse_unitary_with(label, noise.flip_angle_error, noise.identity_as_2pi_pulse)
                        }
                        (GateClass::Single, g) => {
                            linalg::over_rotate(&g.matrix().expect("1q gate"), noise.flip_angle_error)
                        }
                        (_, g) => g.matrix().expect("1q gate"),
                    };
                    let diagonal = linalg::is_diagonal(&m);
                    events.push(Event { t: mid, kind: Kind::One { q: ins.qubits[0], m, diagonal } });
                }
            }
        }
        // stable: instructions already come in midpoint order
        events.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.kind.rank().cmp(&b.kind.rank())));

        let mut edges = Vec::new();
        let mut incident = vec![Vec::new(); n];
        for c in &noise.zz_coupling {
            let (a, b) = c.edge;
            if c.j == 0.0 || a >= n || b >= n {
                continue;
            }
            incident[a].push(edges.len());
            incident[b].push(edges.len());
            edges.push((a, b, c.j));
        }
        Ok(Prepared {
            n,
            events,
            edges,
            incident,
            measured: circuit.measurements().into_iter().map(|(q, _)| q).collect(),
            sigma: noise.quasi_static_sigma[..n].to_vec(),
            markov: noise
                .markovian_dephasing_rate
                .as_ref()
                .map(|r| r[..n].to_vec())
                .filter(|r| r.iter().any(|&x| x > 0.0)),
        })
    }

    pub fn measured_qubits(&self) -> &[usize] {
        &self.measured
    }

    /// Static fields for trajectory `r`. The draws depend only on the seed,
    /// `r` and the qubit count, never on circuit content.
    pub fn draw_fields(&self, seed: u64, r: u64) -> Vec<[f64; 3]> {
        let mut rng = crate::seed::rng(seed, &[FIELD_STREAM, r]);
        self.sigma
            .iter()
            .map(|s| {
                let mut h = [0.0; 3];
                for (k, hk) in h.iter_mut().enumerate() {
                    let z: f64 = rng.sample(StandardNormal);
                    *hk = s[k] * z;
                }
                h
            })
            .collect()
    }

    /// Outcome probabilities over the measured qubits for one trajectory;
    /// index bit `k` is classical bit `k`.
    pub fn run(&self, fields: &[[f64; 3]], seed: u64, r: u64) -> Vec<f64> {
        let markov_rng = self.markov.as_ref().map(|_| crate::seed::rng(seed, &[MARKOV_STREAM, r]));
        let mut t = Trajectory::new(self, fields, markov_rng);
        for ev in &self.events {
            t.step(ev);
        }
        let mut probs = vec![0.0; 1 << self.measured.len()];
        for (i, a) in t.psi.iter().enumerate() {
            let mut key = 0;
            for (k, &q) in self.measured.iter().enumerate() {
                key |= ((i >> q) & 1) << k;
            }
            probs[key] += a.norm_sqr();
        }
        probs
    }

    /// Full state of one trajectory evolved to time `end`, for oracle
    /// comparisons.
    pub fn final_state(&self, fields: &[[f64; 3]], end: f64, seed: u64) -> Vec<C64> {
        let markov_rng = self.markov.as_ref().map(|_| crate::seed::rng(seed, &[MARKOV_STREAM, 0]));
        let mut t = Trajectory::new(self, fields, markov_rng);
        for ev in &self.events {
            t.step(ev);
        }
        for q in 0..self.n {
            t.flush(q, None, end);
        }
        t.psi
    }
}

struct Qubit {
    m: Mat2,
    last: f64,
    axis: [f64; 3],
    strength: f64,
    measured: bool,
    suspended: u32,
}

struct Trajectory<'a> {
    p: &'a Prepared,
    psi: Vec<C64>,
    qubits: Vec<Qubit>,
    phase: Vec<f64>,
    edge_last: Vec<f64>,
    markov_rng: Option<ChaCha8Rng>,
}

impl<'a> Trajectory<'a> {
    fn new(p: &'a Prepared, fields: &[[f64; 3]], markov_rng: Option<ChaCha8Rng>) -> Self {
        let mut psi = vec![C64::new(0.0, 0.0); 1 << p.n];
        psi[0] = C64::new(1.0, 0.0);
        let qubits = fields
            .iter()
            .map(|h| {
                let strength = (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]).sqrt();
                let axis = if strength > 0.0 { [h[0] / strength, h[1] / strength, h[2] / strength] } else { [0.0, 0.0, 1.0] };
                Qubit { m: linalg::IDENTITY, last: 0.0, axis, strength, measured: false, suspended: 0 }
            })
            .collect();
        Trajectory {
            p,
            psi,
            qubits,
            phase: vec![0.0; p.edges.len()],
            edge_last: vec![0.0; p.edges.len()],
            markov_rng,
        }
    }

    fn step(&mut self, ev: &Event) {
        let t = ev.t;
        match &ev.kind {
            Kind::One { q, m, diagonal } => {
                if *diagonal {
                    self.advance_qubit(*q, t);
                    self.qubits[*q].m = linalg::matmul(m, &self.qubits[*q].m);
                } else {
                    self.flush(*q, Some(m), t);
                }
            }
            Kind::TwoStart(a, b) => {
                for q in [*a, *b] {
                    self.advance_edges(q, t);
                    self.qubits[q].suspended += 1;
                }
            }
            Kind::TwoEnd(a, b) => {
                for q in [*a, *b] {
                    self.advance_edges(q, t);
                    self.qubits[q].suspended -= 1;
                }
            }
            Kind::Two { a, b, gate } => {
                self.flush(*a, None, t);
                self.flush(*b, None, t);
                apply_2q(&mut self.psi, *gate, *a, *b);
            }
            Kind::Measure(q) => {
                self.flush(*q, None, t);
                self.qubits[*q].measured = true;
            }
        }
    }

    fn advance_qubit(&mut self, q: usize, t: f64) {
        let rate = self.p.markov.as_ref().map_or(0.0, |r| r[q]);
        let qb = &mut self.qubits[q];
        if qb.measured {
            return;
        }
        let dt = t - qb.last;
        if dt <= 0.0 {
            return;
        }
        if qb.strength > 0.0 {
            qb.m = linalg::matmul(&linalg::rotation(qb.axis, qb.strength * dt), &qb.m);
        }
        if rate > 0.0 {
            let flip = (1.0 - (-rate * dt).exp()) / 2.0;
            let rng = self.markov_rng.as_mut().expect("markov stream");
            if rng.random::<f64>() < flip {
                qb.m = linalg::matmul(&linalg::PAULI_Z, &qb.m);
            }
        }
        qb.last = t;
    }

    fn edge_active(&self, e: usize) -> bool {
        let (a, b, _) = self.p.edges[e];
        let (qa, qb) = (&self.qubits[a], &self.qubits[b]);
        !qa.measured && !qb.measured && qa.suspended == 0 && qb.suspended == 0
    }

    fn advance_edges(&mut self, q: usize, t: f64) {
        for &e in &self.p.incident[q] {
            if self.edge_active(e) {
                self.phase[e] += self.p.edges[e].2 * (t - self.edge_last[e]);
            }
            self.edge_last[e] = t;
        }
    }

    /// Pushes pending evolution of `q` (and its ZZ phases) into the state,
    /// followed by `gate` if given.
    fn flush(&mut self, q: usize, gate: Option<&Mat2>, t: f64) {
        self.advance_qubit(q, t);
        self.advance_edges(q, t);
        let mut nbrs = Vec::new();
        for &e in &self.p.incident[q] {
            if self.phase[e] != 0.0 {
                let (a, b, _) = self.p.edges[e];
                nbrs.push((if a == q { b } else { a }, self.phase[e]));
                self.phase[e] = 0.0;
            }
        }
        let pending = std::mem::replace(&mut self.qubits[q].m, linalg::IDENTITY);
        let u = match gate {
            Some(g) => linalg::matmul(g, &pending),
            None => pending,
        };
        if nbrs.is_empty() && u == linalg::IDENTITY {
            return;
        }
        apply_1q(&mut self.psi, q, &u, &nbrs);
    }
}

/// Applies `u` on qubit `q` after the ZZ phases `exp(−i φ Z_q Z_r / 4)`.
fn apply_1q(psi: &mut [C64], q: usize, u: &Mat2, nbrs: &[(usize, f64)]) {
    let bit = 1usize << q;
    let len = psi.len();
    if nbrs.is_empty() {
        for base in (0..len).step_by(2 * bit) {
            for i0 in base..base + bit {
                let i1 = i0 | bit;
                let (a0, a1) = (psi[i0], psi[i1]);
                psi[i0] = u[0][0] * a0 + u[0][1] * a1;
                psi[i1] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        return;
    }
    let table: Vec<C64> = (0..1usize << nbrs.len())
        .map(|nb| {
            let theta: f64 = nbrs
                .iter()
                .enumerate()
                .map(|(k, &(_, phi))| if (nb >> k) & 1 == 1 { -phi } else { phi })
                .sum::<f64>()
                / 4.0;
            C64::from_polar(1.0, -theta)
        })
        .collect();
    for base in (0..len).step_by(2 * bit) {
        for i0 in base..base + bit {
            let i1 = i0 | bit;
            let mut nb = 0;
            for (k, &(r, _)) in nbrs.iter().enumerate() {
                nb |= ((i0 >> r) & 1) << k;
            }
            let p = table[nb];
            let a0 = psi[i0] * p;
            let a1 = psi[i1] * p.conj();
            psi[i0] = u[0][0] * a0 + u[0][1] * a1;
            psi[i1] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
}

pub(crate) fn apply_2q(psi: &mut [C64], gate: Gate, a: usize, b: usize) {
    let (ba, bb) = (1usize << a, 1usize << b);
    match gate {
        Gate::CX => {
            for i in 0..psi.len() {
                if i & ba != 0 && i & bb == 0 {
                    psi.swap(i, i | bb);
                }
            }
        }
        Gate::CZ => {
            for (i, x) in psi.iter_mut().enumerate() {
                if i & ba != 0 && i & bb != 0 {
                    *x = -*x;
                }
            }
        }
        Gate::CP(phi) => {
            let (c, s) = linalg::exact_cos_sin(phi);
            let ph = C64::new(c, s);
            for (i, x) in psi.iter_mut().enumerate() {
                if i & ba != 0 && i & bb != 0 {
                    *x *= ph;
                }
            }
        }
        other => unreachable!("{} is not a two-qubit gate", other.name()),
    }
}
