//! Aaronson–Gottesman stabilizer tableau for ideal Clifford circuits.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::OnceLock;

use crate::circuit::{is_multiple_of, Gate, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2};
use crate::pauli::PauliFrame;

/// A Pauli with a ±1 sign.
pub type SignedPauli = (PauliFrame, bool);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Elementary {
    H,
    S,
}

/// Conjugation action `P ↦ U P U†` of a single-qubit Clifford `U`, stored as
/// the images of X and Z (sign `true` means −).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CliffordAction {
    pub x: SignedPauli,
    pub z: SignedPauli,
}

impl CliffordAction {
    pub const IDENTITY: CliffordAction = CliffordAction { x: (PauliFrame::X, false), z: (PauliFrame::Z, false) };

    /// Recognizes a Clifford unitary; `None` if `u` is not Clifford.
    pub fn from_matrix(u: &Mat2) -> Option<CliffordAction> {
        let image = |p: PauliFrame| -> Option<SignedPauli> {
            let m = linalg::matmul(u, &linalg::matmul(&p.matrix(), &linalg::dagger(u)));
            for f in [PauliFrame::X, PauliFrame::Y, PauliFrame::Z] {
                let fm = f.matrix();
                if linalg::distance(&m, &fm) < 1e-9 {
                    return Some((f, false));
                }
                if linalg::distance(&m, &linalg::scale(&fm, linalg::C64::new(-1.0, 0.0))) < 1e-9 {
                    return Some((f, true));
                }
            }
            None
        };
        Some(CliffordAction { x: image(PauliFrame::X)?, z: image(PauliFrame::Z)? })
    }

    /// Image of an arbitrary Pauli.
    pub fn conjugate(&self, p: PauliFrame) -> SignedPauli {
        match p {
            PauliFrame::I => (PauliFrame::I, false),
            PauliFrame::X => self.x,
            PauliFrame::Z => self.z,
            PauliFrame::Y => {
                // Y = i X Z, so U Y U† = i (sx Px)(sz Pz)
                let (px, sx) = self.x;
                let (pz, sz) = self.z;
                let (prod, phase) = pauli_product(px, pz);
                // i · i^phase must be ±1
                let total = (phase + 1) % 4;
                debug_assert!(total == 0 || total == 2);
                (prod, (total == 2) ^ sx ^ sz)
            }
        }
    }

    fn then(&self, g: Elementary) -> CliffordAction {
        let step = match g {
            Elementary::H => CliffordAction { x: (PauliFrame::Z, false), z: (PauliFrame::X, false) },
            Elementary::S => CliffordAction { x: (PauliFrame::Y, false), z: (PauliFrame::Z, false) },
        };
        let map = |(p, s): SignedPauli| {
            let (q, t) = step.conjugate(p);
            (q, s ^ t)
        };
        CliffordAction { x: map(self.x), z: map(self.z) }
    }
}

/// `a · b = i^phase · c`.
fn pauli_product(a: PauliFrame, b: PauliFrame) -> (PauliFrame, u8) {
    use PauliFrame::*;
    let phase = match (a, b) {
        (X, Y) | (Y, Z) | (Z, X) => 1,
        (Y, X) | (Z, Y) | (X, Z) => 3,
        _ => 0,
    };
    (a.mul(b), phase)
}

/// Shortest H/S word realizing each of the 24 single-qubit Clifford actions.
fn words() -> &'static HashMap<CliffordAction, Vec<Elementary>> {
    static WORDS: OnceLock<HashMap<CliffordAction, Vec<Elementary>>> = OnceLock::new();
    WORDS.get_or_init(|| {
        let mut table = HashMap::new();
        table.insert(CliffordAction::IDENTITY, Vec::new());
        let mut queue = VecDeque::from([CliffordAction::IDENTITY]);
        while let Some(a) = queue.pop_front() {
            for g in [Elementary::H, Elementary::S] {
                let b = a.then(g);
                if !table.contains_key(&b) {
                    let mut w = table[&a].clone();
                    w.push(g);
                    table.insert(b, w);
                    queue.push_back(b);
                }
            }
        }
        debug_assert_eq!(table.len(), 24);
        table
    })
}

/// Stabilizer tableau over `n` qubits: rows `0..n` are destabilizers, `n..2n`
/// stabilizers, row `2n` is scratch.
#[derive(Clone, Debug)]
pub struct Tableau {
    n: usize,
    x: Vec<Vec<bool>>,
    z: Vec<Vec<bool>>,
    r: Vec<bool>,
}

impl Tableau {
    /// The state `|0…0⟩`.
    pub fn new(n: usize) -> Self {
        let mut x = vec![vec![false; n]; 2 * n + 1];
        let mut z = vec![vec![false; n]; 2 * n + 1];
        for i in 0..n {
            x[i][i] = true;
            z[n + i][i] = true;
        }
        Tableau { n, x, z, r: vec![false; 2 * n + 1] }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn h(&mut self, a: usize) {
        for i in 0..2 * self.n {
            self.r[i] ^= self.x[i][a] & self.z[i][a];
            let t = self.x[i][a];
            self.x[i][a] = self.z[i][a];
            self.z[i][a] = t;
        }
    }

    pub fn s(&mut self, a: usize) {
        for i in 0..2 * self.n {
            self.r[i] ^= self.x[i][a] & self.z[i][a];
            self.z[i][a] ^= self.x[i][a];
        }
    }

    pub fn cx(&mut self, a: usize, b: usize) {
        for i in 0..2 * self.n {
            self.r[i] ^= self.x[i][a] & self.z[i][b] & !(self.x[i][b] ^ self.z[i][a]);
            self.x[i][b] ^= self.x[i][a];
            self.z[i][a] ^= self.z[i][b];
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        self.h(b);
        self.cx(a, b);
        self.h(b);
    }

    pub fn apply_action(&mut self, a: usize, action: &CliffordAction) -> Result<()> {
        let word = words()
            .get(action)
            .ok_or_else(|| Error::UnsupportedGate("unrecognized Clifford action".into()))?;
        for g in word {
            match g {
                Elementary::H => self.h(a),
                Elementary::S => self.s(a),
            }
        }
        Ok(())
    }

    /// Applies a gate; non-Clifford gates are rejected.
    pub fn apply(&mut self, gate: &Gate, qubits: &[usize]) -> Result<()> {
        match *gate {
            Gate::CX => self.cx(qubits[0], qubits[1]),
            Gate::CZ => self.cz(qubits[0], qubits[1]),
            Gate::CP(phi) => {
                if !is_multiple_of(phi, std::f64::consts::PI) {
                    return Err(Error::UnsupportedGate(format!("cp({phi}) is not Clifford")));
                }
                if ((phi / std::f64::consts::PI).round() as i64).rem_euclid(2) == 1 {
                    self.cz(qubits[0], qubits[1]);
                }
            }
            Gate::Measure(_) => {}
            g => {
                let m = g.matrix().expect("single-qubit gate");
                let action = CliffordAction::from_matrix(&m)
                    .ok_or_else(|| Error::UnsupportedGate(format!("{} is not Clifford", g.name())))?;
                self.apply_action(qubits[0], &action)?;
            }
        }
        Ok(())
    }

    fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
        match (x1, z1) {
            (false, false) => 0,
            (true, true) => z2 as i32 - x2 as i32,
            (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
            (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
        }
    }

    /// Row `h` ← row `h` · row `i`.
    fn rowsum(&mut self, h: usize, i: usize) {
        let mut sum = 2 * self.r[h] as i32 + 2 * self.r[i] as i32;
        for j in 0..self.n {
            sum += Self::g(self.x[i][j], self.z[i][j], self.x[h][j], self.z[h][j]);
        }
        self.r[h] = sum.rem_euclid(4) == 2;
        for j in 0..self.n {
            self.x[h][j] ^= self.x[i][j];
            self.z[h][j] ^= self.z[i][j];
        }
    }

    /// `Some(bit)` if measuring qubit `a` in Z is deterministic.
    pub fn deterministic_outcome(&mut self, a: usize) -> Option<bool> {
        let n = self.n;
        if (n..2 * n).any(|p| self.x[p][a]) {
            return None;
        }
        let scratch = 2 * n;
        self.x[scratch].iter_mut().for_each(|b| *b = false);
        self.z[scratch].iter_mut().for_each(|b| *b = false);
        self.r[scratch] = false;
        for i in 0..n {
            if self.x[i][a] {
                self.rowsum(scratch, i + n);
            }
        }
        Some(self.r[scratch])
    }

    /// Projective Z measurement; random outcomes are fixed to `forced`.
    /// Returns the outcome and whether it was random.
    pub fn measure(&mut self, a: usize, forced: bool) -> (bool, bool) {
        let n = self.n;
        let Some(p) = (n..2 * n).find(|&p| self.x[p][a]) else {
            return (self.deterministic_outcome(a).expect("deterministic"), false);
        };
        for i in 0..2 * n {
            if i != p && self.x[i][a] {
                self.rowsum(i, p);
            }
        }
        self.x[p - n] = self.x[p].clone();
        self.z[p - n] = self.z[p].clone();
        self.r[p - n] = self.r[p];
        self.x[p].iter_mut().for_each(|b| *b = false);
        self.z[p].iter_mut().for_each(|b| *b = false);
        self.z[p][a] = true;
        self.r[p] = forced;
        (forced, true)
    }
}

/// Runs the unitary part of a Clifford circuit on a tableau.
pub fn run_clifford(circuit: &ScheduledCircuit) -> Result<Tableau> {
    let mut t = Tableau::new(circuit.num_qubits);
    for ins in super::time_ordered(circuit) {
        t.apply(&ins.gate, &ins.qubits)?;
    }
    Ok(t)
}

/// Exact output distribution of a Clifford circuit by branching on random
/// measurement outcomes.
pub fn clifford_distribution(circuit: &ScheduledCircuit, max_branches: usize) -> Result<BTreeMap<String, f64>> {
    let tableau = run_clifford(circuit)?;
    let meas = circuit.measurements();
    let mut out = BTreeMap::new();
    let mut stack = vec![(tableau, 0usize, String::new(), 1.0f64)];
    let mut branches = 1usize;
    while let Some((mut t, k, bits, p)) = stack.pop() {
        if k == meas.len() {
            *out.entry(bits).or_insert(0.0) += p;
            continue;
        }
        let q = meas[k].0;
        match t.deterministic_outcome(q) {
            Some(b) => stack.push((t, k + 1, format!("{bits}{}", b as u8), p)),
            None => {
                branches *= 2;
                if branches > max_branches {
                    return Err(Error::Unsupported(format!("more than {max_branches} outcome branches")));
                }
                let mut t1 = t.clone();
                t.measure(q, false);
                t1.measure(q, true);
                stack.push((t1, k + 1, format!("{bits}1"), p / 2.0));
                stack.push((t, k + 1, format!("{bits}0"), p / 2.0));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_24_cliffords_reachable() {
        assert_eq!(words().len(), 24);
    }

    #[test]
    fn word_realizes_matrix_action() {
        // The word's product matrix must have the same action as the source.
        for g in [Gate::H, Gate::S, Gate::Sdg, Gate::SX, Gate::SXdg, Gate::X, Gate::Y, Gate::Z] {
            let m = g.matrix().unwrap();
            let action = CliffordAction::from_matrix(&m).unwrap();
            let mut u = linalg::IDENTITY;
            for e in &words()[&action] {
                let em = match e {
                    Elementary::H => Gate::H.matrix().unwrap(),
                    Elementary::S => Gate::S.matrix().unwrap(),
                };
                u = linalg::matmul(&em, &u);
            }
            assert!(linalg::phase_distance(&u, &m) < 1e-9, "{g:?}");
        }
    }

    #[test]
    fn bell_and_deterministic_outcomes() {
        let mut t = Tableau::new(2);
        t.h(0);
        t.cx(0, 1);
        assert_eq!(t.deterministic_outcome(0), None);
        let (b, random) = t.measure(0, true);
        assert!(b && random);
        assert_eq!(t.deterministic_outcome(1), Some(true));

        let mut t = Tableau::new(3);
        t.apply(&Gate::X, &[1]).unwrap();
        assert_eq!(t.deterministic_outcome(0), Some(false));
        assert_eq!(t.deterministic_outcome(1), Some(true));
        t.apply(&Gate::Y, &[2]).unwrap();
        assert_eq!(t.deterministic_outcome(2), Some(true));
    }

    #[test]
    fn y_conjugation_signs() {
        let h = CliffordAction::from_matrix(&Gate::H.matrix().unwrap()).unwrap();
        assert_eq!(h.conjugate(PauliFrame::Y), (PauliFrame::Y, true));
        let s = CliffordAction::from_matrix(&Gate::S.matrix().unwrap()).unwrap();
        assert_eq!(s.conjugate(PauliFrame::Y), (PauliFrame::X, true));
    }

    #[test]
    fn non_clifford_rejected() {
        let mut t = Tableau::new(1);
        assert!(matches!(t.apply(&Gate::T, &[0]), Err(Error::UnsupportedGate(_))));
    }
}
