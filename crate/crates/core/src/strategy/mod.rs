//! DD sequences, multi-color strategies, canonical baselines and counting.

pub mod coloring;
pub mod population;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::{self, completion_frame, frame_product, labels_for_frame, PauliFrame, PulseLabel};

pub use coloring::{color_graph, ColorAssignment};
pub use population::{uniform_initial_population, Population};

/// Size of the decoupling group.
pub const GROUP_SIZE: usize = 8;

/// A pulse sequence of length `L ≥ 2` whose frames multiply to the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DDSequence {
    pulses: Vec<PulseLabel>,
}

impl DDSequence {
    pub fn new(pulses: Vec<PulseLabel>) -> Result<Self> {
        if pulses.len() < 2 {
            return Err(Error::InvalidSequence(format!("length {} < 2", pulses.len())));
        }
        let f = frame_product(&pulses);
        if f != PauliFrame::I {
            return Err(Error::InvalidSequence(format!("{} has frame product {f}", pauli::format_pulses(&pulses))));
        }
        Ok(DDSequence { pulses })
    }

    /// Skips the frame check; callers guarantee the invariant.
    pub(crate) fn from_valid(pulses: Vec<PulseLabel>) -> Self {
        debug_assert!(pulses.len() >= 2 && frame_product(&pulses) == PauliFrame::I);
        DDSequence { pulses }
    }

    pub fn pulses(&self) -> &[PulseLabel] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    /// `L − 1` uniform labels followed by the completion label with a
    /// uniform sign.
    pub fn random<R: Rng>(len: usize, rng: &mut R) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidSequence(format!("length {len} < 2")));
        }
        let mut pulses: Vec<PulseLabel> =
            (0..len - 1).map(|_| PulseLabel::ALL[rng.random_range(0..GROUP_SIZE)]).collect();
        let f = completion_frame(frame_product(&pulses), PauliFrame::I);
        pulses.push(labels_for_frame(f)[rng.random_range(0..2)]);
        Ok(DDSequence::from_valid(pulses))
    }
}

impl fmt::Display for DDSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pauli::format_pulses(&self.pulses))
    }
}

impl FromStr for DDSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DDSequence::new(pauli::parse_pulses(s)?)
    }
}

impl Serialize for DDSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DDSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Where a sequence sits inside an idle gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimingMode {
    Symmetric,
    AsymEarly,
    AsymLate,
}

impl TimingMode {
    /// Staggered default: colors cycle through symmetric, early, late.
    pub fn for_color(color: usize) -> TimingMode {
        [TimingMode::Symmetric, TimingMode::AsymEarly, TimingMode::AsymLate][color % 3]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
struct ColorEntry {
    pulses: DDSequence,
    timing: TimingMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
struct RawStrategy {
    colors: Vec<ColorEntry>,
}

/// One sequence and timing mode per qubit color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawStrategy", into = "RawStrategy")]
pub struct DDStrategy {
    sequences: Vec<DDSequence>,
    timing: Vec<TimingMode>,
}

impl TryFrom<RawStrategy> for DDStrategy {
    type Error = Error;

    fn try_from(raw: RawStrategy) -> Result<Self> {
        let (s, t) = raw.colors.into_iter().map(|c| (c.pulses, c.timing)).unzip();
        DDStrategy::new(s, t)
    }
}

impl From<DDStrategy> for RawStrategy {
    fn from(s: DDStrategy) -> Self {
        RawStrategy {
            colors: s
                .sequences
                .into_iter()
                .zip(s.timing)
                .map(|(pulses, timing)| ColorEntry { pulses, timing })
                .collect(),
        }
    }
}

impl DDStrategy {
    pub fn new(sequences: Vec<DDSequence>, timing: Vec<TimingMode>) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::InvalidStrategy("no colors".into()));
        }
        if sequences.len() != timing.len() {
            return Err(Error::InvalidStrategy("one timing mode per color required".into()));
        }
        let l = sequences[0].len();
        if sequences.iter().any(|s| s.len() != l) {
            return Err(Error::InvalidStrategy("sequences differ in length".into()));
        }
        Ok(DDStrategy { sequences, timing })
    }

    /// Per-color sequences with the default staggered timing modes.
    pub fn staggered(sequences: Vec<DDSequence>) -> Result<Self> {
        let timing = (0..sequences.len()).map(TimingMode::for_color).collect();
        DDStrategy::new(sequences, timing)
    }

    /// The same sequence on every color, staggered timing.
    pub fn replicated(seq: DDSequence, colors: usize) -> Result<Self> {
        DDStrategy::staggered(vec![seq; colors])
    }

    /// The same sequence on every color, all symmetric.
    pub fn aligned(seq: DDSequence, colors: usize) -> Result<Self> {
        DDStrategy::new(vec![seq; colors], vec![TimingMode::Symmetric; colors])
    }

    pub fn sequences(&self) -> &[DDSequence] {
        &self.sequences
    }

    pub fn timing(&self) -> &[TimingMode] {
        &self.timing
    }

    pub fn num_colors(&self) -> usize {
        self.sequences.len()
    }

    pub fn sequence_len(&self) -> usize {
        self.sequences[0].len()
    }

    pub(crate) fn with_sequences(&self, sequences: Vec<DDSequence>) -> DDStrategy {
        DDStrategy { sequences, timing: self.timing.clone() }
    }
}

impl fmt::Display for DDStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sequences.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A named comparison strategy. Sequences outside the Pauli group are
/// listed but not runnable.
#[derive(Clone, Debug, PartialEq)]
pub enum Baseline {
    Strategy(DDStrategy),
    Unsupported(String),
}

pub const CPMG: &str = "XpXp";
pub const CPMG_PM: &str = "XpXm";
pub const XY4: &str = "XpYpXpYp";
pub const EDD: &str = "XpYpXpYpYpXpYpXp";

/// Canonical baselines for `colors` colors, in a fixed order:
/// `{CPMG, CPMG_pm, XY4, EDD} × {aligned, staggered}` then `UR16`.
pub fn canonical_strategies(colors: usize) -> Vec<(String, Baseline)> {
    let mut out = Vec::new();
    for (name, s) in [("CPMG", CPMG), ("CPMG_pm", CPMG_PM), ("XY4", XY4), ("EDD", EDD)] {
        let seq: DDSequence = s.parse().expect("canonical sequences are valid");
        out.push((
            format!("{name}-aligned"),
            Baseline::Strategy(DDStrategy::aligned(seq.clone(), colors).expect("valid")),
        ));
        out.push((
            format!("{name}-staggered"),
            Baseline::Strategy(DDStrategy::replicated(seq, colors).expect("valid")),
        ));
    }
    out.push(("UR16".into(), Baseline::Unsupported("UR16 needs phase pulses outside the Pauli group".into())));
    out
}

/// `|G|^((L−1)·C)`.
pub fn strategy_space_size(group_size: usize, len: usize, colors: usize) -> BigUint {
    BigUint::from(group_size).pow(((len - 1) * colors) as u32)
}

/// `C(|G| + L − 2, |G| − 1)`.
pub fn equivalence_class_count(group_size: usize, len: usize) -> BigUint {
    let n = group_size + len - 2;
    let k = group_size - 1;
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
