//! The decoupling group `G = {I, X, Y, Z} × {p, m}` and its phase-free frames.
//!
//! Every pulse label carries a Pauli axis and a rotation direction. Sequence
//! constraints only ever look at the axis: the frame of a sequence is the
//! product of its axes in the Klein four-group `{I, X, Y, Z}` with phases
//! discarded, and a valid DD sequence has identity frame.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::linalg::{self, Mat2};

/// Element of the phase-quotient single-qubit Pauli group.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliFrame {
    I,
    X,
    Y,
    Z,
}

impl PauliFrame {
    pub const ALL: [PauliFrame; 4] = [PauliFrame::I, PauliFrame::X, PauliFrame::Y, PauliFrame::Z];

    /// Symplectic `(x, z)` bits; `Y` is `(1, 1)`.
    pub const fn bits(self) -> (bool, bool) {
        match self {
            PauliFrame::I => (false, false),
            PauliFrame::X => (true, false),
            PauliFrame::Y => (true, true),
            PauliFrame::Z => (false, true),
        }
    }

    pub const fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliFrame::I,
            (true, false) => PauliFrame::X,
            (true, true) => PauliFrame::Y,
            (false, true) => PauliFrame::Z,
        }
    }

    /// Group product with the phase dropped.
    pub const fn mul(self, other: PauliFrame) -> PauliFrame {
        let (x1, z1) = self.bits();
        let (x2, z2) = other.bits();
        PauliFrame::from_bits(x1 ^ x2, z1 ^ z2)
    }

    /// Every element is its own inverse.
    pub const fn inverse(self) -> PauliFrame {
        self
    }

    /// Whether this frame flips a computational-basis bit.
    pub const fn flips_bit(self) -> bool {
        self.bits().0
    }

    pub fn matrix(self) -> Mat2 {
        match self {
            PauliFrame::I => linalg::IDENTITY,
            PauliFrame::X => linalg::PAULI_X,
            PauliFrame::Y => linalg::PAULI_Y,
            PauliFrame::Z => linalg::PAULI_Z,
        }
    }

    fn letter(self) -> char {
        match self {
            PauliFrame::I => 'I',
            PauliFrame::X => 'X',
            PauliFrame::Y => 'Y',
            PauliFrame::Z => 'Z',
        }
    }
}

impl fmt::Display for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Rotation direction of a pulse on the Bloch sphere.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One of the eight pulses in the decoupling group.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PulseLabel {
    pub axis: PauliFrame,
    pub sign: Sign,
}

impl PulseLabel {
    pub const IP: PulseLabel = PulseLabel::new(PauliFrame::I, Sign::Plus);
    pub const IM: PulseLabel = PulseLabel::new(PauliFrame::I, Sign::Minus);
    pub const XP: PulseLabel = PulseLabel::new(PauliFrame::X, Sign::Plus);
    pub const XM: PulseLabel = PulseLabel::new(PauliFrame::X, Sign::Minus);
    pub const YP: PulseLabel = PulseLabel::new(PauliFrame::Y, Sign::Plus);
    pub const YM: PulseLabel = PulseLabel::new(PauliFrame::Y, Sign::Minus);
    pub const ZP: PulseLabel = PulseLabel::new(PauliFrame::Z, Sign::Plus);
    pub const ZM: PulseLabel = PulseLabel::new(PauliFrame::Z, Sign::Minus);

    /// The group in canonical order `Ip Im Xp Xm Yp Ym Zp Zm`.
    pub const ALL: [PulseLabel; 8] = [
        PulseLabel::IP,
        PulseLabel::IM,
        PulseLabel::XP,
        PulseLabel::XM,
        PulseLabel::YP,
        PulseLabel::YM,
        PulseLabel::ZP,
        PulseLabel::ZM,
    ];

    pub const fn new(axis: PauliFrame, sign: Sign) -> Self {
        PulseLabel { axis, sign }
    }

    pub const fn frame(self) -> PauliFrame {
        self.axis
    }

    /// Position in [`PulseLabel::ALL`].
    pub fn index(self) -> usize {
        let base = match self.axis {
            PauliFrame::I => 0,
            PauliFrame::X => 2,
            PauliFrame::Y => 4,
            PauliFrame::Z => 6,
        };
        base + usize::from(self.sign == Sign::Minus)
    }

    pub fn is_identity(self) -> bool {
        self.axis == PauliFrame::I
    }
}

impl fmt::Display for PulseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => 'p',
            Sign::Minus => 'm',
        };
        write!(f, "{}{}", self.axis.letter(), s)
    }
}

impl FromStr for PulseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let (Some(a), Some(b), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(Error::Parse(format!("invalid pulse label {s:?}")));
        };
        let axis = match a {
            'I' => PauliFrame::I,
            'X' => PauliFrame::X,
            'Y' => PauliFrame::Y,
            'Z' => PauliFrame::Z,
            _ => return Err(Error::Parse(format!("invalid pulse axis in {s:?}"))),
        };
        let sign = match b {
            'p' => Sign::Plus,
            'm' => Sign::Minus,
            _ => return Err(Error::Parse(format!("invalid pulse sign in {s:?}"))),
        };
        Ok(PulseLabel::new(axis, sign))
    }
}

impl Serialize for PulseLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PulseLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Renders a pulse list as the concatenated label string, e.g. `"XpYpXpYp"`.
pub fn format_pulses(pulses: &[PulseLabel]) -> String {
    pulses.iter().map(ToString::to_string).collect()
}

/// Parses a concatenated label string such as `"XpYpXpYp"`.
pub fn parse_pulses(s: &str) -> Result<Vec<PulseLabel>, Error> {
    if s.len() % 2 != 0 || !s.is_ascii() {
        return Err(Error::Parse(format!("invalid pulse string {s:?}")));
    }
    (0..s.len()).step_by(2).map(|i| s[i..i + 2].parse()).collect()
}

/// Product of the frames of `pulses`; the empty product is `I`.
pub fn frame_product(pulses: &[PulseLabel]) -> PauliFrame {
    pulses.iter().fold(PauliFrame::I, |acc, p| acc.mul(p.frame()))
}

/// The unique `f` with `prefix · f · suffix = I`.
pub fn completion_frame(prefix: PauliFrame, suffix: PauliFrame) -> PauliFrame {
    // abelian and self-inverse, so f = prefix⁻¹ · suffix⁻¹ = prefix · suffix
    prefix.inverse().mul(suffix.inverse())
}

/// The two labels (plus, minus) realizing `frame`.
pub fn labels_for_frame(frame: PauliFrame) -> [PulseLabel; 2] {
    [PulseLabel::new(frame, Sign::Plus), PulseLabel::new(frame, Sign::Minus)]
}

/// Maps a group path `g_1 … g_{L−1}` to the pulse frames
/// `p_1 = g_1⁻¹`, `p_j = g_{j−1} g_j⁻¹`, `p_L = g_{L−1}`.
pub fn pulses_from_group_path(path: &[PauliFrame]) -> Result<Vec<PauliFrame>, Error> {
    let (first, last) = match (path.first(), path.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(Error::InvalidSequence("group path must be non-empty".into())),
    };
    let mut pulses = Vec::with_capacity(path.len() + 1);
    pulses.push(first.inverse());
    for w in path.windows(2) {
        pulses.push(w[0].mul(w[1].inverse()));
    }
    pulses.push(last);
    Ok(pulses)
}

/// Physical realization of a pulse: a rotation by `±(π + flip_angle_error)`
/// about the pulse axis. Identity labels are exact idles.
pub fn pulse_unitary(label: PulseLabel, flip_angle_error: f64) -> Mat2 {
    pulse_unitary_with(label, flip_angle_error, false)
}

/// Like [`pulse_unitary`], optionally realizing `Im` as a `−(2π + ε)`
/// rotation about X so that identity slots carry pulse-count effects.
pub fn pulse_unitary_with(label: PulseLabel, flip_angle_error: f64, identity_as_2pi: bool) -> Mat2 {
    let sign = label.sign.factor();
    let axis = match label.axis {
        PauliFrame::I => {
            if identity_as_2pi && label.sign == Sign::Minus {
                return linalg::rotation([1.0, 0.0, 0.0], -(2.0 * std::f64::consts::PI + flip_angle_error));
            }
            return linalg::IDENTITY;
        }
        PauliFrame::X => [1.0, 0.0, 0.0],
        PauliFrame::Y => [0.0, 1.0, 0.0],
        PauliFrame::Z => [0.0, 0.0, 1.0],
    };
    linalg::rotation(axis, sign * (std::f64::consts::PI + flip_angle_error))
}
