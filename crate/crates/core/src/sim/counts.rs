use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact outcome probabilities keyed by bitstring.
pub type ProbabilityMap = BTreeMap<String, f64>;

/// Histogram of measured bitstrings. Character `k` of a bitstring is
/// classical bit `k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CountsDistribution {
    counts: BTreeMap<String, u64>,
    shots: u64,
}

impl CountsDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: BTreeMap<String, u64>) -> Result<Self> {
        let mut width = None;
        for k in counts.keys() {
            if !k.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::Parse(format!("invalid bitstring {k:?}")));
            }
            if *width.get_or_insert(k.len()) != k.len() {
                return Err(Error::Parse("bitstrings of different lengths".into()));
            }
        }
        let shots = counts.values().sum();
        Ok(CountsDistribution { counts, shots })
    }

    pub fn add(&mut self, bits: &str, n: u64) {
        *self.counts.entry(bits.to_string()).or_insert(0) += n;
        self.shots += n;
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &u64)> {
        self.counts.iter()
    }

    /// Number of measured bits, or `None` for an empty histogram.
    pub fn width(&self) -> Option<usize> {
        self.counts.keys().next().map(String::len)
    }

    pub fn probabilities(&self) -> ProbabilityMap {
        let s = self.shots.max(1) as f64;
        self.counts.iter().map(|(k, &v)| (k.clone(), v as f64 / s)).collect()
    }
}

impl Serialize for CountsDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.counts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CountsDistribution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let counts = BTreeMap::<String, u64>::deserialize(deserializer)?;
        CountsDistribution::from_counts(counts).map_err(serde::de::Error::custom)
    }
}
