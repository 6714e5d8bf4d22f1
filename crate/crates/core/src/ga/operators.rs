//! Selection, reproduction and survival operators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::pauli::{completion_frame, frame_product, labels_for_frame, PauliFrame, PulseLabel};
use crate::strategy::{DDSequence, DDStrategy, GROUP_SIZE};

/// Selection probabilities proportional to `ln(10u + 1)`. Utilities outside
/// `[0, 1]` are min-max normalized first; all-zero weights become uniform.
pub fn selection_weights(utilities: &[f64]) -> Vec<f64> {
    if utilities.is_empty() {
        return Vec::new();
    }
    let out_of_range = utilities.iter().any(|&u| !(0.0..=1.0).contains(&u));
    let normalized: Vec<f64> = if out_of_range {
        let lo = utilities.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            utilities.iter().map(|&u| (u - lo) / (hi - lo)).collect()
        } else {
            vec![1.0; utilities.len()]
        }
    } else {
        utilities.to_vec()
    };
    let w: Vec<f64> = normalized.iter().map(|&u| (10.0 * u + 1.0).ln()).collect();
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return vec![1.0 / utilities.len() as f64; utilities.len()];
    }
    w.iter().map(|x| x / total).collect()
}

/// Draws an index from a probability vector.
pub fn sample_index<R: Rng>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// `count` parent pairs drawn with replacement.
pub fn select_pairs<R: Rng>(probs: &[f64], count: usize, rng: &mut R) -> Vec<(usize, usize)> {
    (0..count).map(|_| (sample_index(probs, rng), sample_index(probs, rng))).collect()
}

fn completion_label<R: Rng>(frame: PauliFrame, rng: &mut R) -> PulseLabel {
    labels_for_frame(frame)[rng.random_range(0..2)]
}

/// One-site crossover at `site` (0-based): prefixes and suffixes swap and the
/// site itself gets the completion pulse, with a random sign.
pub fn crossover_at<R: Rng>(a: &DDSequence, b: &DDSequence, site: usize, rng: &mut R) -> (DDSequence, DDSequence) {
    let (pa, pb) = (a.pulses(), b.pulses());
    let child = |pre: &[PulseLabel], post: &[PulseLabel], rng: &mut R| {
        let c = completion_label(completion_frame(frame_product(pre), frame_product(post)), rng);
        let mut v = Vec::with_capacity(pa.len());
        v.extend_from_slice(pre);
        v.push(c);
        v.extend_from_slice(post);
        DDSequence::from_valid(v)
    };
    let c1 = child(&pa[..site], &pb[site + 1..], rng);
    let c2 = child(&pb[..site], &pa[site + 1..], rng);
    (c1, c2)
}

pub fn crossover<R: Rng>(a: &DDSequence, b: &DDSequence, rng: &mut R) -> (DDSequence, DDSequence) {
    let site = rng.random_range(0..a.len());
    crossover_at(a, b, site, rng)
}

/// Sets `site` to `label` and repairs the frame at `fix` (0-based, distinct).
pub fn mutate_at<R: Rng>(seq: &DDSequence, site: usize, label: PulseLabel, fix: usize, rng: &mut R) -> DDSequence {
    let mut v = seq.pulses().to_vec();
    v[site] = label;
    let rest = v
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != fix)
        .fold(PauliFrame::I, |f, (_, p)| f.mul(p.frame()));
    v[fix] = completion_label(rest, rng);
    DDSequence::from_valid(v)
}

/// With probability `prob`, replaces a random site by a uniform group
/// element and repairs a second, distinct site.
pub fn mutate<R: Rng>(seq: &DDSequence, prob: f64, rng: &mut R) -> DDSequence {
    if rng.random::<f64>() >= prob {
        return seq.clone();
    }
    let l = seq.len();
    let site = rng.random_range(0..l);
    let mut fix = rng.random_range(0..l - 1);
    if fix >= site {
        fix += 1;
    }
    let label = PulseLabel::ALL[rng.random_range(0..GROUP_SIZE)];
    mutate_at(seq, site, label, fix, rng)
}

/// Per-color crossover; each color's two children go to the two offspring
/// in random order.
pub fn strategy_crossover<R: Rng>(a: &DDStrategy, b: &DDStrategy, rng: &mut R) -> (DDStrategy, DDStrategy) {
    let mut s1 = Vec::with_capacity(a.num_colors());
    let mut s2 = Vec::with_capacity(a.num_colors());
    for (x, y) in a.sequences().iter().zip(b.sequences()) {
        let (c1, c2) = crossover(x, y, rng);
        if rng.random::<bool>() {
            s1.push(c1);
            s2.push(c2);
        } else {
            s1.push(c2);
            s2.push(c1);
        }
    }
    (a.with_sequences(s1), a.with_sequences(s2))
}

/// Mutates every color independently with probability `prob`.
pub fn mutate_strategy<R: Rng>(s: &DDStrategy, prob: f64, rng: &mut R) -> DDStrategy {
    s.with_sequences(s.sequences().iter().map(|q| mutate(q, prob, rng)).collect())
}

/// Indices of the `n` highest utilities; ties keep the lower index.
pub fn top_indices(utilities: &[f64], n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..utilities.len()).collect();
    idx.sort_by(|&i, &j| utilities[j].total_cmp(&utilities[i]).then(i.cmp(&j)));
    idx.truncate(n);
    idx
}

/// Survivors: the top `K/4` parents followed by the top `3K/4` offspring.
/// Returns `(strategy, utility)` pairs, parents first.
pub fn next_generation(
    parents: &[DDStrategy],
    parent_utilities: &[f64],
    offspring: &[DDStrategy],
    offspring_utilities: &[f64],
) -> Vec<(DDStrategy, f64)> {
    let k = parents.len();
    let mut out = Vec::with_capacity(k);
    for i in top_indices(parent_utilities, k / 4) {
        out.push((parents[i].clone(), parent_utilities[i]));
    }
    for i in top_indices(offspring_utilities, k - k / 4) {
        out.push((offspring[i].clone(), offspring_utilities[i]));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadStatistic {
    Range,
    Stddev,
}

impl SpreadStatistic {
    pub fn compute(self, xs: &[f64]) -> f64 {
        if xs.is_empty() {
            return 0.0;
        }
        match self {
            SpreadStatistic::Range => {
                let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            }
            SpreadStatistic::Stddev => {
                let m = xs.iter().sum::<f64>() / xs.len() as f64;
                (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
            }
        }
    }
}

/// `Direct` raises the mutation rate when the population looks far from
/// equilibrium; `Inverted` lowers it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationDirection {
    Direct,
    Inverted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutationSchedule {
    pub step: f64,
    pub low: f64,
    pub high: f64,
    pub statistic: SpreadStatistic,
    pub far_threshold: f64,
    pub close_threshold: f64,
    pub direction: MutationDirection,
}

impl Default for MutationSchedule {
    fn default() -> Self {
        MutationSchedule {
            step: 0.1,
            low: 0.1,
            high: 0.9,
            statistic: SpreadStatistic::Range,
            far_threshold: 0.15,
            close_threshold: 0.03,
            direction: MutationDirection::Direct,
        }
    }
}

pub fn update_mutation_prob(current: f64, statistic: f64, s: &MutationSchedule) -> f64 {
    let sign = match s.direction {
        MutationDirection::Direct => 1.0,
        MutationDirection::Inverted => -1.0,
    };
    let next = if statistic > s.far_threshold {
        current + sign * s.step
    } else if statistic < s.close_threshold {
        current - sign * s.step
    } else {
        current
    };
    // keep 0.1-steps free of drift like 0.7999999
    ((next * 1e9).round() / 1e9).clamp(s.low, s.high)
}
