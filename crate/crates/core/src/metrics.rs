//! Utility functions, effective polarization and exponential decay fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{CountsDistribution, ProbabilityMap};

/// Which scalar a strategy is scored by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilityKind {
    SuccessProbability,
    OneNorm,
    MrbMeanSuccess,
}

/// Fraction of shots that returned `target`.
pub fn success_probability(counts: &CountsDistribution, target: &str) -> f64 {
    if counts.shots() == 0 {
        return 0.0;
    }
    counts.get(target) as f64 / counts.shots() as f64
}

/// `1 − ½ Σ_k |p(k) − p̂(k)|` over the union of supports.
pub fn one_norm_utility(counts: &CountsDistribution, ideal: &ProbabilityMap) -> f64 {
    one_norm_between(&counts.probabilities(), ideal)
}

pub fn one_norm_between(a: &ProbabilityMap, b: &ProbabilityMap) -> f64 {
    let mut dist = 0.0;
    for (k, &p) in a {
        dist += (p - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &q) in b {
        if !a.contains_key(k) {
            dist += q;
        }
    }
    (1.0 - dist / 2.0).clamp(0.0, 1.0)
}

/// Depth, effective polarization and its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub depth: usize,
    pub polarization: f64,
    pub uncertainty: f64,
}

fn hamming(a: &str, b: &str) -> usize {
    a.bytes().zip(b.bytes()).filter(|(x, y)| x != y).count()
}

/// Hamming-distance histogram `h_k` (as fractions) relative to `target`.
pub fn hamming_histogram(counts: &CountsDistribution, target: &str) -> Vec<f64> {
    let n = target.len();
    let mut h = vec![0.0; n + 1];
    let shots = counts.shots().max(1) as f64;
    for (bits, &c) in counts.iter() {
        h[hamming(bits, target).min(n)] += c as f64 / shots;
    }
    h
}

/// `S = 4^N/(4^N − 1) Σ_k (−½)^k h_k − 1/(4^N − 1)`.
pub fn polarization_from_histogram(h: &[f64], n: usize) -> f64 {
    let four_n = 4f64.powi(n as i32);
    let weighted: f64 = h.iter().enumerate().map(|(k, &hk)| (-0.5f64).powi(k as i32) * hk).sum();
    four_n / (four_n - 1.0) * weighted - 1.0 / (four_n - 1.0)
}

/// Effective polarization of `counts` with its multinomial standard error.
pub fn polarization(counts: &CountsDistribution, target: &str, depth: usize) -> DecayPoint {
    let n = target.len();
    let h = hamming_histogram(counts, target);
    let s = polarization_from_histogram(&h, n);
    let mean: f64 = h.iter().enumerate().map(|(k, &hk)| (-0.5f64).powi(k as i32) * hk).sum();
    let second: f64 = h.iter().enumerate().map(|(k, &hk)| 0.25f64.powi(k as i32) * hk).sum();
    let four_n = 4f64.powi(n as i32);
    let var = (second - mean * mean).max(0.0) / counts.shots().max(1) as f64;
    DecayPoint { depth, polarization: s, uncertainty: four_n / (four_n - 1.0) * var.sqrt() }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EplFit {
    pub a: f64,
    pub p: f64,
    pub epl: f64,
}

/// `EPL = (2^N − 1)/2^N · (1 − p)`.
pub fn epl_from_p(p: f64, n: usize) -> f64 {
    let two_n = 2f64.powi(n as i32);
    (two_n - 1.0) / two_n * (1.0 - p)
}

fn sse(points: &[DecayPoint], p: f64) -> (f64, f64) {
    let (mut num, mut den) = (0.0, 0.0);
    for pt in points {
        let x = p.powi(pt.depth as i32);
        num += pt.polarization * x;
        den += x * x;
    }
    let a = if den > 0.0 { num / den } else { 0.0 };
    let err = points.iter().map(|pt| (pt.polarization - a * p.powi(pt.depth as i32)).powi(2)).sum();
    (err, a)
}

/// Least-squares fit of `S ≈ A p^D`: a 10⁻³ grid over `p ∈ (0, 1]` with the
/// optimal `A` in closed form, refined by golden-section search to 10⁻⁶.
pub fn fit_epl(points: &[DecayPoint], n: usize) -> Result<EplFit> {
    if points.len() < 3 {
        return Err(Error::FitFailure(format!("need at least 3 points, got {}", points.len())));
    }
    let d_min = points.iter().map(|p| p.depth).min().expect("non-empty");
    if points.iter().all(|p| p.depth == d_min) {
        return Err(Error::FitFailure("need at least two distinct depths".into()));
    }
    let first: Vec<&DecayPoint> = points.iter().filter(|p| p.depth == d_min).collect();
    let m = first.len() as f64;
    let mean = first.iter().map(|p| p.polarization).sum::<f64>() / m;
    let se = if first.len() >= 2 {
        let var = first.iter().map(|p| (p.polarization - mean).powi(2)).sum::<f64>() / (m - 1.0);
        (var / m).sqrt()
    } else {
        first[0].uncertainty
    };
    if mean <= 2.0 * se || mean <= 0.0 {
        return Err(Error::FitFailure(format!("no signal at depth {d_min}: S = {mean:.4} ± {se:.4}")));
    }

    let mut best = (f64::INFINITY, 1.0);
    for i in 1..=1000 {
        let p = i as f64 * 1e-3;
        let (e, _) = sse(points, p);
        if e < best.0 {
            best = (e, p);
        }
    }
    let (mut lo, mut hi) = ((best.1 - 1e-3).max(1e-9), (best.1 + 1e-3).min(1.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    while hi - lo > 1e-7 {
        if sse(points, c).0 < sse(points, d).0 {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - g * (hi - lo);
        d = lo + g * (hi - lo);
    }
    let mut p = (lo + hi) / 2.0;
    if sse(points, best.1).0 < sse(points, p).0 {
        p = best.1;
    }
    let (_, a) = sse(points, p);
    if !(p > 0.0 && p <= 1.0) || a <= 0.0 {
        return Err(Error::FitFailure(format!("fit landed outside the model (A = {a}, p = {p})")));
    }
    Ok(EplFit { a, p, epl: epl_from_p(p, n) })
}

/// Mean success probability over a fixed training set.
pub fn mrb_training_utility(success_probs: &[f64]) -> f64 {
    if success_probs.is_empty() {
        return 0.0;
    }
    success_probs.iter().sum::<f64>() / success_probs.len() as f64
}
