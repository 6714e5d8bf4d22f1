use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{DDSequence, DDStrategy, GROUP_SIZE};
use crate::error::{Error, Result};
use crate::pauli::{PauliFrame, PulseLabel};

/// One GA generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub strategies: Vec<DDStrategy>,
    pub utilities: Option<Vec<f64>>,
    pub generation: usize,
}

impl Population {
    pub fn size(&self) -> usize {
        self.strategies.len()
    }
}

/// The `L = 8` construction: each permutation of the group contributes its
/// eight cyclic shifts.
pub fn cyclic_family(perm: &[PulseLabel]) -> Vec<DDSequence> {
    let l = perm.len();
    (0..l)
        .map(|s| DDSequence::from_valid((0..l).map(|j| perm[(j + s) % l]).collect()))
        .collect()
}

/// `K` sequences in which every label occupies every site exactly `K/8`
/// times, all with identity frame product.
pub fn uniform_sequences<R: Rng>(k: usize, len: usize, rng: &mut R) -> Result<Vec<DDSequence>> {
    if k == 0 || k % GROUP_SIZE != 0 {
        return Err(Error::InvalidPopulationSize(k));
    }
    if len < 2 {
        return Err(Error::InvalidSequence(format!("length {len} < 2")));
    }
    if len == GROUP_SIZE {
        let mut out = Vec::with_capacity(k);
        for _ in 0..k / GROUP_SIZE {
            let mut perm = PulseLabel::ALL.to_vec();
            perm.shuffle(rng);
            out.extend(cyclic_family(&perm));
        }
        return Ok(out);
    }
    balanced_with_repair(k, len, rng)
}

fn balanced_with_repair<R: Rng>(k: usize, len: usize, rng: &mut R) -> Result<Vec<DDSequence>> {
    const MAX_RESHUFFLES: usize = 10_000;
    let column: Vec<PulseLabel> = PulseLabel::ALL.iter().flat_map(|&p| std::iter::repeat_n(p, k / GROUP_SIZE)).collect();
    for _ in 0..MAX_RESHUFFLES {
        // grid[site][sequence]
        let mut grid: Vec<Vec<PulseLabel>> = (0..len)
            .map(|_| {
                let mut c = column.clone();
                c.shuffle(rng);
                c
            })
            .collect();
        let frame = |grid: &Vec<Vec<PulseLabel>>, i: usize| -> PauliFrame {
            grid.iter().fold(PauliFrame::I, |f, col| f.mul(col[i].frame()))
        };
        let mut attempts = 0;
        loop {
            let bad: Vec<usize> = (0..k).filter(|&i| frame(&grid, i) != PauliFrame::I).collect();
            if bad.is_empty() {
                return Ok((0..k)
                    .map(|i| DDSequence::from_valid(grid.iter().map(|col| col[i]).collect()))
                    .collect());
            }
            if attempts >= 10 * k {
                break;
            }
            attempts += 1;
            let i = bad[rng.random_range(0..bad.len())];
            let j = bad[rng.random_range(0..bad.len())];
            if i == j {
                continue;
            }
            let s = rng.random_range(0..len);
            let before = 2;
            let (fi, fj) = (frame(&grid, i), frame(&grid, j));
            let d = grid[s][i].frame().mul(grid[s][j].frame());
            let after = usize::from(fi.mul(d) != PauliFrame::I) + usize::from(fj.mul(d) != PauliFrame::I);
            if after < before {
                let (a, b) = (grid[s][i], grid[s][j]);
                grid[s][i] = b;
                grid[s][j] = a;
            }
        }
    }
    Err(Error::InvalidSequence("balanced population repair did not converge".into()))
}

/// Site-balanced initial population of `k` strategies over `colors` colors;
/// each strategy carries one sequence on every color.
pub fn uniform_initial_population<R: Rng>(k: usize, len: usize, colors: usize, rng: &mut R) -> Result<Population> {
    let seqs = uniform_sequences(k, len, rng)?;
    let strategies = seqs
        .into_iter()
        .map(|s| DDStrategy::replicated(s, colors))
        .collect::<Result<Vec<_>>>()?;
    Ok(Population { strategies, utilities: None, generation: 0 })
}

/// `k` independent random sequences.
pub fn random_sequences<R: Rng>(k: usize, len: usize, rng: &mut R) -> Result<Vec<DDSequence>> {
    (0..k).map(|_| DDSequence::random(len, rng)).collect()
}

/// Whether every label appears exactly `K/8` times at every site.
pub fn is_site_balanced(seqs: &[DDSequence]) -> bool {
    let Some(first) = seqs.first() else { return true };
    if seqs.len() % GROUP_SIZE != 0 {
        return false;
    }
    let want = seqs.len() / GROUP_SIZE;
    (0..first.len()).all(|site| {
        let mut counts = [0usize; GROUP_SIZE];
        for s in seqs {
            counts[s.pulses()[site].index()] += 1;
        }
        counts.iter().all(|&c| c == want)
    })
}

#[cfg(test)]
pub(crate) fn all_identity(seqs: &[DDSequence]) -> bool {
    seqs.iter().all(|s| crate::pauli::frame_product(s.pulses()) == PauliFrame::I)
}
