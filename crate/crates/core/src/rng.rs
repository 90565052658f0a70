//! Randomness abstraction.
//!
//! Every "uniformly at random" choice made by any strategy flows through
//! [`RandomSource::uniform_index`]: one call per draw, over a canonically
//! ordered option set. Monte Carlo runs back this with a seeded ChaCha
//! stream; the exact oracle substitutes [`ScriptRng`], which replays a
//! recorded choice prefix and reports the option count of the first
//! unscripted draw so the caller can branch over all outcomes.

use crate::error::{GameError, Result};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub trait RandomSource {
    /// Uniform draw from `0..m`. Implementations may assume `m >= 2`;
    /// callers go through [`RandomSource::uniform_index`].
    fn raw_index(&mut self, m: usize) -> Result<usize>;

    /// Uniform draw from `0..m`, `m >= 1`. A single-option draw is
    /// deterministic and consumes no entropy in any implementation, so
    /// sampling and enumeration stay aligned.
    fn uniform_index(&mut self, m: usize) -> Result<usize> {
        match m {
            0 => panic!("uniform_index over empty support"),
            1 => Ok(0),
            _ => self.raw_index(m),
        }
    }
}

/// Uniform pick from a non-empty slice.
pub fn uniform_pick<'a, T>(rng: &mut dyn RandomSource, items: &'a [T]) -> Result<&'a T> {
    let i = rng.uniform_index(items.len())?;
    Ok(&items[i])
}

/// Seeded Monte Carlo source. One instance drives a whole trial; both
/// players draw from the same stream in play order.
pub struct TrialRng {
    rng: ChaCha8Rng,
}

impl TrialRng {
    pub fn seeded(seed: u64) -> Self {
        TrialRng {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl RandomSource for TrialRng {
    fn raw_index(&mut self, m: usize) -> Result<usize> {
        Ok(bounded_u64(&mut self.rng, m as u64) as usize)
    }
}

/// Unbiased bounded draw (Lemire's widening-multiply rejection method).
/// Hand-rolled so results depend only on the ChaCha word stream, not on a
/// distribution crate's internals.
fn bounded_u64(rng: &mut impl RngCore, m: u64) -> u64 {
    debug_assert!(m >= 2);
    let mut x = rng.next_u64();
    let mut product = (x as u128) * (m as u128);
    let mut low = product as u64;
    if low < m {
        let threshold = m.wrapping_neg() % m;
        while low < threshold {
            x = rng.next_u64();
            product = (x as u128) * (m as u128);
            low = product as u64;
        }
    }
    (product >> 64) as u64
}

/// Replays a fixed choice script; signals `NeedBranch` once it runs out.
pub struct ScriptRng<'a> {
    script: &'a [u32],
    pos: usize,
}

impl<'a> ScriptRng<'a> {
    pub fn new(script: &'a [u32]) -> Self {
        ScriptRng { script, pos: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl RandomSource for ScriptRng<'_> {
    fn raw_index(&mut self, m: usize) -> Result<usize> {
        if self.pos < self.script.len() {
            let c = self.script[self.pos] as usize;
            self.pos += 1;
            if c >= m {
                return Err(GameError::Internal(format!(
                    "scripted choice {c} out of range for {m} options"
                )));
            }
            Ok(c)
        } else {
            Err(GameError::NeedBranch { options: m })
        }
    }
}

/// Derives the seed for trial `index` from a master seed (SplitMix64-style
/// mixing), so trials are independent of execution order and worker count.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_rng_is_replayable() {
        let mut a = TrialRng::seeded(42);
        let mut b = TrialRng::seeded(42);
        for m in [2usize, 3, 10, 1000, 7] {
            assert_eq!(a.uniform_index(m).unwrap(), b.uniform_index(m).unwrap());
        }
    }

    #[test]
    fn single_option_consumes_no_entropy() {
        let mut a = TrialRng::seeded(7);
        let mut b = TrialRng::seeded(7);
        a.uniform_index(1).unwrap();
        assert_eq!(a.uniform_index(5).unwrap(), b.uniform_index(5).unwrap());
    }

    #[test]
    fn bounded_draw_in_range_and_roughly_uniform() {
        let mut rng = TrialRng::seeded(1);
        let m = 7usize;
        let mut counts = vec![0u32; m];
        for _ in 0..70_000 {
            counts[rng.uniform_index(m).unwrap()] += 1;
        }
        for &c in &counts {
            assert!((c as i64 - 10_000).abs() < 800, "counts {counts:?}");
        }
    }

    #[test]
    fn script_rng_interrupts_at_end() {
        let script = vec![2u32, 0];
        let mut s = ScriptRng::new(&script);
        assert_eq!(s.uniform_index(5).unwrap(), 2);
        assert_eq!(s.uniform_index(3).unwrap(), 0);
        assert_eq!(
            s.uniform_index(4).unwrap_err(),
            GameError::NeedBranch { options: 4 }
        );
    }

    #[test]
    fn mixed_seeds_differ() {
        let s: Vec<u64> = (0..100).map(|i| mix_seed(12345, i)).collect();
        let mut dedup = s.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), s.len());
        assert_ne!(mix_seed(1, 0), mix_seed(2, 0));
    }
}
