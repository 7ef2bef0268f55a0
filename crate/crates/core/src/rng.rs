//! Reproducible random streams.
//!
//! Every sampling routine splits its work into substreams. Substream `i` of
//! seed `s` is ChaCha8 seeded from `s` with stream id `i`, so results depend
//! only on `(seed, substream count)` and not on how substreams are scheduled.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Bias;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED_5F10_3E12;

/// Substream count used when the caller does not supply one.
pub const DEFAULT_SUBSTREAMS: u32 = 16;

pub fn substream(seed: u64, index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(index));
    rng
}

/// Splits `total` units of work into `parts` near-equal chunks, larger ones first.
pub fn split_work(total: u64, parts: u32) -> Vec<u64> {
    let parts = parts.max(1) as u64;
    let base = total / parts;
    let extra = total % parts;
    (0..parts).map(|i| base + u64::from(i < extra)).collect()
}

/// One exact Bernoulli(`bias`) draw when the bias has a `u64` representation.
#[derive(Clone, Copy, Debug)]
pub enum Coin {
    Exact { num: u64, den: u64 },
    Float(f64),
}

impl Coin {
    pub fn new(bias: &Bias) -> Self {
        match bias.as_u64_ratio() {
            Some((num, den)) => Coin::Exact { num, den },
            None => Coin::Float(bias.to_f64()),
        }
    }

    #[inline]
    pub fn flip<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        match *self {
            Coin::Exact { num, den } => rng.random_range(0..den) < num,
            Coin::Float(p) => rng.random::<f64>() < p,
        }
    }
}

/// Uniform `k`-subset of `0..n` (partial Fisher-Yates), unsorted.
pub fn sample_k_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k.min(n) {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k.min(n));
    pool
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_exhaustive() {
        let parts = split_work(103, 16);
        assert_eq!(parts.iter().sum::<u64>(), 103);
        assert_eq!(parts[0], 7);
        assert_eq!(parts[15], 6);
    }

    #[test]
    fn substreams_differ_and_repeat() {
        let a: u64 = substream(1, 0).random();
        let b: u64 = substream(1, 1).random();
        let c: u64 = substream(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn k_subset_is_distinct() {
        let mut rng = substream(3, 0);
        let mut s = sample_k_subset(&mut rng, 20, 7);
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 7);
        assert!(s.iter().all(|&x| x < 20));
    }
}
