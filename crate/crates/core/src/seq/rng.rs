//! Counter-based random streams.
//!
//! Every draw is a pure function of `(seed, stream, index)`: a ChaCha8 keystream
//! keyed by the seed, with one 64-bit word per index. Sequential reads and
//! random access agree, so sampled sets do not depend on iteration order or on
//! how trials are spread over threads.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream ids used across the crate.
pub mod streams {
    /// Primary selectors `ε_k`.
    pub const SELECTORS: u64 = 0;
    /// Independent second-stage selectors `ε'_k`.
    pub const SECONDARY: u64 = 1;
    /// Per-trial seed derivation.
    pub const TRIALS: u64 = 2;
    /// Random coefficients and sign patterns in norm estimators.
    pub const COEFFICIENTS: u64 = 3;
}

/// A sequential reader over one keyed stream.
#[derive(Debug, Clone)]
pub struct Stream {
    rng: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Positions the reader so that the next draw is the one for `index` (0-based).
    pub fn seek(&mut self, index: u64) {
        self.rng.set_word_pos(u128::from(index) * 2);
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Rademacher sign.
    pub fn next_sign(&mut self) -> f64 {
        if self.rng.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn next_gaussian(&mut self) -> f64 {
        // Box-Muller on two uniforms; the second output is discarded so each
        // call consumes a fixed number of words.
        let u1 = 1.0 - self.next_uniform();
        let u2 = self.next_uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn gen_range(&mut self, lo: u64, hi: u64) -> u64 {
        self.rng.gen_range(lo..hi)
    }
}

/// The uniform attached to `(seed, stream, index)`.
pub fn uniform_at(seed: u64, stream: u64, index: u64) -> f64 {
    let mut s = Stream::new(seed, stream);
    s.seek(index);
    s.next_uniform()
}

/// Seed for trial `trial` of a Monte Carlo run keyed by `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut s = Stream::new(seed, streams::TRIALS);
    s.seek(trial);
    s.next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_access_matches_sequential() {
        let mut s = Stream::new(42, streams::SELECTORS);
        let seq: Vec<f64> = (0..100).map(|_| s.next_uniform()).collect();
        for (i, u) in seq.iter().enumerate() {
            assert_eq!(*u, uniform_at(42, streams::SELECTORS, i as u64));
        }
    }

    #[test]
    fn streams_and_seeds_differ() {
        assert_ne!(uniform_at(1, 0, 0), uniform_at(1, 1, 0));
        assert_ne!(uniform_at(1, 0, 0), uniform_at(2, 0, 0));
        assert_ne!(trial_seed(5, 0), trial_seed(5, 1));
    }

    #[test]
    fn keystream_is_pinned() {
        // Guards against silent changes in the generator across versions.
        assert_eq!(trial_seed(0, 0), 6_128_383_831_660_698_443);
        assert_eq!(uniform_at(7, 0, 3).to_bits(), 4_604_721_123_211_421_639);
    }
}
