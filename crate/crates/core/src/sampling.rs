//! Inverse-transform sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::params::TgiwParams;

/// Seeded generator used by [`TgiwParams::sample`]; 256-bit state.
pub type SampleRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    SampleRng::seed_from_u64(seed)
}

/// Uniform draw on the open interval `(0, 1)`.
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

impl TgiwParams {
    /// Maps a uniform `(0, 1)` variate to a draw from the distribution.
    pub fn transform_uniform(&self, phi: f64) -> f64 {
        self.quantile(phi)
            .expect("open_unit draws lie strictly inside (0, 1)")
    }

    /// Draw `n` variates, advancing the caller's generator.
    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n)
            .map(|_| self.transform_uniform(open_unit(rng)))
            .collect()
    }

    /// Draw `n` variates from a fresh generator seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        self.sample_with(n, &mut rng_from_seed(seed))
    }
}
