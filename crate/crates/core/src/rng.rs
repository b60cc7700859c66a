//! Counter-based random streams for reproducible Monte Carlo.
//!
//! Every trial owns a ChaCha8 stream selected by `(seed, trial)`, so results
//! do not depend on how trials are scheduled across threads. Gaussian noise
//! comes from `rand_distr::StandardNormal` (ziggurat sampler) scaled by `σ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Human-readable description of the generator pipeline, written into output metadata.
pub const SAMPLER_DESCRIPTION: &str =
    "ChaCha8Rng (rand_chacha 0.9), one stream per trial; normals via rand_distr 0.5 StandardNormal (ziggurat)";

/// Stream reserved for drawing θ placements, kept apart from the noise streams.
const THETA_STREAM: u64 = u64::MAX;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn theta_rng(seed: u64) -> ChaCha8Rng {
    trial_rng(seed, THETA_STREAM)
}

/// `n` i.i.d. `N(0, σ²)` draws.
pub fn gaussian_noise<R: Rng + ?Sized>(rng: &mut R, n: usize, sigma: f64) -> Vec<f64> {
    (0..n)
        .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}
