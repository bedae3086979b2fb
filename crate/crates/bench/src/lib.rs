//! Shared inputs for the benchmarks.

use oscar_core::experiments::{stream_rng, STREAM_PROX_BENCH};
use rand::Rng;

/// Uniform `[-5, 5]` vector of length `n`, reproducible from `seed`.
pub fn uniform_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, STREAM_PROX_BENCH);
    (0..n).map(|_| rng.random_range(-5.0..=5.0)).collect()
}
