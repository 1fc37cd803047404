//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit `seed`. Independent sub-streams
//! (bootstrap replicates, simulation replicates) are derived from one seed by
//! selecting a ChaCha stream number, so stream `s` of seed `x` never depends on
//! how many other streams were consumed or on the order in which they ran.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw on the open interval (0, 1).
#[inline]
pub fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

/// `count` uniform draws on (0, 1) from stream 0 of `seed`.
pub fn uniforms(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0);
    (0..count).map(|_| open01(&mut rng)).collect()
}
