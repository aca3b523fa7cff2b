//! Seeded random streams.
//!
//! Every random draw comes from ChaCha8 seeded with `seed_from_u64(seed)` and
//! switched to a purpose-specific stream, so shifts, coefficients and
//! sampling perturbations drawn from one experiment seed are independent of
//! each other and of the order in which they are requested. Uniform draws use
//! the canonical `[0, 1)` mapping scaled to the target interval.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Shifts = 1,
    Coefficients = 2,
    Sampling = 3,
    Probe = 4,
}

pub fn stream(seed: u64, which: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}

/// Independent sub-stream `k` of a purpose stream (used for redraws).
pub fn substream(seed: u64, which: Stream, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((k + 1) << 8) | which as u64);
    rng
}

#[inline]
pub fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.gen();
    lo + (hi - lo) * u
}
