//! Counter-based random streams.
//!
//! Every consumer derives its generator from `(seed, stream)`, so results do
//! not depend on how work is split across threads.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Number of samples drawn from one stream before moving to the next.
pub const BLOCK: usize = 4096;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform on the open interval `(0, 1)`.
#[inline]
pub fn open01<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in `[lo, hi]`.
#[inline]
pub fn int_in<R: RngCore>(rng: &mut R, lo: i64, hi: i64) -> i64 {
    debug_assert!(lo <= hi);
    let span = (hi - lo) as u64 + 1;
    lo + (rng.next_u64() % span) as i64
}

/// Uniform on `(lo, hi)`.
#[inline]
pub fn uniform<R: RngCore>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * open01(rng)
}
