//! Deterministic randomness helpers.
//!
//! All sampling in this crate goes through a counter-based ChaCha8 generator
//! so that identical seeds reproduce identical results on every platform.
//! Parallel work items derive independent streams from `(master, stream)`
//! pairs, making results independent of scheduling.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Create the generator for a `(master seed, stream index)` pair.
pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

/// Uniform index in `[0, n)` via a widening multiply.
///
/// Rejection-free, so the number of generator calls per draw is fixed and
/// results cannot diverge across platforms. The modulo bias is below 2^-53
/// for every `n` used here.
pub fn index_below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    debug_assert!(n > 0);
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

/// Uniform `f64` in `[0, 1)` using the top 53 bits.
pub fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// First `k` elements of a partial Fisher-Yates shuffle of `items`.
///
/// This is sampling without replacement; the result order is the draw order.
pub fn sample_without_replacement(rng: &mut ChaCha8Rng, items: &[usize], k: usize) -> alloc::vec::Vec<usize> {
    debug_assert!(k <= items.len());
    let mut pool: alloc::vec::Vec<usize> = items.to_vec();
    for i in 0..k {
        let j = i + index_below(rng, pool.len() - i);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}
