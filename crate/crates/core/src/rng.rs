//! Seeded randomness.
//!
//! All randomness comes from ChaCha8 keyed by a 64-bit seed. Independent
//! work items (one row of a generator, one retry of an algorithm) draw from
//! distinct keystreams selected with [`stream`], so results never depend on
//! scheduling or thread count.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng as Rng;

/// The generator for `seed` positioned on keystream `stream`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The generator for `seed` on keystream 0.
pub fn seeded(seed: u64) -> Rng {
    stream(seed, 0)
}

/// Uniform sample of `k` distinct values from `0..n`, in draw order.
pub fn sample_distinct(rng: &mut Rng, n: usize, k: usize) -> Vec<u32> {
    rand::seq::index::sample(rng, n, k.min(n))
        .into_iter()
        .map(|v| v as u32)
        .collect()
}
