//! Seeding.
//!
//! Every random decision in the crate is driven by a [`ChaCha8Rng`] seeded
//! from a 64-bit value. Child seeds are derived from a parent seed and an
//! index with [`mix`], so the stream used by (for instance) tree 17 of an
//! ensemble depends only on the ensemble seed and the number 17, never on
//! the order in which work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type Rng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer (Stafford variant 13).
#[inline]
pub fn avalanche(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child `index` from `parent`.
///
/// `mix(s, i) = avalanche(s + (i + 1) * 0x9E3779B97F4A7C15)` (wrapping).
#[inline]
pub fn mix(parent: u64, index: u64) -> u64 {
    avalanche(parent.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Seeded generator.
pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
