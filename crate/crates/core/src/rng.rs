//! Seeded randomness.
//!
//! Every random draw in the crate comes from [`stream`]: a ChaCha8 generator
//! keyed by the run's 64-bit seed, with a separate ChaCha stream id per
//! consumer. Streams never overlap, so adding a consumer does not perturb
//! the draws of another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed used when none is given on the command line.
pub const DEFAULT_SEED: u64 = 0x5eed_2021;

pub fn stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Derives the `index`-th child seed of `seed` (SplitMix64 finalizer).
pub fn child_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
