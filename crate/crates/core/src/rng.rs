//! Deterministic derivation of independent RNG streams from a master seed.
//!
//! Stream `i` of seed `s` is seeded with `split(s, i)`, where `split` runs
//! the SplitMix64 finalizer over `s` and over `i + 1` scaled by the golden
//! ratio constant, then mixes the two. Results depend only on `(s, i)`, so
//! parallel execution order never changes the numbers drawn.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for stream `index` of `seed`.
pub fn split(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index.wrapping_add(1).wrapping_mul(GOLDEN))
}

pub fn stream(seed: u64, index: u64) -> SimRng {
    SimRng::seed_from_u64(split(seed, index))
}

/// Stream indices used by the simulator for one realization.
pub mod streams {
    pub const CLUSTERS: u64 = 0;
    pub const CHANNEL: u64 = 1;
    pub const OBSERVATION: u64 = 2;
}
