//! Random number streams.
//!
//! All randomness comes from `Xoshiro256PlusPlus` seeded through
//! `SeedableRng::seed_from_u64` (SplitMix64 state expansion). Independent
//! streams are split off a root seed with [`derive_seed`], so a run is fully
//! determined by one 64-bit seed and the stream tags below.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type Rng = Xoshiro256PlusPlus;

/// Stream tags used when splitting a root seed.
pub mod tag {
    pub const GENERATOR: u64 = 1;
    pub const GREEDY: u64 = 2;
    pub const HSA: u64 = 3;
    pub const VNS: u64 = 4;
    pub const GLS: u64 = 5;
    pub const IPI: u64 = 6;
    pub const ALLMH: u64 = 7;
    pub const CLUSTER: u64 = 8;
    pub const OFFSPRING: u64 = 9;
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the sub-stream `tag` of `root`.
#[inline]
pub fn derive_seed(root: u64, tag: u64) -> u64 {
    splitmix64(root ^ splitmix64(tag.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

#[inline]
pub fn rng_from(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

#[inline]
pub fn substream(root: u64, tag: u64) -> Rng {
    rng_from(derive_seed(root, tag))
}
