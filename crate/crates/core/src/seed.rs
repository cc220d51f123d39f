//! Deterministic seed derivation.
//!
//! Every random stream in a run (per pass, per radius, per repetition) is derived
//! from one master seed, so a whole sweep is reproducible from a single integer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name of the generator behind [`rng`], reported in run headers.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha 0.3, seed_from_u64)";

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const CHAIN: u64 = 0xd1b5_4a32_d192_ed03;

/// SplitMix64 finalizer.
#[inline]
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `master` and an ordered list of tags.
pub fn derive(master: u64, tags: &[u64]) -> u64 {
    let mut state = mix(master.wrapping_add(GOLDEN));
    for &t in tags {
        state = mix(state.wrapping_mul(CHAIN).wrapping_add(mix(t.wrapping_add(GOLDEN))));
    }
    state
}

/// Seeded generator used throughout the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
