//! Deterministic random-stream derivation.
//!
//! Every stochastic draw in a run comes from a substream keyed by
//! (root seed, agent id, step index), so results are bit-identical no matter
//! in which order or on how many threads agents are evaluated.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; a well-mixed 64-bit permutation.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent stream for one observer at one step.
pub fn substream(seed: u64, agent: u64, step: u64) -> ChaCha8Rng {
    let key = mix(mix(mix(seed) ^ agent) ^ step);
    ChaCha8Rng::seed_from_u64(key)
}
