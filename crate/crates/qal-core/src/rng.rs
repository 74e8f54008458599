//! Deterministic RNG stream derivation.
//!
//! Every stochastic component draws from a ChaCha stream whose seed is a
//! mix of a master seed and a list of stream labels (replication index,
//! strategy id, site id, ...). Two streams with different labels are
//! statistically independent, and the whole experiment tree is reproducible
//! from the single master seed regardless of execution order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Stream label for per-replication lattice generation.
pub const STREAM_LATTICE: u64 = 0x4c41_5454;
/// Stream label for episode-level draws (tie coins, random strategy).
pub const STREAM_EPISODE: u64 = 0x4550_4953;
/// Stream label for per-site measurement sub-streams.
pub const STREAM_MEASURE: u64 = 0x4d45_4153;
/// Stream label for Alice's oracle-site choice.
pub const STREAM_ORACLE: u64 = 0x4f52_4143;

/// SplitMix64 finalizer; good avalanche for seed mixing.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a master seed with stream labels into a derived 64-bit seed.
pub fn derive_seed(master: u64, labels: &[u64]) -> u64 {
    let mut state = master;
    let mut acc = splitmix64(&mut state);
    for &label in labels {
        state ^= label;
        acc ^= splitmix64(&mut state);
    }
    acc
}

/// A ChaCha stream for the given master seed and labels.
pub fn stream(master: u64, labels: &[u64]) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(derive_seed(master, labels))
}
