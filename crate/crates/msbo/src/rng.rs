//! Deterministic RNG plumbing.
//!
//! Everything stochastic in this crate runs off explicit seeds. Streams let
//! independent consumers (per-particle noise, per-restart noise, environment
//! noise) draw from one seed without coupling their draw orders.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Counter-based stream: same `(seed, stream_id)` always yields the same
/// draws, regardless of what other streams consumed.
pub fn stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Stateless seed derivation (splitmix64 over a tagged input).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
