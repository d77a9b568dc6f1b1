//! Deterministic random number generation.
//!
//! Every sampler in the crate draws from a counter-based ChaCha stream keyed
//! by a single `u64` seed. Distinct checks get disjoint streams derived from
//! their names, so adding or reordering checks never perturbs another
//! check's draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step; expands a 64-bit seed into independent key words.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a over a name; stable across platforms and releases.
fn fnv1a(name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Root generator for a seed: stream index 0.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    substream_indexed(seed, 0)
}

/// Generator on the stream with the given index. Streams with distinct
/// indices under the same seed never overlap.
pub fn substream_indexed(seed: u64, index: u64) -> ChaCha8Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Generator on the stream named by an arbitrary string, e.g. a check id.
pub fn substream(seed: u64, name: &str) -> ChaCha8Rng {
    substream_indexed(seed, fnv1a(name))
}
