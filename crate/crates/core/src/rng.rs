//! Seed discipline: one master seed, one ChaCha stream per work unit, and
//! forked sub-streams per pipeline stage.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StageRng = ChaCha8Rng;

/// Stream for a single work unit. The key selects an independent ChaCha
/// stream under the master seed, so units can be generated in any order.
pub fn unit_stream(master_seed: u64, key: u64) -> StageRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(key);
    rng
}

/// Derives an independent child stream from `parent`, advancing it.
pub fn fork(parent: &mut StageRng) -> StageRng {
    ChaCha8Rng::seed_from_u64(parent.next_u64())
}

/// FNV-1a over a byte string, used to turn structured keys into stream ids.
pub fn stream_key(parts: &[u64]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for byte in part.to_le_bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    hash
}
