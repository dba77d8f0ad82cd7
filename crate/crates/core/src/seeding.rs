//! Deterministic seed derivation.
//!
//! Every RNG stream in the harness descends from a 64-bit master seed via
//! FNV-1a mixing of a domain tag plus the identifying fields, then a
//! counter-based ChaCha stream per work item. Nothing here depends on
//! process state, so reruns and parallel runs see identical randomness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// Hash a tag string and a list of u64 fields into one seed.
pub fn derive_seed(tag: &str, fields: &[u64]) -> u64 {
    let mut bytes = Vec::with_capacity(tag.len() + fields.len() * 8);
    bytes.extend_from_slice(tag.as_bytes());
    for f in fields {
        bytes.extend_from_slice(&f.to_le_bytes());
    }
    fnv1a64(&bytes)
}

/// ChaCha stream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
