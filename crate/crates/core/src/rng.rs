//! Seed discipline.
//!
//! Every random stream is derived from a master seed, a purpose tag and a list of
//! integer indices by hashing them with SHA-256. Two call sites never share a
//! stream, and the same triple always reproduces the same stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Stream = ChaCha8Rng;

fn digest(master: u64, tag: &str, index: &[u64]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update((tag.len() as u64).to_le_bytes());
    h.update(tag.as_bytes());
    for i in index {
        h.update(i.to_le_bytes());
    }
    h.finalize().into()
}

/// Derive a 64-bit seed, e.g. to hand to a per-trial graph.
pub fn derive_seed(master: u64, tag: &str, index: &[u64]) -> u64 {
    let d = digest(master, tag, index);
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

/// Derive an independent ChaCha8 stream.
pub fn stream(master: u64, tag: &str, index: &[u64]) -> Stream {
    ChaCha8Rng::from_seed(digest(master, tag, index))
}
