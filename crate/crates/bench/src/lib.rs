//! Deterministic inputs shared by the benchmarks.

use ejafa_core::session::{self, SessionKey};
use ejafa_core::x25519::{generate_keypair, Keypair};
use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};

/// Message sizes swept by the throughput benches.
pub const SIZES: [usize; 5] = [64, 1024, 16 * 1024, 256 * 1024, 1024 * 1024];

pub fn rng() -> StdRng {
    StdRng::seed_from_u64(0xe7afa)
}

pub fn random_vec(rng: &mut StdRng, len: usize) -> Vec<u8> {
    let mut v = vec![0u8; len];
    rng.fill_bytes(&mut v);
    v
}

pub fn keypair(rng: &mut StdRng) -> Keypair {
    let mut entropy = [0u8; 32];
    rng.fill_bytes(&mut entropy);
    generate_keypair(&entropy)
}

pub fn session_key(rng: &mut StdRng) -> SessionKey {
    let a = keypair(rng);
    let b = keypair(rng);
    session::establish(&a, &b.public).expect("random keys are not low order")
}
