//! Ciphertext expansion measurements across plaintext sizes.

use std::time::Instant;

use rand::{CryptoRng, RngCore};

use crate::error::Result;
use crate::session::{self, SessionKey};

pub const CSV_HEADER: &str = "size,cipher_len,overhead_per_kb,ns_per_byte";

/// One row of the size sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub plaintext_size: usize,
    pub ciphertext_size: usize,
    /// Extra bytes per KiB of plaintext.
    pub overhead_per_kb: f64,
    /// Mean wall time of one encrypt call.
    pub encrypt_ns: f64,
}

impl BenchRecord {
    pub fn ns_per_byte(&self) -> f64 {
        self.encrypt_ns / self.plaintext_size as f64
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.6},{:.3}",
            self.plaintext_size,
            self.ciphertext_size,
            self.overhead_per_kb,
            self.ns_per_byte()
        )
    }
}

pub fn overhead_per_kb(plaintext_size: usize, ciphertext_size: usize) -> f64 {
    (ciphertext_size - plaintext_size) as f64 * 1024.0 / plaintext_size as f64
}

/// 1 KiB, 2 KiB, ..., 1024 KiB.
pub fn default_sizes() -> Vec<usize> {
    (0..=10).map(|i| 1024 << i).collect()
}

/// Encrypts `reps` random plaintexts of `size` bytes under random nonces.
pub fn measure<R: RngCore + CryptoRng>(
    key: &SessionKey,
    size: usize,
    reps: usize,
    rng: &mut R,
) -> Result<BenchRecord> {
    assert!(size > 0 && reps > 0, "size and reps must be positive");
    let mut plaintext = vec![0u8; size];
    let mut total_ns = 0u128;
    let mut ciphertext_size = 0;
    for _ in 0..reps {
        rng.fill_bytes(&mut plaintext);
        let start = Instant::now();
        let sealed = session::encrypt(key, &plaintext, None, rng)?;
        total_ns += start.elapsed().as_nanos();
        ciphertext_size = sealed.to_bytes().len();
    }
    Ok(BenchRecord {
        plaintext_size: size,
        ciphertext_size,
        overhead_per_kb: overhead_per_kb(size, ciphertext_size),
        encrypt_ns: total_ns as f64 / reps as f64,
    })
}
