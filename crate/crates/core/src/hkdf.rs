//! HKDF (RFC 5869) instantiated with HMAC-BLAKE2s.

use crate::blake2s::hmac_blake2s;
use crate::error::{Error, Result};

pub const HASH_LEN: usize = 32;
pub const MAX_OUTPUT_LEN: usize = 255 * HASH_LEN;

/// Output of the extract step.
#[derive(Clone, PartialEq, Eq)]
pub struct PseudoRandomKey(pub [u8; HASH_LEN]);

impl std::fmt::Debug for PseudoRandomKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("PseudoRandomKey(..)")
    }
}

/// PRK = HMAC(salt, ikm). An empty salt means 32 zero bytes.
pub fn hkdf_extract(salt: &[u8], ikm: &[u8]) -> PseudoRandomKey {
    let salt = if salt.is_empty() {
        &[0u8; HASH_LEN][..]
    } else {
        salt
    };
    PseudoRandomKey(hmac_blake2s(salt, ikm))
}

/// T(i) = HMAC(prk, T(i-1) || info || i), i starting at 1.
pub fn hkdf_expand(prk: &PseudoRandomKey, info: &[u8], length: usize) -> Result<Vec<u8>> {
    if !(1..=MAX_OUTPUT_LEN).contains(&length) {
        return Err(Error::InvalidLength {
            expected: MAX_OUTPUT_LEN,
            actual: length,
        });
    }
    let mut okm = Vec::with_capacity(length + HASH_LEN);
    let mut previous: Vec<u8> = Vec::new();
    let mut counter = 1u8;
    while okm.len() < length {
        let mut msg = Vec::with_capacity(previous.len() + info.len() + 1);
        msg.extend_from_slice(&previous);
        msg.extend_from_slice(info);
        msg.push(counter);
        let block = hmac_blake2s(&prk.0, &msg);
        okm.extend_from_slice(&block);
        previous = block.to_vec();
        counter = counter.wrapping_add(1);
    }
    okm.truncate(length);
    Ok(okm)
}

/// Extract followed by expand.
pub fn hkdf(salt: &[u8], ikm: &[u8], info: &[u8], length: usize) -> Result<Vec<u8>> {
    hkdf_expand(&hkdf_extract(salt, ikm), info, length)
}
