//! BLAKE2s (RFC 7693), sequential mode only, plus HMAC over BLAKE2s-256.

use crate::error::{Error, Result};

pub const BLOCK_LEN: usize = 64;
pub const MAX_DIGEST_LEN: usize = 32;
pub const MAX_KEY_LEN: usize = 32;

const IV: [u32; 8] = [
    0x6A09_E667,
    0xBB67_AE85,
    0x3C6E_F372,
    0xA54F_F53A,
    0x510E_527F,
    0x9B05_688C,
    0x1F83_D9AB,
    0x5BE0_CD19,
];

const SIGMA: [[usize; 16]; 10] = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
    [14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3],
    [11, 8, 12, 0, 5, 2, 15, 13, 10, 14, 3, 6, 7, 1, 9, 4],
    [7, 9, 3, 1, 13, 12, 11, 14, 2, 6, 5, 10, 4, 0, 15, 8],
    [9, 0, 5, 7, 2, 4, 10, 15, 14, 1, 11, 12, 6, 8, 3, 13],
    [2, 12, 6, 10, 0, 11, 8, 3, 4, 13, 7, 5, 15, 14, 1, 9],
    [12, 5, 1, 15, 14, 13, 4, 10, 0, 7, 6, 3, 9, 2, 8, 11],
    [13, 11, 7, 14, 12, 1, 3, 9, 5, 0, 15, 4, 8, 6, 2, 10],
    [6, 15, 14, 9, 11, 3, 0, 8, 12, 2, 13, 7, 1, 4, 10, 5],
    [10, 2, 8, 4, 7, 6, 1, 5, 15, 11, 9, 14, 3, 12, 13, 0],
];

/// Digest and key lengths; everything else in the parameter block is zero
/// apart from fanout = depth = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Blake2sParams {
    digest_length: u8,
    key_length: u8,
}

impl Blake2sParams {
    pub fn new(digest_length: usize, key_length: usize) -> Result<Blake2sParams> {
        if !(1..=MAX_DIGEST_LEN).contains(&digest_length) {
            return Err(Error::InvalidParam("digest length must be 1..=32"));
        }
        if key_length > MAX_KEY_LEN {
            return Err(Error::InvalidParam("key length must be 0..=32"));
        }
        Ok(Blake2sParams {
            digest_length: digest_length as u8,
            key_length: key_length as u8,
        })
    }

    /// First word of the parameter block.
    pub fn word0(&self) -> u32 {
        0x0101_0000 ^ u32::from(self.digest_length) ^ (u32::from(self.key_length) << 8)
    }
}

/// A BLAKE2s output of the requested length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digest(Vec<u8>);

impl Digest {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }
}

impl AsRef<[u8]> for Digest {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

#[inline(always)]
fn g(v: &mut [u32; 16], a: usize, b: usize, c: usize, d: usize, x: u32, y: u32) {
    v[a] = v[a].wrapping_add(v[b]).wrapping_add(x);
    v[d] = (v[d] ^ v[a]).rotate_right(16);
    v[c] = v[c].wrapping_add(v[d]);
    v[b] = (v[b] ^ v[c]).rotate_right(12);
    v[a] = v[a].wrapping_add(v[b]).wrapping_add(y);
    v[d] = (v[d] ^ v[a]).rotate_right(8);
    v[c] = v[c].wrapping_add(v[d]);
    v[b] = (v[b] ^ v[c]).rotate_right(7);
}

fn compress(h: &mut [u32; 8], block: &[u8; BLOCK_LEN], t: u64, last: bool) {
    let mut m = [0u32; 16];
    for (w, chunk) in m.iter_mut().zip(block.chunks_exact(4)) {
        *w = u32::from_le_bytes(chunk.try_into().unwrap());
    }
    let mut v = [0u32; 16];
    v[..8].copy_from_slice(h);
    v[8..].copy_from_slice(&IV);
    v[12] ^= t as u32;
    v[13] ^= (t >> 32) as u32;
    if last {
        v[14] = !v[14];
    }
    for s in &SIGMA {
        g(&mut v, 0, 4, 8, 12, m[s[0]], m[s[1]]);
        g(&mut v, 1, 5, 9, 13, m[s[2]], m[s[3]]);
        g(&mut v, 2, 6, 10, 14, m[s[4]], m[s[5]]);
        g(&mut v, 3, 7, 11, 15, m[s[6]], m[s[7]]);
        g(&mut v, 0, 5, 10, 15, m[s[8]], m[s[9]]);
        g(&mut v, 1, 6, 11, 12, m[s[10]], m[s[11]]);
        g(&mut v, 2, 7, 8, 13, m[s[12]], m[s[13]]);
        g(&mut v, 3, 4, 9, 14, m[s[14]], m[s[15]]);
    }
    for i in 0..8 {
        h[i] ^= v[i] ^ v[i + 8];
    }
}

/// BLAKE2s of `data`, keyed when `key` is non-empty.
pub fn blake2s(data: &[u8], key: &[u8], digest_length: usize) -> Result<Digest> {
    let params = Blake2sParams::new(digest_length, key.len())?;
    let mut h = IV;
    h[0] ^= params.word0();

    // Keyed mode hashes the zero-padded key as an extra first block.
    let mut input = Vec::with_capacity(data.len() + BLOCK_LEN);
    if !key.is_empty() {
        input.extend_from_slice(key);
        input.resize(BLOCK_LEN, 0);
    }
    input.extend_from_slice(data);

    let total = input.len();
    let full_before_last = if total == 0 {
        0
    } else {
        (total - 1) / BLOCK_LEN
    };
    let mut finalized = 0;
    for (i, chunk) in input.chunks(BLOCK_LEN).enumerate() {
        let last = i == full_before_last;
        let mut block = [0u8; BLOCK_LEN];
        block[..chunk.len()].copy_from_slice(chunk);
        let t = (i * BLOCK_LEN + chunk.len()) as u64;
        compress(&mut h, &block, t, last);
        finalized += usize::from(last);
    }
    if total == 0 {
        compress(&mut h, &[0; BLOCK_LEN], 0, true);
        finalized += 1;
    }
    debug_assert_eq!(finalized, 1, "last-block flag must be set exactly once");

    let mut out = Vec::with_capacity(MAX_DIGEST_LEN);
    for w in h {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out.truncate(digest_length);
    Ok(Digest(out))
}

/// Unkeyed BLAKE2s-256.
pub fn blake2s256(data: &[u8]) -> [u8; 32] {
    blake2s(data, &[], 32)
        .expect("valid parameters")
        .as_bytes()
        .try_into()
        .unwrap()
}

/// HMAC (RFC 2104) over unkeyed BLAKE2s-256 with a 64-byte block.
pub fn hmac_blake2s(key: &[u8], message: &[u8]) -> [u8; 32] {
    let mut k = [0u8; BLOCK_LEN];
    if key.len() > BLOCK_LEN {
        k[..32].copy_from_slice(&blake2s256(key));
    } else {
        k[..key.len()].copy_from_slice(key);
    }

    let mut inner = Vec::with_capacity(BLOCK_LEN + message.len());
    inner.extend(k.iter().map(|b| b ^ 0x36));
    inner.extend_from_slice(message);
    let inner_hash = blake2s256(&inner);

    let mut outer = Vec::with_capacity(BLOCK_LEN + 32);
    outer.extend(k.iter().map(|b| b ^ 0x5c));
    outer.extend_from_slice(&inner_hash);
    blake2s256(&outer)
}
