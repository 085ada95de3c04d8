//! Poly1305 one-time authenticator (RFC 8439).
//!
//! The accumulator is held in three limbs of 44, 44 and 42 bits; products
//! are formed in `u128` and folded back using 2^130 = 5 (mod 2^130 - 5).

const M44: u64 = (1 << 44) - 1;
const M42: u64 = (1 << 42) - 1;

pub const KEY_LEN: usize = 32;
pub const TAG_LEN: usize = 16;

/// A Poly1305 key: clamped `r` and the final addend `s`.
#[derive(Clone)]
pub struct MacKey {
    r: [u8; 16],
    s: [u8; 16],
}

impl MacKey {
    /// Splits a 32-byte one-time key into `r` (clamped) and `s`.
    pub fn new(key: &[u8; KEY_LEN]) -> MacKey {
        let mut r: [u8; 16] = key[..16].try_into().unwrap();
        let s: [u8; 16] = key[16..].try_into().unwrap();
        for i in [3, 7, 11, 15] {
            r[i] &= 0x0f;
        }
        for i in [4, 8, 12] {
            r[i] &= 0xfc;
        }
        MacKey { r, s }
    }

    pub fn r(&self) -> &[u8; 16] {
        &self.r
    }

    pub fn s(&self) -> &[u8; 16] {
        &self.s
    }
}

/// A 16-byte authenticator.
#[derive(Clone, Copy, Debug)]
pub struct Tag(pub [u8; TAG_LEN]);

impl Tag {
    /// Compares without an early exit.
    pub fn ct_eq(&self, other: &Tag) -> bool {
        let diff = self
            .0
            .iter()
            .zip(other.0)
            .fold(0u8, |acc, (a, b)| acc | (a ^ b));
        std::hint::black_box(diff) == 0
    }
}

impl PartialEq for Tag {
    fn eq(&self, other: &Self) -> bool {
        self.ct_eq(other)
    }
}

impl Eq for Tag {}

fn load_le(bytes: &[u8; 16]) -> (u64, u64) {
    (
        u64::from_le_bytes(bytes[..8].try_into().unwrap()),
        u64::from_le_bytes(bytes[8..].try_into().unwrap()),
    )
}

/// Horner evaluation of the message polynomial at `r`, reduced to [0, p).
fn evaluate(r: &[u8; 16], message: &[u8]) -> [u64; 3] {
    let (t0, t1) = load_le(r);
    let r0 = t0 & M44;
    let r1 = ((t0 >> 44) | (t1 << 20)) & M44;
    let r2 = t1 >> 24;
    let s1 = u128::from(r1 * 20);
    let s2 = u128::from(r2 * 20);
    let (r0, r1, r2) = (u128::from(r0), u128::from(r1), u128::from(r2));

    let mut h = [0u64; 3];
    for chunk in message.chunks(16) {
        let mut block = [0u8; 16];
        block[..chunk.len()].copy_from_slice(chunk);
        let hibit = if chunk.len() == 16 {
            1u64 << 40
        } else {
            block[chunk.len()] = 1;
            0
        };
        let (t0, t1) = load_le(&block);
        h[0] += t0 & M44;
        h[1] += ((t0 >> 44) | (t1 << 20)) & M44;
        h[2] += (t1 >> 24) | hibit;

        let (h0, h1, h2) = (u128::from(h[0]), u128::from(h[1]), u128::from(h[2]));
        let d0 = h0 * r0 + h1 * s2 + h2 * s1;
        let mut d1 = h0 * r1 + h1 * r0 + h2 * s2;
        let mut d2 = h0 * r2 + h1 * r1 + h2 * r0;

        d1 += d0 >> 44;
        h[0] = (d0 as u64) & M44;
        d2 += d1 >> 44;
        h[1] = (d1 as u64) & M44;
        let c = (d2 >> 42) as u64;
        h[2] = (d2 as u64) & M42;
        h[0] += c * 5;
        h[1] += h[0] >> 44;
        h[0] &= M44;

        debug_assert!(
            h[0] < 1 << 45 && h[1] < 1 << 45 && h[2] < 1 << 42,
            "accumulator >= 2^131"
        );
    }

    // Full carry, then conditionally subtract p.
    for _ in 0..2 {
        h[2] += h[1] >> 44;
        h[1] &= M44;
        h[0] += (h[2] >> 42) * 5;
        h[2] &= M42;
        h[1] += h[0] >> 44;
        h[0] &= M44;
    }
    let mut g0 = h[0] + 5;
    let mut g1 = h[1] + (g0 >> 44);
    g0 &= M44;
    let g2 = h[2].wrapping_add(g1 >> 44).wrapping_sub(1 << 42);
    g1 &= M44;
    let keep_g = (g2 >> 63).wrapping_sub(1);
    h[0] = (h[0] & !keep_g) | (g0 & keep_g);
    h[1] = (h[1] & !keep_g) | (g1 & keep_g);
    h[2] = (h[2] & !keep_g) | (g2 & keep_g & M42);
    h
}

/// Adds a 128-bit little-endian addend and truncates mod 2^128.
fn finish(mut h: [u64; 3], s: &[u8; 16]) -> [u8; TAG_LEN] {
    let (t0, t1) = load_le(s);
    h[0] += t0 & M44;
    h[1] += (((t0 >> 44) | (t1 << 20)) & M44) + (h[0] >> 44);
    h[0] &= M44;
    h[2] += (t1 >> 24) + (h[1] >> 44);
    h[1] &= M44;
    h[2] &= M42;

    let lo = h[0] | (h[1] << 44);
    let hi = (h[1] >> 20) | (h[2] << 24);
    let mut out = [0u8; TAG_LEN];
    out[..8].copy_from_slice(&lo.to_le_bytes());
    out[8..].copy_from_slice(&hi.to_le_bytes());
    out
}

/// Poly1305 tag over `message`.
pub fn poly1305_tag(key: &MacKey, message: &[u8]) -> Tag {
    Tag(finish(evaluate(&key.r, message), &key.s))
}

/// The bare keyed hash: `r` used as given (no clamping) and no `s` addend.
#[doc(hidden)]
pub fn poly1305_hash_unclamped(r: &[u8; 16], message: &[u8]) -> [u8; TAG_LEN] {
    finish(evaluate(r, message), &[0; 16])
}
