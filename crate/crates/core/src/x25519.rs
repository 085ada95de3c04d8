//! Curve25519 Diffie-Hellman (RFC 7748).
//!
//! Field elements live in GF(2^255 - 19) as five 51-bit limbs. The scalar
//! multiplication is a Montgomery ladder over u-coordinates only, driven by
//! a masked conditional swap so that the sequence of field operations does
//! not depend on secret bits.

use std::fmt;

use crate::error::{Error, Result};

const MASK51: u64 = (1 << 51) - 1;

/// (A - 2) / 4 for the curve v^2 = u^3 + 486662 u^2 + u.
const A24: u64 = 121_665;

/// u-coordinate of the base point, u = 9.
pub const BASEPOINT: PublicKey = PublicKey({
    let mut u = [0u8; 32];
    u[0] = 9;
    u
});

/// An element of GF(2^255 - 19).
///
/// Limbs are kept below 2^52 between operations; `to_bytes` performs the
/// final reduction into [0, p).
#[derive(Clone, Copy, Debug)]
pub struct FieldElement([u64; 5]);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement([0; 5]);
    pub const ONE: FieldElement = FieldElement([1, 0, 0, 0, 0]);

    /// Decodes 32 little-endian bytes, ignoring bit 255.
    pub fn from_bytes(bytes: &[u8; 32]) -> FieldElement {
        let load = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        FieldElement([
            load(0) & MASK51,
            (load(6) >> 3) & MASK51,
            (load(12) >> 6) & MASK51,
            (load(19) >> 1) & MASK51,
            (load(24) >> 12) & MASK51,
        ])
    }

    /// Encodes the canonical representative in [0, p) as 32 little-endian bytes.
    pub fn to_bytes(&self) -> [u8; 32] {
        let mut h = self.carry().carry().0;

        // h < 2^255 + small; compute q = floor((h + 19) / 2^255) in {0, 1}.
        let mut q = (h[0] + 19) >> 51;
        q = (h[1] + q) >> 51;
        q = (h[2] + q) >> 51;
        q = (h[3] + q) >> 51;
        q = (h[4] + q) >> 51;

        h[0] += 19 * q;
        h[1] += h[0] >> 51;
        h[0] &= MASK51;
        h[2] += h[1] >> 51;
        h[1] &= MASK51;
        h[3] += h[2] >> 51;
        h[2] &= MASK51;
        h[4] += h[3] >> 51;
        h[3] &= MASK51;
        h[4] &= MASK51;

        let mut out = [0u8; 32];
        let words = [
            h[0] | (h[1] << 51),
            (h[1] >> 13) | (h[2] << 38),
            (h[2] >> 26) | (h[3] << 25),
            (h[3] >> 39) | (h[4] << 12),
        ];
        for (chunk, w) in out.chunks_exact_mut(8).zip(words) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    fn carry(&self) -> FieldElement {
        let mut h = self.0;
        for i in 0..4 {
            h[i + 1] += h[i] >> 51;
            h[i] &= MASK51;
        }
        h[0] += 19 * (h[4] >> 51);
        h[4] &= MASK51;
        h[1] += h[0] >> 51;
        h[0] &= MASK51;
        FieldElement(h)
    }

    pub fn add(&self, rhs: &FieldElement) -> FieldElement {
        let (a, b) = (&self.0, &rhs.0);
        FieldElement([
            a[0] + b[0],
            a[1] + b[1],
            a[2] + b[2],
            a[3] + b[3],
            a[4] + b[4],
        ])
        .carry()
    }

    pub fn sub(&self, rhs: &FieldElement) -> FieldElement {
        // Adds 4p before subtracting so every limb stays non-negative.
        let (a, b) = (&self.0, &rhs.0);
        FieldElement([
            (a[0] + 0x1F_FFFF_FFFF_FFB4) - b[0],
            (a[1] + 0x1F_FFFF_FFFF_FFFC) - b[1],
            (a[2] + 0x1F_FFFF_FFFF_FFFC) - b[2],
            (a[3] + 0x1F_FFFF_FFFF_FFFC) - b[3],
            (a[4] + 0x1F_FFFF_FFFF_FFFC) - b[4],
        ])
        .carry()
    }

    pub fn mul(&self, rhs: &FieldElement) -> FieldElement {
        let a = self.0.map(u128::from);
        let b = rhs.0.map(u128::from);
        let b19 = rhs.0.map(|x| u128::from(x * 19));

        let t = [
            a[0] * b[0] + a[1] * b19[4] + a[2] * b19[3] + a[3] * b19[2] + a[4] * b19[1],
            a[0] * b[1] + a[1] * b[0] + a[2] * b19[4] + a[3] * b19[3] + a[4] * b19[2],
            a[0] * b[2] + a[1] * b[1] + a[2] * b[0] + a[3] * b19[4] + a[4] * b19[3],
            a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0] + a[4] * b19[4],
            a[0] * b[4] + a[1] * b[3] + a[2] * b[2] + a[3] * b[1] + a[4] * b[0],
        ];
        Self::reduce_wide(t)
    }

    pub fn square(&self) -> FieldElement {
        self.mul(self)
    }

    fn mul_small(&self, k: u64) -> FieldElement {
        Self::reduce_wide(self.0.map(|x| u128::from(x) * u128::from(k)))
    }

    fn reduce_wide(t: [u128; 5]) -> FieldElement {
        let mut r = [0u64; 5];
        let mut c: u128 = 0;
        for i in 0..5 {
            let v = t[i] + c;
            r[i] = (v as u64) & MASK51;
            c = v >> 51;
        }
        let v = u128::from(r[0]) + c * 19;
        r[0] = (v as u64) & MASK51;
        r[1] += (v >> 51) as u64;
        FieldElement(r)
    }

    fn pow2k(&self, k: u32) -> FieldElement {
        let mut x = *self;
        for _ in 0..k {
            x = x.square();
        }
        x
    }

    /// Multiplicative inverse via x^(p-2); maps zero to zero.
    pub fn invert(&self) -> FieldElement {
        // Standard addition chain for 2^255 - 21.
        let z2 = self.square();
        let z9 = z2.pow2k(2).mul(self);
        let z11 = z9.mul(&z2);
        let z2_5_0 = z11.square().mul(&z9);
        let z2_10_0 = z2_5_0.pow2k(5).mul(&z2_5_0);
        let z2_20_0 = z2_10_0.pow2k(10).mul(&z2_10_0);
        let z2_40_0 = z2_20_0.pow2k(20).mul(&z2_20_0);
        let z2_50_0 = z2_40_0.pow2k(10).mul(&z2_10_0);
        let z2_100_0 = z2_50_0.pow2k(50).mul(&z2_50_0);
        let z2_200_0 = z2_100_0.pow2k(100).mul(&z2_100_0);
        let z2_250_0 = z2_200_0.pow2k(50).mul(&z2_50_0);
        z2_250_0.pow2k(5).mul(&z11)
    }

    /// Swaps `a` and `b` when `choice` is 1; `choice` must be 0 or 1.
    fn conditional_swap(a: &mut FieldElement, b: &mut FieldElement, choice: u64) {
        let mask = choice.wrapping_neg();
        for i in 0..5 {
            let t = mask & (a.0[i] ^ b.0[i]);
            a.0[i] ^= t;
            b.0[i] ^= t;
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.to_bytes() == other.to_bytes()
    }
}

impl Eq for FieldElement {}

/// A clamped X25519 private scalar.
#[derive(Clone)]
pub struct PrivateScalar {
    raw: [u8; 32],
    clamped: [u8; 32],
}

impl PrivateScalar {
    pub fn raw(&self) -> &[u8; 32] {
        &self.raw
    }

    pub fn clamped(&self) -> &[u8; 32] {
        &self.clamped
    }
}

impl fmt::Debug for PrivateScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PrivateScalar(..)")
    }
}

/// A 32-byte little-endian u-coordinate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PublicKey(pub [u8; 32]);

impl PublicKey {
    pub fn from_slice(bytes: &[u8]) -> Result<PublicKey> {
        let u: [u8; 32] = bytes.try_into().map_err(|_| Error::InvalidLength {
            expected: 32,
            actual: bytes.len(),
        })?;
        Ok(PublicKey(u))
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl fmt::Debug for PublicKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PublicKey({})", hex::encode(self.0))
    }
}

/// A Diffie-Hellman output that passed the all-zero check.
#[derive(Clone, PartialEq, Eq)]
pub struct SharedSecret([u8; 32]);

impl SharedSecret {
    /// Accepts `k` unless it is the all-zero value.
    pub fn new(k: [u8; 32]) -> Result<SharedSecret> {
        if is_all_zero(&k) {
            return Err(Error::LowOrderPeerKey);
        }
        Ok(SharedSecret(k))
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl fmt::Debug for SharedSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SharedSecret(..)")
    }
}

/// A private scalar together with its public key.
#[derive(Clone, Debug)]
pub struct Keypair {
    pub private: PrivateScalar,
    pub public: PublicKey,
}

/// Clears bits 0, 1, 2 and 255 and sets bit 254.
pub fn clamp(raw: &[u8]) -> Result<PrivateScalar> {
    let raw: [u8; 32] = raw.try_into().map_err(|_| Error::InvalidLength {
        expected: 32,
        actual: raw.len(),
    })?;
    let mut clamped = raw;
    clamped[0] &= 0b1111_1000;
    clamped[31] &= 0b0111_1111;
    clamped[31] |= 0b0100_0000;
    Ok(PrivateScalar { raw, clamped })
}

/// The X25519 function: u-coordinate of `scalar * u`.
pub fn x25519(scalar: &PrivateScalar, u: &PublicKey) -> [u8; 32] {
    ladder(&scalar.clamped, &u.0)
}

fn ladder(k: &[u8; 32], u: &[u8; 32]) -> [u8; 32] {
    let x1 = FieldElement::from_bytes(u);
    let mut x2 = FieldElement::ONE;
    let mut z2 = FieldElement::ZERO;
    let mut x3 = x1;
    let mut z3 = FieldElement::ONE;
    let mut swap = 0u64;

    for t in (0..255).rev() {
        let bit = u64::from((k[t >> 3] >> (t & 7)) & 1);
        swap ^= bit;
        FieldElement::conditional_swap(&mut x2, &mut x3, swap);
        FieldElement::conditional_swap(&mut z2, &mut z3, swap);
        swap = bit;

        let a = x2.add(&z2);
        let aa = a.square();
        let b = x2.sub(&z2);
        let bb = b.square();
        let e = aa.sub(&bb);
        let c = x3.add(&z3);
        let d = x3.sub(&z3);
        let da = d.mul(&a);
        let cb = c.mul(&b);
        x3 = da.add(&cb).square();
        z3 = x1.mul(&da.sub(&cb).square());
        x2 = aa.mul(&bb);
        z2 = e.mul(&aa.add(&e.mul_small(A24)));
    }
    FieldElement::conditional_swap(&mut x2, &mut x3, swap);
    FieldElement::conditional_swap(&mut z2, &mut z3, swap);

    x2.mul(&z2.invert()).to_bytes()
}

/// True iff every byte is zero. Folds all bytes with OR, no early exit.
pub fn is_all_zero(k: &[u8; 32]) -> bool {
    let acc = k.iter().fold(0u8, |acc, &b| acc | b);
    std::hint::black_box(acc) == 0
}

/// Derives a keypair from 32 caller-supplied random bytes.
pub fn generate_keypair(entropy: &[u8; 32]) -> Keypair {
    let private = clamp(entropy).expect("32-byte entropy");
    let public = PublicKey(x25519(&private, &BASEPOINT));
    Keypair { private, public }
}

/// Draws fresh entropy from `rng` and derives a keypair.
pub fn random_keypair<R: rand::RngCore + rand::CryptoRng>(rng: &mut R) -> Keypair {
    let mut entropy = [0u8; 32];
    rng.fill_bytes(&mut entropy);
    generate_keypair(&entropy)
}

/// Decodes key-file contents: 32 raw bytes, or 64 hex characters with an
/// optional trailing newline. Detected by length.
pub fn parse_key_file(bytes: &[u8]) -> Result<[u8; 32]> {
    let text = match bytes.len() {
        32 => return Ok(bytes.try_into().unwrap()),
        64 => bytes,
        65 if bytes[64] == b'\n' => &bytes[..64],
        66 if &bytes[64..] == b"\r\n" => &bytes[..64],
        n => {
            return Err(Error::InvalidLength {
                expected: 32,
                actual: n,
            })
        }
    };
    let mut key = [0u8; 32];
    hex::decode_to_slice(text, &mut key)
        .map_err(|_| Error::MalformedMessage("key file is not hex"))?;
    Ok(key)
}
