//! Independent reference implementations used only by the test suites.
//!
//! Nothing here calls into the crate under test: each oracle is written
//! from the textbook definition with arbitrary-precision integers or a
//! literal transcription of a reference listing.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_bytes<const N: usize>(rng: &mut StdRng) -> [u8; N] {
    let mut b = [0u8; N];
    rng.fill_bytes(&mut b);
    b
}

pub fn random_vec(rng: &mut StdRng, len: usize) -> Vec<u8> {
    let mut v = vec![0u8; len];
    rng.fill_bytes(&mut v);
    v
}

pub fn h(s: &str) -> Vec<u8> {
    hex::decode(s).unwrap()
}

// ---------------------------------------------------------------------------
// X25519: affine double-and-add on v^2 = u^3 + A u^2 + u over GF(p).
//
// For an input u the curve value c = u^3 + A u^2 + u may be a non-square
// (the point lives on the twist). Every multiple of the point then has a
// v-coordinate of the form t * sqrt(c) with t in GF(p), so points are
// carried as (x, t) and sqrt(c) never has to be computed.
// ---------------------------------------------------------------------------

pub mod x25519 {
    use super::*;

    fn p() -> BigUint {
        (BigUint::one() << 255u32) - BigUint::from(19u32)
    }

    const A: u32 = 486_662;

    struct Curve {
        p: BigUint,
        c: BigUint,
    }

    #[derive(Clone)]
    enum Point {
        Infinity,
        Affine { x: BigUint, t: BigUint },
    }

    impl Curve {
        fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
            (a + &self.p - (b % &self.p)) % &self.p
        }

        fn inv(&self, a: &BigUint) -> BigUint {
            a.modpow(&(&self.p - BigUint::from(2u32)), &self.p)
        }

        fn is_two_torsion(&self, t: &BigUint) -> bool {
            t.is_zero() || self.c.is_zero()
        }

        fn double(&self, pt: &Point) -> Point {
            let Point::Affine { x, t } = pt else {
                return Point::Infinity;
            };
            if self.is_two_torsion(t) {
                return Point::Infinity;
            }
            let p = &self.p;
            let num = (BigUint::from(3u32) * x * x + BigUint::from(2 * A) * x + 1u32) % p;
            let den = (BigUint::from(2u32) * t * &self.c) % p;
            let l = num * self.inv(&den) % p;
            let x3 = self.sub(
                &self.sub(&(&self.c * &l * &l % p), &BigUint::from(A)),
                &(x * 2u32),
            );
            let t3 = self.sub(&(&l * self.sub(x, &x3) % p), t);
            Point::Affine { x: x3, t: t3 }
        }

        fn add(&self, a: &Point, b: &Point) -> Point {
            let (Point::Affine { x: x1, t: t1 }, Point::Affine { x: x2, t: t2 }) = (a, b) else {
                return match a {
                    Point::Infinity => b.clone(),
                    _ => a.clone(),
                };
            };
            let p = &self.p;
            if x1 == x2 {
                if (t1 + t2) % p == BigUint::zero() || self.c.is_zero() {
                    return Point::Infinity;
                }
                return self.double(a);
            }
            let l = self.sub(t2, t1) * self.inv(&self.sub(x2, x1)) % p;
            let x3 = self.sub(
                &self.sub(&self.sub(&(&self.c * &l * &l % p), &BigUint::from(A)), x1),
                x2,
            );
            let t3 = self.sub(&(&l * self.sub(x1, &x3) % p), t1);
            Point::Affine { x: x3, t: t3 }
        }
    }

    /// Scalar clamped here, independently of the crate.
    pub fn scalar_mult(scalar: &[u8; 32], u: &[u8; 32]) -> [u8; 32] {
        let mut k = *scalar;
        k[0] &= 248;
        k[31] &= 127;
        k[31] |= 64;
        let k = BigUint::from_bytes_le(&k);

        let mut u = *u;
        u[31] &= 127;
        let p = p();
        let x = BigUint::from_bytes_le(&u) % &p;
        let c = (&x * &x * &x + BigUint::from(A) * &x * &x + &x) % &p;
        let curve = Curve { p: p.clone(), c };
        let base = Point::Affine {
            x,
            t: BigUint::one(),
        };

        let mut acc = Point::Infinity;
        for i in (0..k.bits()).rev() {
            acc = curve.double(&acc);
            if k.bit(i) {
                acc = curve.add(&acc, &base);
            }
        }
        let mut out = [0u8; 32];
        if let Point::Affine { x, .. } = acc {
            let bytes = x.to_bytes_le();
            out[..bytes.len()].copy_from_slice(&bytes);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// ChaCha20: the reference `chacha_block` listing, transcribed line for line,
// with the RFC 7539 input packing.
// ---------------------------------------------------------------------------

pub mod chacha {
    macro_rules! rotl {
        ($a:expr, $b:expr) => {
            ($a << $b) | ($a >> (32 - $b))
        };
    }

    macro_rules! qr {
        ($x:ident, $a:expr, $b:expr, $c:expr, $d:expr) => {
            $x[$a] = $x[$a].wrapping_add($x[$b]);
            $x[$d] ^= $x[$a];
            $x[$d] = rotl!($x[$d], 16);
            $x[$c] = $x[$c].wrapping_add($x[$d]);
            $x[$b] ^= $x[$c];
            $x[$b] = rotl!($x[$b], 12);
            $x[$a] = $x[$a].wrapping_add($x[$b]);
            $x[$d] ^= $x[$a];
            $x[$d] = rotl!($x[$d], 8);
            $x[$c] = $x[$c].wrapping_add($x[$d]);
            $x[$b] ^= $x[$c];
            $x[$b] = rotl!($x[$b], 7);
        };
    }

    /// `rounds` counts single rounds; the final addition is optional so the
    /// raw permutation can be inspected.
    pub fn chacha_block_rounds(input: &[u32; 16], rounds: usize, add_input: bool) -> [u32; 16] {
        let mut x = *input;
        let mut i = 0;
        while i < rounds {
            // Odd round
            qr!(x, 0, 4, 8, 12);
            qr!(x, 1, 5, 9, 13);
            qr!(x, 2, 6, 10, 14);
            qr!(x, 3, 7, 11, 15);
            // Even round
            qr!(x, 0, 5, 10, 15);
            qr!(x, 1, 6, 11, 12);
            qr!(x, 2, 7, 8, 13);
            qr!(x, 3, 4, 9, 14);
            i += 2;
        }
        let mut out = [0u32; 16];
        for i in 0..16 {
            out[i] = if add_input {
                x[i].wrapping_add(input[i])
            } else {
                x[i]
            };
        }
        out
    }

    pub fn quarter_round(a: u32, b: u32, c: u32, d: u32) -> (u32, u32, u32, u32) {
        let mut x = [a, b, c, d];
        qr!(x, 0, 1, 2, 3);
        (x[0], x[1], x[2], x[3])
    }

    pub fn initial_state(key: &[u8; 32], counter: u32, nonce: &[u8; 12]) -> [u32; 16] {
        let mut bytes = Vec::with_capacity(64);
        bytes.extend_from_slice(b"expand 32-byte k");
        bytes.extend_from_slice(key);
        bytes.extend_from_slice(&counter.to_le_bytes());
        bytes.extend_from_slice(nonce);
        let mut s = [0u32; 16];
        for i in 0..16 {
            s[i] = u32::from_le_bytes([
                bytes[4 * i],
                bytes[4 * i + 1],
                bytes[4 * i + 2],
                bytes[4 * i + 3],
            ]);
        }
        s
    }

    pub fn serialize(words: &[u32; 16]) -> [u8; 64] {
        let mut out = [0u8; 64];
        for i in 0..16 {
            out[4 * i..4 * i + 4].copy_from_slice(&words[i].to_le_bytes());
        }
        out
    }

    pub fn block(key: &[u8; 32], counter: u32, nonce: &[u8; 12]) -> [u8; 64] {
        serialize(&chacha_block_rounds(
            &initial_state(key, counter, nonce),
            20,
            true,
        ))
    }

    pub fn xor(key: &[u8; 32], nonce: &[u8; 12], counter: u32, data: &[u8]) -> Vec<u8> {
        let mut keystream = Vec::new();
        let mut ctr = counter;
        while keystream.len() < data.len() {
            keystream.extend_from_slice(&block(key, ctr, nonce));
            ctr += 1;
        }
        data.iter().zip(keystream).map(|(d, k)| d ^ k).collect()
    }
}

// ---------------------------------------------------------------------------
// Poly1305 as a polynomial over GF(2^130 - 5) with big integers.
// ---------------------------------------------------------------------------

pub mod poly1305 {
    use super::*;

    fn p() -> BigUint {
        (BigUint::one() << 130u32) - BigUint::from(5u32)
    }

    /// Coefficients: each 16-byte chunk (last may be short) plus a 0x01 byte.
    pub fn coefficients(message: &[u8]) -> Vec<BigUint> {
        message
            .chunks(16)
            .map(|c| {
                let mut v = c.to_vec();
                v.push(1);
                BigUint::from_bytes_le(&v)
            })
            .collect()
    }

    pub fn clamp_r(r: &[u8]) -> BigUint {
        let mask = BigUint::from(0x0fff_fffc_0fff_fffc_0fff_fffc_0fff_ffffu128);
        BigUint::from_bytes_le(r) & mask
    }

    /// Horner evaluation at r, mod p.
    pub fn hash_horner(r: &BigUint, message: &[u8]) -> BigUint {
        let p = p();
        coefficients(message)
            .into_iter()
            .fold(BigUint::zero(), |acc, c| (acc + c) * r % &p)
    }

    /// c_1 r^q + c_2 r^(q-1) + ... + c_q r^1, mod p.
    pub fn hash_power_sum(r: &BigUint, message: &[u8]) -> BigUint {
        let p = p();
        let cs = coefficients(message);
        let q = cs.len() as u32;
        cs.iter().enumerate().fold(BigUint::zero(), |acc, (i, c)| {
            (acc + c * r.modpow(&BigUint::from(q - i as u32), &p)) % &p
        })
    }

    fn encode16(x: &BigUint) -> [u8; 16] {
        let x = x % (BigUint::one() << 128u32);
        let mut out = [0u8; 16];
        let b = x.to_bytes_le();
        out[..b.len()].copy_from_slice(&b);
        out
    }

    /// Full MAC: clamped r, plus s, mod 2^128.
    pub fn tag(key: &[u8; 32], message: &[u8]) -> [u8; 16] {
        let r = clamp_r(&key[..16]);
        let s = BigUint::from_bytes_le(&key[16..]);
        encode16(&(hash_horner(&r, message) + s))
    }

    /// The bare keyed hash: unclamped r, no s.
    pub fn bare_hash(r: &[u8; 16], message: &[u8]) -> [u8; 16] {
        encode16(&hash_horner(&BigUint::from_bytes_le(r), message))
    }
}

// ---------------------------------------------------------------------------
// BLAKE2s following the RFC 7693 appendix reference code (init / update /
// final over a 64-byte buffer).
// ---------------------------------------------------------------------------

pub mod blake2s {
    const IV: [u32; 8] = [
        0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A, 0x510E527F, 0x9B05688C, 0x1F83D9AB,
        0x5BE0CD19,
    ];

    const SIGMA: [[u8; 16]; 10] = [
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

    struct Ctx {
        b: [u8; 64],
        h: [u32; 8],
        t: [u32; 2],
        c: usize,
        outlen: usize,
    }

    fn get32(p: &[u8]) -> u32 {
        (p[0] as u32) ^ ((p[1] as u32) << 8) ^ ((p[2] as u32) << 16) ^ ((p[3] as u32) << 24)
    }

    fn compress(ctx: &mut Ctx, last: bool) {
        let mut v = [0u32; 16];
        let mut m = [0u32; 16];
        v[..8].copy_from_slice(&ctx.h);
        v[8..].copy_from_slice(&IV);
        v[12] ^= ctx.t[0];
        v[13] ^= ctx.t[1];
        if last {
            v[14] = !v[14];
        }
        for (i, w) in m.iter_mut().enumerate() {
            *w = get32(&ctx.b[4 * i..]);
        }
        let g = |v: &mut [u32; 16], a: usize, b: usize, c: usize, d: usize, x: u32, y: u32| {
            v[a] = v[a].wrapping_add(v[b]).wrapping_add(x);
            v[d] = (v[d] ^ v[a]).rotate_right(16);
            v[c] = v[c].wrapping_add(v[d]);
            v[b] = (v[b] ^ v[c]).rotate_right(12);
            v[a] = v[a].wrapping_add(v[b]).wrapping_add(y);
            v[d] = (v[d] ^ v[a]).rotate_right(8);
            v[c] = v[c].wrapping_add(v[d]);
            v[b] = (v[b] ^ v[c]).rotate_right(7);
        };
        for s in SIGMA.iter() {
            let s = s.map(usize::from);
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
            ctx.h[i] ^= v[i] ^ v[i + 8];
        }
    }

    fn update(ctx: &mut Ctx, input: &[u8]) {
        for &byte in input {
            if ctx.c == 64 {
                ctx.t[0] = ctx.t[0].wrapping_add(ctx.c as u32);
                if ctx.t[0] < ctx.c as u32 {
                    ctx.t[1] += 1;
                }
                compress(ctx, false);
                ctx.c = 0;
            }
            ctx.b[ctx.c] = byte;
            ctx.c += 1;
        }
    }

    fn init(outlen: usize, key: &[u8]) -> Ctx {
        let mut ctx = Ctx {
            b: [0; 64],
            h: IV,
            t: [0, 0],
            c: 0,
            outlen,
        };
        ctx.h[0] ^= 0x01010000 ^ ((key.len() as u32) << 8) ^ outlen as u32;
        if !key.is_empty() {
            update(&mut ctx, key);
            ctx.c = 64;
        }
        ctx
    }

    fn finalize(mut ctx: Ctx) -> Vec<u8> {
        ctx.t[0] = ctx.t[0].wrapping_add(ctx.c as u32);
        if ctx.t[0] < ctx.c as u32 {
            ctx.t[1] += 1;
        }
        while ctx.c < 64 {
            ctx.b[ctx.c] = 0;
            ctx.c += 1;
        }
        compress(&mut ctx, true);
        (0..ctx.outlen)
            .map(|i| (ctx.h[i >> 2] >> (8 * (i & 3))) as u8)
            .collect()
    }

    pub fn hash(outlen: usize, key: &[u8], data: &[u8]) -> Vec<u8> {
        let mut ctx = init(outlen, key);
        update(&mut ctx, data);
        finalize(ctx)
    }

    pub fn hmac(key: &[u8], msg: &[u8]) -> Vec<u8> {
        let mut k = if key.len() > 64 {
            hash(32, &[], key)
        } else {
            key.to_vec()
        };
        k.resize(64, 0);
        let ipad: Vec<u8> = k
            .iter()
            .map(|b| b ^ 0x36)
            .chain(msg.iter().copied())
            .collect();
        let inner = hash(32, &[], &ipad);
        let opad: Vec<u8> = k.iter().map(|b| b ^ 0x5c).chain(inner).collect();
        hash(32, &[], &opad)
    }

    /// Expand with a configurable first counter value, to catch off-by-one
    /// regressions in the real implementation.
    pub fn hkdf_expand_from(prk: &[u8], info: &[u8], len: usize, first: u8) -> Vec<u8> {
        let mut out = Vec::new();
        let mut t = Vec::new();
        let mut i = first;
        while out.len() < len {
            let mut msg = t.clone();
            msg.extend_from_slice(info);
            msg.push(i);
            t = hmac(prk, &msg);
            out.extend_from_slice(&t);
            i = i.wrapping_add(1);
        }
        out.truncate(len);
        out
    }

    pub fn hkdf(salt: &[u8], ikm: &[u8], info: &[u8], len: usize) -> Vec<u8> {
        let salt = if salt.is_empty() {
            vec![0u8; 32]
        } else {
            salt.to_vec()
        };
        hkdf_expand_from(&hmac(&salt, ikm), info, len, 1)
    }
}

// ---------------------------------------------------------------------------
// RFC 8439 AEAD tag, built from the oracles above, for contrast with the
// nonce || ciphertext MAC input used by the session layer.
// ---------------------------------------------------------------------------

pub fn rfc8439_aead_tag(
    key: &[u8; 32],
    nonce: &[u8; 12],
    aad: &[u8],
    ciphertext: &[u8],
) -> [u8; 16] {
    let otk: [u8; 32] = chacha::block(key, 0, nonce)[..32].try_into().unwrap();
    let pad16 = |v: &mut Vec<u8>| {
        while !v.len().is_multiple_of(16) {
            v.push(0);
        }
    };
    let mut mac_data = aad.to_vec();
    pad16(&mut mac_data);
    mac_data.extend_from_slice(ciphertext);
    pad16(&mut mac_data);
    mac_data.extend_from_slice(&(aad.len() as u64).to_le_bytes());
    mac_data.extend_from_slice(&(ciphertext.len() as u64).to_le_bytes());
    poly1305::tag(&otk, &mac_data)
}

/// Session message built purely from the oracles.
pub fn oracle_seal(key: &[u8; 32], nonce: &[u8; 12], plaintext: &[u8]) -> Vec<u8> {
    let otk: [u8; 32] = chacha::block(key, 0, nonce)[..32].try_into().unwrap();
    let ct = chacha::xor(key, nonce, 1, plaintext);
    let mut mac_input = nonce.to_vec();
    mac_input.extend_from_slice(&ct);
    let tag = poly1305::tag(&otk, &mac_input);
    let mut out = nonce.to_vec();
    out.extend_from_slice(&ct);
    out.extend_from_slice(&tag);
    out
}

/// Session key derived with the BLAKE2s/HKDF oracle.
pub fn oracle_session_key(shared: &[u8; 32], pub_a: &[u8; 32], pub_b: &[u8; 32]) -> [u8; 32] {
    let (lo, hi) = if pub_a <= pub_b {
        (pub_a, pub_b)
    } else {
        (pub_b, pub_a)
    };
    let mut info = b"ejafa/v1".to_vec();
    info.extend_from_slice(lo);
    info.extend_from_slice(hi);
    blake2s::hkdf(&[0u8; 32], shared, &info, 32)
        .try_into()
        .unwrap()
}
