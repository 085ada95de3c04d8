//! Frozen known-answer vectors shipped with the crate, and a self-check
//! that recomputes each one.

use std::collections::HashMap;

use crate::blake2s::{blake2s, hmac_blake2s};
use crate::chacha20::{chacha20_block, Nonce96, StreamKey};
use crate::hkdf::{hkdf_expand, hkdf_extract, PseudoRandomKey};
use crate::poly1305::{poly1305_tag, MacKey};
use crate::session::{self, EncryptedMessage};
use crate::x25519::{generate_keypair, x25519};

pub const X25519_FILE: &str = include_str!("../vectors/x25519.txt");
pub const SESSION_FILE: &str = include_str!("../vectors/session_golden.txt");
pub const PRIMITIVES_FILE: &str = include_str!("../vectors/primitives.txt");

/// Parses `name = hex` lines; `#` starts a comment line.
pub fn parse(text: &str) -> HashMap<String, Vec<u8>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| {
            let bytes = hex::decode(v.trim()).expect("vector files hold valid hex");
            (k.trim().to_string(), bytes)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct VectorCheck {
    pub section: &'static str,
    pub name: &'static str,
    pub expected: Vec<u8>,
    pub actual: Vec<u8>,
}

impl VectorCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

fn arr<const N: usize>(v: &[u8]) -> [u8; N] {
    v.try_into().expect("vector length")
}

/// Recomputes every shipped vector. Output order is fixed.
pub fn run_checks() -> Vec<VectorCheck> {
    let x = parse(X25519_FILE);
    let s = parse(SESSION_FILE);
    let p = parse(PRIMITIVES_FILE);
    let mut out = Vec::new();
    let mut check = |section, name, expected: &Vec<u8>, actual: Vec<u8>| {
        out.push(VectorCheck {
            section,
            name,
            expected: expected.clone(),
            actual,
        });
    };

    let alice = generate_keypair(&arr(&x["alice_private"]));
    let bob = generate_keypair(&arr(&x["bob_private"]));
    check(
        "x25519",
        "alice_public",
        &x["alice_public"],
        alice.public.0.to_vec(),
    );
    check(
        "x25519",
        "bob_public",
        &x["bob_public"],
        bob.public.0.to_vec(),
    );
    check(
        "x25519",
        "shared_a",
        &x["shared_secret"],
        x25519(&alice.private, &bob.public).to_vec(),
    );
    check(
        "x25519",
        "shared_b",
        &x["shared_secret"],
        x25519(&bob.private, &alice.public).to_vec(),
    );

    let key = session::establish(&alice, &bob.public).expect("vector keys are valid");
    let prk = hkdf_extract(&[0; 32], &x["shared_secret"]);
    check("session", "prk", &s["prk"], prk.0.to_vec());
    check(
        "session",
        "session_key",
        &s["session_key"],
        key.as_bytes().to_vec(),
    );
    let nonce = Nonce96(arr(&s["nonce"]));
    let wire = session::encrypt_with_nonce(&key, &s["plaintext"], nonce)
        .map(|m| m.to_bytes())
        .unwrap_or_default();
    check("session", "wire", &s["wire"], wire);
    let opened = EncryptedMessage::from_bytes(&s["wire"])
        .and_then(|m| session::decrypt(&key, &m))
        .unwrap_or_default();
    check("session", "decrypted", &s["plaintext"], opened);

    let zero_block = chacha20_block(&StreamKey([0; 32]), 0, &Nonce96([0; 12]));
    check(
        "primitives",
        "chacha20_zero_block",
        &p["chacha20_zero_block"],
        zero_block.to_vec(),
    );
    let poly_key =
        hex::decode("85d6be7857556d337f4452fe42d506a80103808afb0db2fd4abff6af4149f51b").unwrap();
    let tag = poly1305_tag(
        &MacKey::new(&arr(&poly_key)),
        b"Cryptographic Forum Research Group",
    );
    check(
        "primitives",
        "poly1305_rfc8439",
        &p["poly1305_rfc8439"],
        tag.0.to_vec(),
    );
    let b2 = |data: &[u8], key: &[u8], n| blake2s(data, key, n).unwrap().into_vec();
    let key32: Vec<u8> = (0..32).collect();
    check(
        "primitives",
        "blake2s_empty",
        &p["blake2s_empty"],
        b2(b"", &[], 32),
    );
    check(
        "primitives",
        "blake2s_abc",
        &p["blake2s_abc"],
        b2(b"abc", &[], 32),
    );
    check(
        "primitives",
        "blake2s_keyed_abc",
        &p["blake2s_keyed_abc"],
        b2(b"abc", &key32, 32),
    );
    check(
        "primitives",
        "blake2s_abc_16",
        &p["blake2s_abc_16"],
        b2(b"abc", &[], 16),
    );
    check(
        "primitives",
        "hmac_blake2s_zero",
        &p["hmac_blake2s_zero"],
        hmac_blake2s(&[0; 32], b"").to_vec(),
    );
    let okm = hkdf_expand(&PseudoRandomKey(arr(&s["prk"])), b"ejafa", 33).unwrap();
    check("primitives", "hkdf_expand_33", &p["hkdf_expand_33"], okm);
    out
}
