//! Key exchange, session-key derivation and encrypt-then-MAC messages.
//!
//! Wire unit: `nonce (12) || ciphertext || tag (16)`. The Poly1305 one-time
//! key is the first 32 bytes of ChaCha20 block 0 under the session key and
//! nonce; the payload is encrypted from block 1 onward. The tag covers
//! `nonce || ciphertext` with no associated data and no length block.

use std::fmt;

use rand::{CryptoRng, RngCore};

use crate::chacha20::{chacha20_block, chacha20_xor_in_place, Nonce96, StreamKey};
use crate::channel::MAX_FRAME_LEN;
use crate::error::{Error, Result};
use crate::hkdf::{hkdf_expand, hkdf_extract};
use crate::poly1305::{poly1305_tag, MacKey, Tag, TAG_LEN};
use crate::x25519::{x25519, Keypair, PrivateScalar, PublicKey, SharedSecret};

pub const NONCE_LEN: usize = 12;

/// Bytes added to every plaintext on the wire.
pub const OVERHEAD: usize = NONCE_LEN + TAG_LEN;

/// Largest plaintext whose serialized message still fits in one frame.
pub const MAX_PLAINTEXT_LEN: usize = MAX_FRAME_LEN - OVERHEAD;

/// Prefix of the HKDF info string; the two sorted public keys follow it.
pub const KDF_LABEL: &[u8] = b"ejafa/v1";

const PAYLOAD_COUNTER: u32 = 1;

/// Symmetric key shared by both directions of a session.
#[derive(Clone, PartialEq, Eq)]
pub struct SessionKey([u8; 32]);

impl SessionKey {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    fn stream_key(&self) -> StreamKey {
        StreamKey(self.0)
    }
}

impl fmt::Debug for SessionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SessionKey(..)")
    }
}

/// A sealed message: nonce, ciphertext and tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncryptedMessage {
    pub nonce: Nonce96,
    pub ciphertext: Vec<u8>,
    pub tag: Tag,
}

impl EncryptedMessage {
    pub fn serialized_len(&self) -> usize {
        self.ciphertext.len() + OVERHEAD
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.serialized_len());
        out.extend_from_slice(&self.nonce.0);
        out.extend_from_slice(&self.ciphertext);
        out.extend_from_slice(&self.tag.0);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<EncryptedMessage> {
        if bytes.len() < OVERHEAD {
            return Err(Error::MalformedMessage("shorter than nonce + tag"));
        }
        let (nonce, rest) = bytes.split_at(NONCE_LEN);
        let (ciphertext, tag) = rest.split_at(rest.len() - TAG_LEN);
        Ok(EncryptedMessage {
            nonce: Nonce96::from_slice(nonce)?,
            ciphertext: ciphertext.to_vec(),
            tag: Tag(tag.try_into().unwrap()),
        })
    }
}

/// X25519 with the all-zero output rejected.
pub fn perform_key_exchange(own: &PrivateScalar, peer: &PublicKey) -> Result<SharedSecret> {
    // SharedSecret::new applies the all-zero check.
    SharedSecret::new(x25519(own, peer))
}

/// HKDF(salt = 0^32, ikm = k, info = label || min(A, B) || max(A, B), 32).
pub fn derive_session_key(k: &SharedSecret, pub_a: &PublicKey, pub_b: &PublicKey) -> SessionKey {
    let (lo, hi) = if pub_a <= pub_b {
        (pub_a, pub_b)
    } else {
        (pub_b, pub_a)
    };
    let mut info = Vec::with_capacity(KDF_LABEL.len() + 64);
    info.extend_from_slice(KDF_LABEL);
    info.extend_from_slice(lo.as_bytes());
    info.extend_from_slice(hi.as_bytes());

    let prk = hkdf_extract(&[0u8; 32], k.as_bytes());
    let okm = hkdf_expand(&prk, &info, 32).expect("32 is a valid output length");
    SessionKey(okm.try_into().unwrap())
}

/// Exchange and derivation in one step.
pub fn establish(own: &Keypair, peer: &PublicKey) -> Result<SessionKey> {
    let k = perform_key_exchange(&own.private, peer)?;
    Ok(derive_session_key(&k, &own.public, peer))
}

/// Poly1305 key for one message: keystream block 0 under (key, nonce).
pub fn one_time_key(key: &SessionKey, nonce: &Nonce96) -> [u8; 32] {
    let block = chacha20_block(&key.stream_key(), 0, nonce);
    block[..32].try_into().unwrap()
}

pub fn generate_mac(otk: &[u8; 32], nonce: &Nonce96, ciphertext: &[u8]) -> Tag {
    let mut input = Vec::with_capacity(NONCE_LEN + ciphertext.len());
    input.extend_from_slice(&nonce.0);
    input.extend_from_slice(ciphertext);
    poly1305_tag(&MacKey::new(otk), &input)
}

pub fn verify_mac(otk: &[u8; 32], nonce: &Nonce96, ciphertext: &[u8], tag: &Tag) -> bool {
    generate_mac(otk, nonce, ciphertext).ct_eq(tag)
}

/// Encrypts under an explicit nonce. The caller owns nonce uniqueness.
pub fn encrypt_with_nonce(
    key: &SessionKey,
    plaintext: &[u8],
    nonce: Nonce96,
) -> Result<EncryptedMessage> {
    if plaintext.len() > MAX_PLAINTEXT_LEN {
        return Err(Error::MessageTooLong(plaintext.len()));
    }
    let otk = one_time_key(key, &nonce);
    let mut ciphertext = plaintext.to_vec();
    chacha20_xor_in_place(&key.stream_key(), &nonce, PAYLOAD_COUNTER, &mut ciphertext)?;
    let tag = generate_mac(&otk, &nonce, &ciphertext);
    Ok(EncryptedMessage {
        nonce,
        ciphertext,
        tag,
    })
}

/// Encrypts under `nonce`, or a fresh random nonce drawn from `rng`.
pub fn encrypt<R: RngCore + CryptoRng>(
    key: &SessionKey,
    plaintext: &[u8],
    nonce: Option<Nonce96>,
    rng: &mut R,
) -> Result<EncryptedMessage> {
    let nonce = nonce.unwrap_or_else(|| {
        let mut n = [0u8; NONCE_LEN];
        rng.fill_bytes(&mut n);
        Nonce96(n)
    });
    encrypt_with_nonce(key, plaintext, nonce)
}

/// Verifies the tag, then decrypts. Nothing is decrypted on a bad tag.
pub fn decrypt(key: &SessionKey, msg: &EncryptedMessage) -> Result<Vec<u8>> {
    let otk = one_time_key(key, &msg.nonce);
    if !verify_mac(&otk, &msg.nonce, &msg.ciphertext, &msg.tag) {
        return Err(Error::AuthenticationFailed);
    }
    let mut plaintext = msg.ciphertext.clone();
    chacha20_xor_in_place(
        &key.stream_key(),
        &msg.nonce,
        PAYLOAD_COUNTER,
        &mut plaintext,
    )?;
    Ok(plaintext)
}

pub fn decrypt_bytes(key: &SessionKey, bytes: &[u8]) -> Result<Vec<u8>> {
    decrypt(key, &EncryptedMessage::from_bytes(bytes)?)
}

/// A session key bundled with the RNG used for random nonces.
///
/// Not meant for concurrent use; move it between threads as a whole.
pub struct Session<R> {
    key: SessionKey,
    rng: R,
}

impl<R: RngCore + CryptoRng> Session<R> {
    pub fn new(key: SessionKey, rng: R) -> Session<R> {
        Session { key, rng }
    }

    pub fn establish(own: &Keypair, peer: &PublicKey, rng: R) -> Result<Session<R>> {
        Ok(Session::new(establish(own, peer)?, rng))
    }

    pub fn key(&self) -> &SessionKey {
        &self.key
    }

    pub fn encrypt(
        &mut self,
        plaintext: &[u8],
        nonce: Option<Nonce96>,
    ) -> Result<EncryptedMessage> {
        encrypt(&self.key, plaintext, nonce, &mut self.rng)
    }

    pub fn decrypt(&self, msg: &EncryptedMessage) -> Result<Vec<u8>> {
        decrypt(&self.key, msg)
    }
}
