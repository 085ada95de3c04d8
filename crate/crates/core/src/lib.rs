//! A small secure-channel protocol built from first principles.
//!
//! X25519 key agreement, session keys from HKDF over HMAC-BLAKE2s, and
//! ChaCha20 with a Poly1305 tag over `nonce || ciphertext`. Every primitive
//! is implemented in this crate.

pub mod blake2s;
pub mod chacha20;
pub mod channel;
pub mod error;
pub mod hkdf;
pub mod metrics;
pub mod poly1305;
pub mod session;
pub mod vectors;
pub mod x25519;

pub use chacha20::{Nonce96, StreamKey};
pub use channel::{handshake, Channel, ChannelState, Frame, Role};
pub use error::{Error, Result};
pub use metrics::BenchRecord;
pub use poly1305::{MacKey, Tag};
pub use session::{EncryptedMessage, Session, SessionKey, OVERHEAD};
pub use x25519::{Keypair, PrivateScalar, PublicKey, SharedSecret, BASEPOINT};
