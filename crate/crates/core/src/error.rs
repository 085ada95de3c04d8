use std::io;

/// Errors produced by the primitives, the session layer and the channel.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid length: expected {expected}, got {actual}")]
    InvalidLength { expected: usize, actual: usize },
    #[error("invalid quarter-round indices ({0}, {1}, {2}, {3})")]
    InvalidIndex(usize, usize, usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParam(&'static str),
    #[error("message too long: {0} bytes")]
    MessageTooLong(usize),
    #[error("peer public key produced an all-zero shared secret")]
    LowOrderPeerKey,
    #[error("malformed message: {0}")]
    MalformedMessage(&'static str),
    #[error("authentication failed")]
    AuthenticationFailed,
    #[error("malformed handshake frame: {0} bytes")]
    HandshakeMalformed(usize),
    #[error("peer disconnected")]
    Disconnected,
    #[error("replayed message counter {0}")]
    ReplayDetected(u64),
    #[error("message carries the wrong direction byte {0:#04x}")]
    WrongDirection(u8),
    #[error("send counter exhausted, session must be re-established")]
    CounterExhausted,
    #[error("frame of {0} bytes exceeds the frame cap")]
    FrameTooLarge(u64),
    #[error("channel closed after a previous failure")]
    ChannelClosed,
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
