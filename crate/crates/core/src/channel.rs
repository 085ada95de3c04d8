//! Framed transport, handshake and replay policy.
//!
//! Wire protocol:
//!
//! ```text
//! [frame: initiator public key (32)] [frame: responder public key (32)]
//! [frame: EncryptedMessage]*
//! frame = length (u32, big-endian) || payload
//! ```
//!
//! Channel messages use counter nonces, `direction || 00 00 00 || counter
//! (u64, big-endian)`, and the receiver rejects any counter at or below the
//! highest one it has accepted.

use std::collections::VecDeque;
use std::io::{self, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::{Arc, Condvar, Mutex};
use std::time::Duration;

use crate::chacha20::Nonce96;
use crate::error::{Error, Result};
use crate::session::{self, EncryptedMessage, SessionKey, OVERHEAD};
use crate::x25519::{Keypair, PublicKey};

/// Largest frame payload accepted, 16 MiB.
pub const MAX_FRAME_LEN: usize = 1 << 24;

pub const HEADER_LEN: usize = 4;

pub const DEFAULT_PORT: u16 = 4525;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

/// A length-prefixed transport envelope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub payload: Vec<u8>,
}

pub fn frame_encode(payload: &[u8]) -> Result<Vec<u8>> {
    if payload.len() > MAX_FRAME_LEN {
        return Err(Error::FrameTooLarge(payload.len() as u64));
    }
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
    out.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    out.extend_from_slice(payload);
    Ok(out)
}

/// Decodes one frame from the front of `buf`.
///
/// Returns `Ok(None)` when more bytes are needed, otherwise the frame and
/// the number of bytes it occupied. The length cap is checked as soon as
/// the header is available.
pub fn frame_decode(buf: &[u8]) -> Result<Option<(Frame, usize)>> {
    let Some(header) = buf.get(..HEADER_LEN) else {
        return Ok(None);
    };
    let len = u32::from_be_bytes(header.try_into().unwrap()) as usize;
    if len > MAX_FRAME_LEN {
        return Err(Error::FrameTooLarge(len as u64));
    }
    let end = HEADER_LEN + len;
    match buf.get(HEADER_LEN..end) {
        Some(payload) => Ok(Some((
            Frame {
                payload: payload.to_vec(),
            },
            end,
        ))),
        None => Ok(None),
    }
}

/// Reassembles frames from arbitrarily segmented input.
#[derive(Debug, Default)]
pub struct FrameDecoder {
    buf: Vec<u8>,
}

impl FrameDecoder {
    pub fn new() -> FrameDecoder {
        FrameDecoder::default()
    }

    pub fn push(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    pub fn next_frame(&mut self) -> Result<Option<Frame>> {
        match frame_decode(&self.buf)? {
            Some((frame, used)) => {
                self.buf.drain(..used);
                Ok(Some(frame))
            }
            None => Ok(None),
        }
    }

    pub fn buffered(&self) -> usize {
        self.buf.len()
    }
}

pub fn write_frame<W: Write + ?Sized>(w: &mut W, payload: &[u8]) -> Result<()> {
    w.write_all(&frame_encode(payload)?)?;
    w.flush()?;
    Ok(())
}

/// Reads one frame. A clean EOF before any header byte yields `Ok(None)`;
/// EOF inside a frame is `Disconnected`.
pub fn read_frame<R: Read + ?Sized>(r: &mut R) -> Result<Option<Frame>> {
    let mut header = [0u8; HEADER_LEN];
    let mut got = 0;
    while got < HEADER_LEN {
        match r.read(&mut header[got..]) {
            Ok(0) if got == 0 => return Ok(None),
            Ok(0) => return Err(Error::Disconnected),
            Ok(n) => got += n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
    let len = u32::from_be_bytes(header);
    if len as usize > MAX_FRAME_LEN {
        return Err(Error::FrameTooLarge(u64::from(len)));
    }
    let mut payload = vec![0u8; len as usize];
    r.read_exact(&mut payload).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => Error::Disconnected,
        _ => Error::Io(e),
    })?;
    Ok(Some(Frame { payload }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Initiator,
    Responder,
}

impl Role {
    /// Direction byte stamped on messages this role sends.
    pub fn direction(self) -> u8 {
        match self {
            Role::Initiator => 0x01,
            Role::Responder => 0x02,
        }
    }

    pub fn peer(self) -> Role {
        match self {
            Role::Initiator => Role::Responder,
            Role::Responder => Role::Initiator,
        }
    }
}

pub fn channel_nonce(direction: u8, counter: u64) -> Nonce96 {
    let mut n = [0u8; 12];
    n[0] = direction;
    n[4..].copy_from_slice(&counter.to_be_bytes());
    Nonce96(n)
}

/// Sending half: owns the outgoing counter.
#[derive(Debug)]
pub struct SendState {
    key: SessionKey,
    direction: u8,
    counter: u64,
}

impl SendState {
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Seals `plaintext` into a frame payload and advances the counter.
    pub fn seal(&mut self, plaintext: &[u8]) -> Result<Vec<u8>> {
        if self.counter == u64::MAX {
            return Err(Error::CounterExhausted);
        }
        let nonce = channel_nonce(self.direction, self.counter);
        let msg = session::encrypt_with_nonce(&self.key, plaintext, nonce)?;
        self.counter += 1;
        Ok(msg.to_bytes())
    }
}

/// Receiving half: owns the replay watermark.
#[derive(Debug)]
pub struct RecvState {
    key: SessionKey,
    peer_direction: u8,
    watermark: Option<u64>,
}

impl RecvState {
    pub fn watermark(&self) -> Option<u64> {
        self.watermark
    }

    /// Checks direction and freshness, verifies, decrypts, then advances
    /// the watermark.
    pub fn open(&mut self, payload: &[u8]) -> Result<Vec<u8>> {
        if payload.len() < OVERHEAD {
            return Err(Error::MalformedMessage("shorter than nonce + tag"));
        }
        let msg = EncryptedMessage::from_bytes(payload)?;
        let direction = msg.nonce.0[0];
        if direction != self.peer_direction {
            return Err(Error::WrongDirection(direction));
        }
        let counter = u64::from_be_bytes(msg.nonce.0[4..].try_into().unwrap());
        if self.watermark.is_some_and(|w| counter <= w) {
            return Err(Error::ReplayDetected(counter));
        }
        let plaintext = session::decrypt(&self.key, &msg)?;
        self.watermark = Some(counter);
        Ok(plaintext)
    }
}

/// Per-connection state after a successful handshake.
#[derive(Debug)]
pub struct ChannelState {
    role: Role,
    send: SendState,
    recv: RecvState,
}

impl ChannelState {
    pub fn new(role: Role, key: SessionKey) -> ChannelState {
        ChannelState {
            role,
            send: SendState {
                key: key.clone(),
                direction: role.direction(),
                counter: 0,
            },
            recv: RecvState {
                key,
                peer_direction: role.peer().direction(),
                watermark: None,
            },
        }
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn session_key(&self) -> &SessionKey {
        &self.send.key
    }

    pub fn send_counter(&self) -> u64 {
        self.send.counter
    }

    pub fn recv_watermark(&self) -> Option<u64> {
        self.recv.watermark
    }

    pub fn seal(&mut self, plaintext: &[u8]) -> Result<Vec<u8>> {
        self.send.seal(plaintext)
    }

    pub fn open(&mut self, payload: &[u8]) -> Result<Vec<u8>> {
        self.recv.open(payload)
    }

    /// Splits into halves that can be driven from separate threads.
    pub fn split(self) -> (SendState, RecvState) {
        (self.send, self.recv)
    }
}

fn expect_public_key(frame: Option<Frame>) -> Result<PublicKey> {
    let frame = frame.ok_or(Error::Disconnected)?;
    if frame.payload.len() != 32 {
        return Err(Error::HandshakeMalformed(frame.payload.len()));
    }
    PublicKey::from_slice(&frame.payload)
}

/// Exchanges public keys (initiator first) and derives the session key.
pub fn handshake<T: Read + Write + ?Sized>(
    transport: &mut T,
    own: &Keypair,
    role: Role,
) -> Result<ChannelState> {
    let peer = match role {
        Role::Initiator => {
            write_frame(transport, own.public.as_bytes())?;
            expect_public_key(read_frame(transport)?)?
        }
        Role::Responder => {
            let peer = expect_public_key(read_frame(transport)?)?;
            write_frame(transport, own.public.as_bytes())?;
            peer
        }
    };
    let key = session::establish(own, &peer)?;
    Ok(ChannelState::new(role, key))
}

/// A transport plus channel state. Any receive failure closes the channel.
pub struct Channel<T> {
    transport: T,
    state: ChannelState,
    closed: bool,
}

impl<T: Read + Write> Channel<T> {
    pub fn handshake(mut transport: T, own: &Keypair, role: Role) -> Result<Channel<T>> {
        let state = handshake(&mut transport, own, role)?;
        Ok(Channel {
            transport,
            state,
            closed: false,
        })
    }

    pub fn state(&self) -> &ChannelState {
        &self.state
    }

    pub fn transport_mut(&mut self) -> &mut T {
        &mut self.transport
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn send(&mut self, plaintext: &[u8]) -> Result<()> {
        if self.closed {
            return Err(Error::ChannelClosed);
        }
        let payload = self.state.seal(plaintext)?;
        write_frame(&mut self.transport, &payload)
    }

    /// Next message from the peer, or `Ok(None)` on a clean close.
    pub fn recv(&mut self) -> Result<Option<Vec<u8>>> {
        if self.closed {
            return Err(Error::ChannelClosed);
        }
        let result = read_frame(&mut self.transport)
            .and_then(|f| f.map(|f| self.state.open(&f.payload)).transpose());
        if !matches!(result, Ok(Some(_))) {
            self.closed = true;
        }
        result
    }

    pub fn into_parts(self) -> (T, ChannelState) {
        (self.transport, self.state)
    }
}

impl Channel<TcpStream> {
    /// Connects as initiator with the default timeouts.
    pub fn connect<A: ToSocketAddrs>(addr: A, own: &Keypair) -> Result<Channel<TcpStream>> {
        let stream = tcp_connect(addr, DEFAULT_TIMEOUT)?;
        Channel::handshake(stream, own, Role::Initiator)
    }

    /// Accepts one connection as responder.
    pub fn accept(listener: &TcpListener, own: &Keypair) -> Result<Channel<TcpStream>> {
        let (stream, _) = listener.accept()?;
        configure_tcp(&stream, DEFAULT_TIMEOUT)?;
        Channel::handshake(stream, own, Role::Responder)
    }
}

pub fn configure_tcp(stream: &TcpStream, timeout: Duration) -> io::Result<()> {
    stream.set_read_timeout(Some(timeout))?;
    stream.set_write_timeout(Some(timeout))?;
    stream.set_nodelay(true)
}

pub fn tcp_connect<A: ToSocketAddrs>(addr: A, timeout: Duration) -> Result<TcpStream> {
    let mut last = None;
    for a in addr.to_socket_addrs()? {
        match TcpStream::connect_timeout(&a, timeout) {
            Ok(s) => {
                configure_tcp(&s, timeout)?;
                return Ok(s);
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last
        .unwrap_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "no addresses"))
        .into())
}

/// Parses `host:port` or bare `host`, filling in the default port.
pub fn parse_addr(s: &str) -> Result<SocketAddr> {
    let with_port = if s
        .rsplit_once(':')
        .is_some_and(|(_, p)| p.parse::<u16>().is_ok())
    {
        s.to_string()
    } else {
        format!("{s}:{DEFAULT_PORT}")
    };
    with_port
        .to_socket_addrs()?
        .next()
        .ok_or(Error::InvalidParam("address did not resolve"))
}

#[derive(Debug, Default)]
struct Pipe {
    state: Mutex<PipeState>,
    ready: Condvar,
}

#[derive(Debug, Default)]
struct PipeState {
    data: VecDeque<u8>,
    closed: bool,
}

impl Pipe {
    fn close(&self) {
        self.state.lock().unwrap().closed = true;
        self.ready.notify_all();
    }
}

/// One end of an in-memory, ordered, bidirectional byte stream.
#[derive(Debug)]
pub struct MemoryStream {
    rx: Arc<Pipe>,
    tx: Arc<Pipe>,
}

/// Two connected in-memory endpoints.
pub fn memory_duplex() -> (MemoryStream, MemoryStream) {
    let a = Arc::new(Pipe::default());
    let b = Arc::new(Pipe::default());
    (
        MemoryStream {
            rx: a.clone(),
            tx: b.clone(),
        },
        MemoryStream { rx: b, tx: a },
    )
}

impl MemoryStream {
    /// Signals EOF to the peer; reads remain possible.
    pub fn shutdown_write(&self) {
        self.tx.close();
    }
}

impl Read for MemoryStream {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        if buf.is_empty() {
            return Ok(0);
        }
        let mut st = self.rx.state.lock().unwrap();
        while st.data.is_empty() && !st.closed {
            st = self.rx.ready.wait(st).unwrap();
        }
        let n = buf.len().min(st.data.len());
        for (dst, src) in buf.iter_mut().zip(st.data.drain(..n)) {
            *dst = src;
        }
        Ok(n)
    }
}

impl Write for MemoryStream {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let mut st = self.tx.state.lock().unwrap();
        if st.closed {
            return Err(io::ErrorKind::BrokenPipe.into());
        }
        st.data.extend(buf);
        self.tx.ready.notify_all();
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

impl Drop for MemoryStream {
    fn drop(&mut self) {
        self.tx.close();
        self.rx.close();
    }
}
