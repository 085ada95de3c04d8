//! ChaCha20 block function and stream cipher, RFC 7539 layout
//! (32-bit block counter, 96-bit nonce).

use crate::error::{Error, Result};

/// "expand 32-byte k" as four little-endian words.
pub const CONSTANTS: [u32; 4] = [0x6170_7865, 0x3320_646e, 0x7962_2d32, 0x6b20_6574];

pub const BLOCK_LEN: usize = 64;

pub const DOUBLE_ROUNDS: usize = 10;

/// A 256-bit ChaCha20 key.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct StreamKey(pub [u8; 32]);

/// A 96-bit nonce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Nonce96(pub [u8; 12]);

impl Nonce96 {
    pub fn from_slice(bytes: &[u8]) -> Result<Nonce96> {
        let n: [u8; 12] = bytes.try_into().map_err(|_| Error::InvalidLength {
            expected: 12,
            actual: bytes.len(),
        })?;
        Ok(Nonce96(n))
    }
}

/// The 4x4 word matrix: constants, key, counter, nonce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChaChaState {
    pub words: [u32; 16],
}

impl ChaChaState {
    pub fn new(key: &StreamKey, counter: u32, nonce: &Nonce96) -> ChaChaState {
        let mut words = [0u32; 16];
        words[..4].copy_from_slice(&CONSTANTS);
        for (w, chunk) in words[4..12].iter_mut().zip(key.0.chunks_exact(4)) {
            *w = u32::from_le_bytes(chunk.try_into().unwrap());
        }
        words[12] = counter;
        for (w, chunk) in words[13..].iter_mut().zip(nonce.0.chunks_exact(4)) {
            *w = u32::from_le_bytes(chunk.try_into().unwrap());
        }
        ChaChaState { words }
    }

    /// Applies one quarter round to the words at `a`, `b`, `c`, `d`.
    pub fn quarter_round(&mut self, a: usize, b: usize, c: usize, d: usize) -> Result<()> {
        let idx = [a, b, c, d];
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| idx[i] != idx[j]));
        if !distinct || idx.iter().any(|&i| i >= 16) {
            return Err(Error::InvalidIndex(a, b, c, d));
        }
        self.qr(a, b, c, d);
        Ok(())
    }

    #[inline(always)]
    fn qr(&mut self, a: usize, b: usize, c: usize, d: usize) {
        let x = &mut self.words;
        x[a] = x[a].wrapping_add(x[b]);
        x[d] = (x[d] ^ x[a]).rotate_left(16);
        x[c] = x[c].wrapping_add(x[d]);
        x[b] = (x[b] ^ x[c]).rotate_left(12);
        x[a] = x[a].wrapping_add(x[b]);
        x[d] = (x[d] ^ x[a]).rotate_left(8);
        x[c] = x[c].wrapping_add(x[d]);
        x[b] = (x[b] ^ x[c]).rotate_left(7);
    }

    /// One column round followed by one diagonal round.
    pub fn double_round(&mut self) {
        self.qr(0, 4, 8, 12);
        self.qr(1, 5, 9, 13);
        self.qr(2, 6, 10, 14);
        self.qr(3, 7, 11, 15);
        self.qr(0, 5, 10, 15);
        self.qr(1, 6, 11, 12);
        self.qr(2, 7, 8, 13);
        self.qr(3, 4, 9, 14);
    }

    /// Runs `n` double rounds without the final feed-forward addition.
    pub fn permute(&mut self, n: usize) {
        for _ in 0..n {
            self.double_round();
        }
    }

    /// Little-endian serialization of the 16 words.
    pub fn to_bytes(&self) -> [u8; BLOCK_LEN] {
        let mut out = [0u8; BLOCK_LEN];
        for (chunk, w) in out.chunks_exact_mut(4).zip(self.words) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8; BLOCK_LEN]) -> ChaChaState {
        let mut words = [0u32; 16];
        for (w, chunk) in words.iter_mut().zip(bytes.chunks_exact(4)) {
            *w = u32::from_le_bytes(chunk.try_into().unwrap());
        }
        ChaChaState { words }
    }
}

#[cfg(test)]
thread_local! {
    pub(crate) static BLOCKS_GENERATED: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
}

/// The ChaCha20 block function: 20 rounds plus the input state.
pub fn chacha20_block(key: &StreamKey, counter: u32, nonce: &Nonce96) -> [u8; BLOCK_LEN] {
    #[cfg(test)]
    BLOCKS_GENERATED.with(|n| n.set(n.get() + 1));

    let input = ChaChaState::new(key, counter, nonce);
    let mut x = input;
    x.permute(DOUBLE_ROUNDS);
    for (w, i) in x.words.iter_mut().zip(input.words) {
        *w = w.wrapping_add(i);
    }
    x.to_bytes()
}

/// Largest input accepted for a given starting counter.
pub fn max_stream_len(initial_counter: u32) -> u64 {
    (u64::from(u32::MAX) - u64::from(initial_counter) + 1) * BLOCK_LEN as u64
}

/// XORs `data` with the keystream starting at block `initial_counter`.
pub fn chacha20_xor(
    key: &StreamKey,
    nonce: &Nonce96,
    initial_counter: u32,
    data: &[u8],
) -> Result<Vec<u8>> {
    let mut out = data.to_vec();
    chacha20_xor_in_place(key, nonce, initial_counter, &mut out)?;
    Ok(out)
}

pub fn chacha20_xor_in_place(
    key: &StreamKey,
    nonce: &Nonce96,
    initial_counter: u32,
    data: &mut [u8],
) -> Result<()> {
    if data.len() as u64 > max_stream_len(initial_counter) {
        return Err(Error::MessageTooLong(data.len()));
    }
    for (i, chunk) in data.chunks_mut(BLOCK_LEN).enumerate() {
        // Cannot wrap: the length check bounds i.
        let counter = initial_counter + i as u32;
        let ks = chacha20_block(key, counter, nonce);
        for (b, k) in chunk.iter_mut().zip(ks) {
            *b ^= k;
        }
    }
    Ok(())
}
