//! serve / connect: handshake, then stdin lines out and peer messages to
//! stdout, one thread per direction.

use std::io::{self, BufRead, Write};
use std::net::{Shutdown, TcpListener, TcpStream};
use std::path::Path;
use std::thread;

use ejafa_core::channel::{
    handshake, parse_addr, read_frame, tcp_connect, write_frame, DEFAULT_TIMEOUT,
};
use ejafa_core::x25519::random_keypair;
use ejafa_core::{Keypair, Result, Role};

use crate::commands::load_keypair;

fn own_keypair(key: Option<&Path>) -> Result<Keypair> {
    match key {
        Some(p) => load_keypair(p),
        None => Ok(random_keypair(&mut rand::rngs::OsRng)),
    }
}

pub fn serve(addr: &str, key: Option<&Path>) -> Result<()> {
    let own = own_keypair(key)?;
    let listener = TcpListener::bind(parse_addr(addr)?)?;
    eprintln!("listening on {}", listener.local_addr()?);
    let (stream, peer) = listener.accept()?;
    eprintln!("connection from {peer}");
    stream.set_nodelay(true)?;
    stream.set_read_timeout(Some(DEFAULT_TIMEOUT))?;
    relay(stream, &own, Role::Responder)
}

pub fn connect(addr: &str, key: Option<&Path>) -> Result<()> {
    let own = own_keypair(key)?;
    let stream = tcp_connect(parse_addr(addr)?, DEFAULT_TIMEOUT)?;
    relay(stream, &own, Role::Initiator)
}

fn relay(mut stream: TcpStream, own: &Keypair, role: Role) -> Result<()> {
    let state = handshake(&mut stream, own, role)?;
    // Sessions may idle indefinitely once established.
    stream.set_read_timeout(None)?;
    eprintln!("session established");
    let (mut send, mut recv) = state.split();

    let mut reader = stream.try_clone()?;
    let inbound = thread::spawn(move || {
        let result = (|| -> Result<()> {
            let mut out = io::stdout().lock();
            while let Some(frame) = read_frame(&mut reader)? {
                let msg = recv.open(&frame.payload)?;
                out.write_all(&msg)?;
                out.write_all(b"\n")?;
                out.flush()?;
            }
            Ok(())
        })();
        // Don't wait for stdin once the peer can no longer be trusted.
        if let Err(e) = result {
            crate::fail(&e);
        }
    });

    let mut writer = io::BufWriter::new(&stream);
    let mut line = Vec::new();
    let mut stdin = io::BufReader::with_capacity(1 << 16, io::stdin().lock());
    let outbound = (|| -> Result<()> {
        loop {
            line.clear();
            if stdin.read_until(b'\n', &mut line)? == 0 {
                break;
            }
            if line.last() == Some(&b'\n') {
                line.pop();
            }
            write_frame(&mut writer, &send.seal(&line)?)?;
            // Flush per line only when no more input is already buffered.
            if stdin.buffer().is_empty() {
                writer.flush()?;
            }
        }
        writer.flush()?;
        stream.shutdown(Shutdown::Write)?;
        Ok(())
    })();

    outbound?;
    inbound.join().expect("receiver thread panicked");
    Ok(())
}
