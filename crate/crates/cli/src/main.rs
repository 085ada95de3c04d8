mod chat;
mod commands;
mod style;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ejafa_core::channel::DEFAULT_PORT;
use ejafa_core::Error;

#[derive(Parser)]
#[command(
    name = "ejafa",
    version,
    about = "X25519 + ChaCha20-Poly1305 secure channel tool"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a keypair: writes <out>.priv and <out>.pub, prints the public key.
    Keygen {
        /// Output path prefix.
        #[arg(long)]
        out: PathBuf,
        /// TESTING ONLY: use these 32 bytes (hex) instead of fresh entropy.
        #[arg(long, value_name = "HEX")]
        entropy_hex: Option<String>,
    },
    /// Encrypt a file for a peer.
    Encrypt {
        #[command(flatten)]
        io: FileArgs,
        /// TESTING ONLY: use this 12-byte nonce (hex) instead of a random one.
        #[arg(long, value_name = "HEX")]
        nonce_hex: Option<String>,
    },
    /// Decrypt a file from a peer.
    Decrypt {
        #[command(flatten)]
        io: FileArgs,
    },
    /// Accept one connection and relay stdin/stdout over the channel.
    Serve {
        #[command(flatten)]
        net: NetArgs,
    },
    /// Connect to a server and relay stdin/stdout over the channel.
    Connect {
        #[command(flatten)]
        net: NetArgs,
    },
    /// Print the ciphertext-expansion sweep as CSV.
    Bench {
        /// Comma-separated plaintext sizes; K and M suffixes are powers of 1024.
        #[arg(long, value_delimiter = ',', value_parser = commands::parse_size)]
        sizes: Option<Vec<usize>>,
        /// Encryptions per size.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        reps: u32,
    },
    /// Recompute the shipped known-answer vectors.
    Vectors,
}

#[derive(Args)]
struct FileArgs {
    /// Own private key file.
    #[arg(long)]
    key: PathBuf,
    /// Peer public key file.
    #[arg(long)]
    peer: PathBuf,
    /// Input file (default: stdin).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NetArgs {
    /// host:port; the port defaults to 4525.
    #[arg(long, default_value_t = format!("127.0.0.1:{DEFAULT_PORT}"))]
    addr: String,
    /// Own private key file (default: a fresh ephemeral key).
    #[arg(long)]
    key: Option<PathBuf>,
}

/// 0 ok, 1 other, 2 authentication, 3 malformed input, 4 IO.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::AuthenticationFailed | Error::ReplayDetected(_) | Error::WrongDirection(_) => 2,
        Error::InvalidLength { .. }
        | Error::InvalidParam(_)
        | Error::MalformedMessage(_)
        | Error::HandshakeMalformed(_)
        | Error::FrameTooLarge(_)
        | Error::MessageTooLong(_)
        | Error::LowOrderPeerKey => 3,
        Error::Io(_) | Error::Disconnected => 4,
        _ => 1,
    }
}

fn run(cli: Cli) -> ejafa_core::Result<ExitCode> {
    match cli.command {
        Command::Keygen { out, entropy_hex } => commands::keygen(&out, entropy_hex.as_deref()),
        Command::Encrypt { io, nonce_hex } => commands::encrypt(
            &io.key,
            &io.peer,
            io.input.as_deref(),
            io.out.as_deref(),
            nonce_hex.as_deref(),
        ),
        Command::Decrypt { io } => {
            commands::decrypt(&io.key, &io.peer, io.input.as_deref(), io.out.as_deref())
        }
        Command::Serve { net } => chat::serve(&net.addr, net.key.as_deref()),
        Command::Connect { net } => chat::connect(&net.addr, net.key.as_deref()),
        Command::Bench { sizes, reps } => commands::bench(sizes, reps as usize),
        Command::Vectors => {
            return Ok(if commands::vectors()? {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
    .map(|()| ExitCode::SUCCESS)
}

/// Reports `e` and exits with its code.
fn fail(e: &Error) -> ! {
    style::error(&e.to_string());
    std::process::exit(exit_code(e).into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Keep 2 reserved for authentication failures.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}
