use std::ffi::OsString;
use std::fs::{self, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use ejafa_core::metrics::{self, default_sizes, CSV_HEADER};
use ejafa_core::session::{self, decrypt_bytes, encrypt_with_nonce, MAX_PLAINTEXT_LEN};
use ejafa_core::vectors::{self, run_checks};
use ejafa_core::x25519::{generate_keypair, parse_key_file, random_keypair, x25519};
use ejafa_core::{Error, Keypair, Nonce96, PublicKey, Result, SessionKey, BASEPOINT};
use rand::RngCore;

use crate::style;

fn with_path(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| with_path(path, e))
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>> {
    match path {
        Some(p) => read_file(p),
        None => {
            let mut buf = Vec::new();
            io::stdin().lock().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| with_path(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn decode_fixed<const N: usize>(hex_str: &str, what: &'static str) -> Result<[u8; N]> {
    let mut out = [0u8; N];
    hex::decode_to_slice(hex_str.trim(), &mut out).map_err(|_| Error::InvalidParam(what))?;
    Ok(out)
}

pub fn load_keypair(path: &Path) -> Result<Keypair> {
    Ok(generate_keypair(&parse_key_file(&read_file(path)?)?))
}

pub fn load_public(path: &Path) -> Result<PublicKey> {
    Ok(PublicKey(parse_key_file(&read_file(path)?)?))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(path.as_os_str());
    s.push(suffix);
    s.into()
}

fn write_private(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut opts = OpenOptions::new();
    opts.write(true).create(true).truncate(true);
    #[cfg(unix)]
    std::os::unix::fs::OpenOptionsExt::mode(&mut opts, 0o600);
    opts.open(path)
        .and_then(|mut f| f.write_all(bytes))
        .map_err(|e| with_path(path, e))
}

pub fn keygen(out: &Path, entropy_hex: Option<&str>) -> Result<()> {
    let keypair = match entropy_hex {
        Some(h) => {
            style::warn("--entropy-hex is for testing only; this key is NOT secret.");
            generate_keypair(&decode_fixed(h, "--entropy-hex must be 64 hex characters")?)
        }
        None => random_keypair(&mut rand::rngs::OsRng),
    };
    if x25519(&keypair.private, &BASEPOINT) != keypair.public.0 {
        return Err(Error::InvalidParam(
            "generated keypair failed its self-check",
        ));
    }
    write_private(&with_suffix(out, ".priv"), keypair.private.raw())?;
    let pub_path = with_suffix(out, ".pub");
    fs::write(&pub_path, keypair.public.0).map_err(|e| with_path(&pub_path, e))?;
    println!("{}", hex::encode(keypair.public.0));
    Ok(())
}

fn session_key(key: &Path, peer: &Path) -> Result<SessionKey> {
    let own = load_keypair(key)?;
    session::establish(&own, &load_public(peer)?)
}

pub fn encrypt(
    key: &Path,
    peer: &Path,
    input: Option<&Path>,
    out: Option<&Path>,
    nonce_hex: Option<&str>,
) -> Result<()> {
    let key = session_key(key, peer)?;
    let nonce = match nonce_hex {
        Some(h) => {
            style::warn("--nonce-hex is for testing only; reusing a nonce breaks confidentiality.");
            Nonce96(decode_fixed(h, "--nonce-hex must be 24 hex characters")?)
        }
        None => {
            let mut n = [0u8; 12];
            rand::rngs::OsRng.fill_bytes(&mut n);
            Nonce96(n)
        }
    };
    let plaintext = read_input(input)?;
    if plaintext.len() > MAX_PLAINTEXT_LEN {
        return Err(Error::MessageTooLong(plaintext.len()));
    }
    write_output(
        out,
        &encrypt_with_nonce(&key, &plaintext, nonce)?.to_bytes(),
    )
}

pub fn decrypt(key: &Path, peer: &Path, input: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let key = session_key(key, peer)?;
    let plaintext = decrypt_bytes(&key, &read_input(input)?)?;
    write_output(out, &plaintext)
}

/// Parses `4096`, `4K`, `4KiB`, `1M`, `1MiB`.
pub fn parse_size(s: &str) -> std::result::Result<usize, String> {
    let t = s.trim();
    let (digits, mult) = if let Some(d) = t.strip_suffix("KiB").or(t.strip_suffix(['K', 'k'])) {
        (d, 1024)
    } else if let Some(d) = t.strip_suffix("MiB").or(t.strip_suffix(['M', 'm'])) {
        (d, 1024 * 1024)
    } else {
        (t, 1)
    };
    let n: usize = digits
        .trim()
        .parse()
        .map_err(|_| format!("invalid size '{s}'"))?;
    match n.checked_mul(mult) {
        Some(0) => Err("sizes must be positive".into()),
        Some(v) if v <= MAX_PLAINTEXT_LEN => Ok(v),
        _ => Err(format!("size '{s}' exceeds {MAX_PLAINTEXT_LEN} bytes")),
    }
}

pub fn bench(sizes: Option<Vec<usize>>, reps: usize) -> Result<()> {
    let mut rng = rand::rngs::OsRng;
    let a = random_keypair(&mut rng);
    let b = random_keypair(&mut rng);
    let key = session::establish(&a, &b.public)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{CSV_HEADER}")?;
    for size in sizes.unwrap_or_else(default_sizes) {
        let record = metrics::measure(&key, size, reps, &mut rng)?;
        writeln!(out, "{}", record.csv_row())?;
    }
    out.flush()?;
    Ok(())
}

/// Prints every shipped vector with its check result. Returns whether all
/// passed.
pub fn vectors() -> Result<bool> {
    let x = vectors::parse(vectors::X25519_FILE);
    let s = vectors::parse(vectors::SESSION_FILE);
    type Inputs<'a> = Vec<(&'a str, &'a Vec<u8>)>;
    let inputs: [(&str, Inputs); 3] = [
        (
            "x25519",
            vec![
                ("alice_private", &x["alice_private"]),
                ("bob_private", &x["bob_private"]),
            ],
        ),
        (
            "session",
            vec![("nonce", &s["nonce"]), ("plaintext", &s["plaintext"])],
        ),
        ("primitives", vec![]),
    ];
    let checks = run_checks();
    let mut out = io::stdout().lock();
    for (section, given) in &inputs {
        writeln!(out, "[{section}]")?;
        for (name, value) in given {
            writeln!(out, "{name:<20} {}", hex::encode(value))?;
        }
        for c in checks.iter().filter(|c| c.section == *section) {
            writeln!(
                out,
                "{:<20} {} {}",
                c.name,
                hex::encode(&c.expected),
                style::pass_fail(c.passed())
            )?;
            if !c.passed() {
                writeln!(out, "{:<20} {} (computed)", "", hex::encode(&c.actual))?;
            }
        }
        writeln!(out)?;
    }
    let passed = checks.iter().filter(|c| c.passed()).count();
    writeln!(
        out,
        "{passed}/{} vectors {}",
        checks.len(),
        style::pass_fail(passed == checks.len())
    )?;
    out.flush()?;
    Ok(passed == checks.len())
}
