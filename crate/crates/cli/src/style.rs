//! Terminal styling. Off when the stream is not a terminal or
//! `EJAFA_NO_COLOR` is set.

use std::io::{self, IsTerminal};

const RED: &str = "1;31";
const GREEN: &str = "1;32";
const YELLOW: &str = "1;33";

fn enabled(is_terminal: bool) -> bool {
    is_terminal && std::env::var_os("EJAFA_NO_COLOR").is_none()
}

fn paint(text: &str, code: &str, on: bool) -> String {
    if on {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

pub fn pass_fail(ok: bool) -> String {
    let on = enabled(io::stdout().is_terminal());
    if ok {
        paint("PASS", GREEN, on)
    } else {
        paint("FAIL", RED, on)
    }
}

pub fn warn(msg: &str) {
    let on = enabled(io::stderr().is_terminal());
    eprintln!("{} {msg}", paint("WARNING:", YELLOW, on));
}

pub fn error(msg: &str) {
    let on = enabled(io::stderr().is_terminal());
    eprintln!("{} {msg}", paint("error:", RED, on));
}
