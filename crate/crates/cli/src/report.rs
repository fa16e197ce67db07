use std::io::IsTerminal;

use rh_core::USeries;
use serde_json::{json, Value};

pub const OK: u8 = 0;
pub const PARSE_ERROR: u8 = 1;
pub const NORMALIZATION_ERROR: u8 = 2;
pub const NON_TAME: u8 = 3;
pub const NO_STRONG_FRAME: u8 = 4;
pub const FLATNESS_FAILED: u8 = 5;
pub const CHECK_FAILED: u8 = 6;

/// Serializes through `Value`, whose maps are ordered, so equal reports
/// print byte-identically.
pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values always serialize"));
}

pub fn tool() -> Value {
    json!({ "name": "rh", "version": env!("CARGO_PKG_VERSION") })
}

pub struct Style {
    color: bool,
}

impl Style {
    /// `RH_COLOR=1` forces ANSI colors, `RH_COLOR=0` disables them;
    /// otherwise they follow whether stdout is a terminal.
    pub fn from_env() -> Self {
        let color = match std::env::var("RH_COLOR").as_deref() {
            Ok("1") => true,
            Ok("0") => false,
            _ => std::io::stdout().is_terminal(),
        };
        Self { color }
    }

    pub fn good(&self, text: &str) -> String {
        self.paint("32", text)
    }

    pub fn bad(&self, text: &str) -> String {
        self.paint("31", text)
    }

    pub fn dim(&self, text: &str) -> String {
        self.paint("2", text)
    }

    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

/// The first `k` nonzero terms of a series, for summaries.
pub fn head(s: &USeries, k: usize) -> String {
    let terms: Vec<String> = s
        .terms()
        .take(k)
        .map(|(e, c)| match e {
            0 => c.to_string(),
            1 => format!("({c})*s"),
            _ => format!("({c})*s^{e}"),
        })
        .collect();
    let more = s.terms().count() > k;
    match (terms.is_empty(), more) {
        (true, _) => format!("0 mod s^{}", s.order()),
        (false, true) => format!("{} + ... mod s^{}", terms.join(" + "), s.order()),
        (false, false) => format!("{} mod s^{}", terms.join(" + "), s.order()),
    }
}

pub fn error(kind: &str, message: impl std::fmt::Display, json: bool) {
    if json {
        print_json(&json!({ "error": { "kind": kind, "message": message.to_string() }, "tool": tool() }));
    }
    eprintln!("rh: {kind}: {message}");
}
