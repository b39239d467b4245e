//! The `zcode v1` text format.
//!
//! ```text
//! # zcode v1
//! n=4 t=1 M=2
//! 0000
//! 0011
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::code::Code;
use super::word::Word;
use crate::error::{Error, Result};

const MAGIC: &str = "# zcode v1";

pub fn format_code(code: &Code) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "n={} t={} M={}", code.n(), code.t(), code.len());
    for w in code.words() {
        let _ = writeln!(out, "{}", w);
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_code(text: &str) -> Result<Code> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim_end() == MAGIC => {}
        _ => return Err(parse_err(1, format!("expected header {:?}", MAGIC))),
    }
    let (hline, header) = lines.next().ok_or_else(|| parse_err(2, "missing parameter line"))?;
    let (mut n, mut t, mut m) = (None, None, None);
    for field in header.split_whitespace() {
        let (key, val) = field
            .split_once('=')
            .ok_or_else(|| parse_err(hline, format!("bad field {:?}", field)))?;
        let val: usize = val
            .parse()
            .map_err(|_| parse_err(hline, format!("bad integer in {:?}", field)))?;
        match key {
            "n" => n = Some(val),
            "t" => t = Some(val as u32),
            "M" => m = Some(val),
            _ => return Err(parse_err(hline, format!("unknown field {:?}", key))),
        }
    }
    let (n, t, m) = match (n, t, m) {
        (Some(n), Some(t), Some(m)) => (n, t, m),
        _ => return Err(parse_err(hline, "expected n=<int> t=<int> M=<int>")),
    };

    let mut words: Vec<Word> = Vec::with_capacity(m);
    let mut last_line = hline;
    for (ln, line) in lines {
        last_line = ln;
        if line.is_empty() {
            continue;
        }
        if line.len() != n {
            return Err(parse_err(ln, format!("expected {} characters, found {}", n, line.len())));
        }
        if let Some(c) = line.chars().find(|c| *c != '0' && *c != '1') {
            return Err(parse_err(ln, format!("malformed bit character {:?}", c)));
        }
        let w: Word = line.parse().map_err(|e: Error| parse_err(ln, e.to_string()))?;
        words.push(w);
    }
    let mut order: Vec<(Word, usize)> = words.iter().copied().zip(hline + 1..).collect();
    order.sort();
    if let Some(p) = order.windows(2).find(|p| p[0].0 == p[1].0) {
        return Err(parse_err(p[1].1.max(p[0].1), format!("duplicate codeword {}", p[0].0)));
    }
    if words.len() != m {
        return Err(parse_err(last_line, format!("header says M={} but {} codewords found", m, words.len())));
    }
    Code::new(n, t, words)
}

pub fn read_code(path: impl AsRef<Path>) -> Result<Code> {
    parse_code(&fs::read_to_string(path)?)
}

pub fn write_code(code: &Code, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_code(code))?;
    Ok(())
}
