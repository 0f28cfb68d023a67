//! Human-readable program listing, losslessly convertible to and from the
//! canonical text format.
//!
//! ```text
//! robp listing v1
//! ambient 4
//! widths 1 2 2
//! start 0
//! accept 1
//! order 1 0
//! step 0 reads x1
//!   v0: -1 -> v1, +1 -> v0
//! step 1 reads x0
//!   v0: -1 -> v1, +1 -> v0
//!   v1: -1 -> v0, +1 -> v1
//! ```
//!
//! The `order` line appears only when the read order is not the identity.

use robp_core::Robp;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListingError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ListingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "listing parse error at line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for ListingError {}

pub fn to_listing(p: &Robp) -> String {
    let mut out = String::from("robp listing v1\n");
    out.push_str(&format!("ambient {}\n", p.ambient_n()));
    let widths: Vec<String> = p.widths().iter().map(|w| w.to_string()).collect();
    out.push_str(&format!("widths {}\n", widths.join(" ")));
    out.push_str(&format!("start {}\n", p.start()));
    let accept: Vec<String> = p.accept().iter().map(|v| v.to_string()).collect();
    out.push_str(&format!("accept {}\n", accept.join(" ")));
    if let Some(order) = p.perm() {
        let order: Vec<String> = order.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("order {}\n", order.join(" ")));
    }
    for i in 0..p.n() {
        out.push_str(&format!("step {} reads x{}\n", i, p.read_at(i)));
        for v in 0..p.widths()[i] {
            let m = p.transition(i, v, -1);
            let pl = p.transition(i, v, 1);
            out.push_str(&format!("  v{v}: -1 -> v{m}, +1 -> v{pl}\n"));
        }
    }
    out
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    peeked: Option<(usize, &'a str)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        Lines {
            iter: text.lines().enumerate(),
            peeked: None,
        }
    }

    /// Next non-blank line as (1-based number, trimmed text).
    fn next(&mut self) -> Option<(usize, &'a str)> {
        if let Some(p) = self.peeked.take() {
            return Some(p);
        }
        for (i, raw) in self.iter.by_ref() {
            let t = raw.trim();
            if !t.is_empty() {
                return Some((i + 1, t));
            }
        }
        None
    }

    fn peek(&mut self) -> Option<(usize, &'a str)> {
        if self.peeked.is_none() {
            self.peeked = self.next();
        }
        self.peeked
    }
}

fn err(line: usize, msg: impl Into<String>) -> ListingError {
    ListingError {
        line,
        msg: msg.into(),
    }
}

fn expect_tagged<'a>(lines: &mut Lines<'a>, tag: &str) -> Result<(usize, &'a str), ListingError> {
    let (ln, t) = lines
        .next()
        .ok_or_else(|| err(0, format!("missing {tag} line")))?;
    let rest = t
        .strip_prefix(tag)
        .ok_or_else(|| err(ln, format!("expected {tag} line, found {t:?}")))?;
    Ok((ln, rest.trim()))
}

fn parse_nums<T: std::str::FromStr>(ln: usize, text: &str) -> Result<Vec<T>, ListingError> {
    text.split_whitespace()
        .map(|w| w.parse().map_err(|_| err(ln, format!("bad number {w:?}"))))
        .collect()
}

pub fn from_listing(text: &str) -> Result<Robp, ListingError> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next().ok_or_else(|| err(0, "empty listing"))?;
    if header != "robp listing v1" {
        return Err(err(ln, "expected header \"robp listing v1\""));
    }
    let (ln, ambient) = expect_tagged(&mut lines, "ambient")?;
    let ambient: usize = ambient
        .parse()
        .map_err(|_| err(ln, "bad ambient arity"))?;
    let (ln, widths) = expect_tagged(&mut lines, "widths")?;
    let widths: Vec<u8> = parse_nums(ln, widths)?;
    if widths.is_empty() {
        return Err(err(ln, "widths line is empty"));
    }
    let n = widths.len() - 1;
    let (ln, start) = expect_tagged(&mut lines, "start")?;
    let start: u8 = start.parse().map_err(|_| err(ln, "bad start vertex"))?;
    let (ln, accept) = expect_tagged(&mut lines, "accept")?;
    let accept: Vec<u8> = parse_nums(ln, accept)?;
    let mut perm: Option<Vec<usize>> = None;
    if let Some((ln, t)) = lines.peek() {
        if let Some(rest) = t.strip_prefix("order ") {
            perm = Some(parse_nums(ln, rest)?);
            lines.next();
        }
    }
    let mut trans: Vec<Vec<[u8; 2]>> = Vec::with_capacity(n);
    for i in 0..n {
        let (ln, t) = lines
            .next()
            .ok_or_else(|| err(0, format!("missing step {i}")))?;
        let want = format!("step {i} reads x");
        let var: usize = t
            .strip_prefix(&want)
            .ok_or_else(|| err(ln, format!("expected {want}<var>, found {t:?}")))?
            .parse()
            .map_err(|_| err(ln, format!("bad variable on step {i}")))?;
        let expected = perm.as_ref().map_or(i, |p| p.get(i).copied().unwrap_or(usize::MAX));
        if var != expected {
            return Err(err(ln, format!("step {i} reads x{var}, order says x{expected}")));
        }
        let next_w = widths[i + 1];
        let mut rows = Vec::with_capacity(widths[i] as usize);
        for v in 0..widths[i] {
            let (ln, t) = lines
                .next()
                .ok_or_else(|| err(0, format!("missing row for step {i} vertex {v}")))?;
            let want = format!("v{v}: -1 -> v");
            let rest = t
                .strip_prefix(&want)
                .ok_or_else(|| err(ln, format!("step {i} vertex {v}: expected {want}...")))?;
            let (m, rest) = rest
                .split_once(", +1 -> v")
                .ok_or_else(|| err(ln, format!("step {i} vertex {v}: missing +1 target")))?;
            let m: u8 = m
                .parse()
                .map_err(|_| err(ln, format!("step {i} vertex {v}: bad -1 target")))?;
            let pl: u8 = rest
                .parse()
                .map_err(|_| err(ln, format!("step {i} vertex {v}: bad +1 target")))?;
            for t in [m, pl] {
                if t >= next_w {
                    return Err(err(
                        ln,
                        format!("step {i} vertex {v}: target v{t} out of range (next width {next_w})"),
                    ));
                }
            }
            rows.push([m, pl]);
        }
        trans.push(rows);
    }
    if let Some((ln, t)) = lines.next() {
        return Err(err(ln, format!("trailing content {t:?}")));
    }
    Robp::new(widths, trans, start, accept, ambient, perm)
        .map_err(|e| err(0, format!("invalid program: {e}")))
}
