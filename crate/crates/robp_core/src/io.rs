use crate::robp::{Robp, RobpError};

/// Canonical text form. Byte-stable: `from_text(to_text(p))` reproduces the
/// exact bytes on re-serialization.
///
/// ```text
/// robp 1
/// ambient 4
/// layers 1 3 3 2
/// start 0
/// accept 1
/// perm 2 0 3
/// trans 1 0
/// trans 0 1 1 2 2 0
/// trans 0 0 1 1 0 1
/// ```
///
/// One `trans` line per edge layer: for each vertex, its `-1`-target then
/// its `+1`-target. The `perm` line is present only when step `i` does not
/// read ambient variable `i`. `accept` may list nothing.
pub fn to_text(p: &Robp) -> String {
    let mut s = String::new();
    s.push_str("robp 1\n");
    s.push_str(&format!("ambient {}\n", p.ambient_n()));
    s.push_str("layers");
    for w in p.widths() {
        s.push_str(&format!(" {w}"));
    }
    s.push('\n');
    s.push_str(&format!("start {}\n", p.start()));
    s.push_str("accept");
    for v in p.accept() {
        s.push_str(&format!(" {v}"));
    }
    s.push('\n');
    if let Some(perm) = p.perm() {
        s.push_str("perm");
        for j in perm {
            s.push_str(&format!(" {j}"));
        }
        s.push('\n');
    }
    for i in 0..p.n() {
        s.push_str("trans");
        for v in 0..p.widths()[i] {
            let m = p.transition(i, v, -1);
            let pl = p.transition(i, v, 1);
            s.push_str(&format!(" {m} {pl}"));
        }
        s.push('\n');
    }
    s
}

fn parse_nums(line: &str, lineno: usize, tag: &str) -> Result<Vec<usize>, RobpError> {
    let rest = line
        .strip_prefix(tag)
        .ok_or_else(|| RobpError::Parse {
            line: lineno,
            msg: format!("expected `{tag}`"),
        })?;
    rest.split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| RobpError::Parse {
                line: lineno,
                msg: format!("bad number `{t}`"),
            })
        })
        .collect()
}

pub fn from_text(text: &str) -> Result<Robp, RobpError> {
    let mut lines = text.lines().enumerate();
    let mut next_line = |tag: &str| -> Result<(usize, String), RobpError> {
        match lines.next() {
            Some((no, l)) => Ok((no + 1, l.to_string())),
            None => Err(RobpError::Parse {
                line: 0,
                msg: format!("missing `{tag}` line"),
            }),
        }
    };
    let (no, header) = next_line("robp")?;
    if header != "robp 1" {
        return Err(RobpError::Parse {
            line: no,
            msg: "expected `robp 1`".into(),
        });
    }
    let (no, l) = next_line("ambient")?;
    let ambient = parse_nums(&l, no, "ambient")?;
    let [ambient_n] = ambient[..] else {
        return Err(RobpError::Parse {
            line: no,
            msg: "ambient takes one number".into(),
        });
    };
    let (no, l) = next_line("layers")?;
    let widths: Vec<u8> = parse_nums(&l, no, "layers")?
        .into_iter()
        .map(|w| w as u8)
        .collect();
    let (no, l) = next_line("start")?;
    let start_v = parse_nums(&l, no, "start")?;
    let [start] = start_v[..] else {
        return Err(RobpError::Parse {
            line: no,
            msg: "start takes one number".into(),
        });
    };
    let (no, l) = next_line("accept")?;
    let accept: Vec<u8> = parse_nums(&l, no, "accept")?
        .into_iter()
        .map(|v| v as u8)
        .collect();
    let n = widths.len().saturating_sub(1);
    let mut perm: Option<Vec<usize>> = None;
    let mut trans: Vec<Vec<[u8; 2]>> = Vec::with_capacity(n);
    let mut pending: Option<(usize, String)> = None;
    if n > 0 {
        let (no, l) = next_line("perm or trans")?;
        if l.starts_with("perm") {
            perm = Some(parse_nums(&l, no, "perm")?);
        } else {
            pending = Some((no, l));
        }
    }
    for i in 0..n {
        let (no, l) = match pending.take() {
            Some(x) => x,
            None => next_line("trans")?,
        };
        let nums = parse_nums(&l, no, "trans")?;
        if nums.len() != 2 * widths[i] as usize {
            return Err(RobpError::Parse {
                line: no,
                msg: format!("expected {} targets", 2 * widths[i]),
            });
        }
        trans.push(
            nums.chunks(2)
                .map(|c| [c[0] as u8, c[1] as u8])
                .collect(),
        );
    }
    if let Some((no, _)) = lines.next() {
        return Err(RobpError::Parse {
            line: no + 1,
            msg: "trailing content".into(),
        });
    }
    Robp::new(widths, trans, start as u8, accept, ambient_n, perm)
}
