use std::fmt;

use rand::Rng;
use robp_core::{Dyadic, Robp, RobpError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RestrictError {
    AmbientMismatch { expected: usize, got: usize },
    SignShape,
    NotSubset,
    ConfigInfeasible { what: String },
    Program(RobpError),
    Parse { msg: String },
}

impl fmt::Display for RestrictError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RestrictError::AmbientMismatch { expected, got } => {
                write!(f, "ambient mismatch: expected {expected}, got {got}")
            }
            RestrictError::SignShape => write!(f, "sign vector shape mismatch"),
            RestrictError::NotSubset => {
                write!(f, "composition requires the later alive set to be a subset")
            }
            RestrictError::ConfigInfeasible { what } => write!(f, "config infeasible: {what}"),
            RestrictError::Program(e) => write!(f, "program error: {e}"),
            RestrictError::Parse { msg } => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for RestrictError {}

impl From<RobpError> for RestrictError {
    fn from(e: RobpError) -> Self {
        RestrictError::Program(e)
    }
}

/// A partial assignment: coordinates in the alive set stay free, the rest
/// carry fixed signs. The alive set is always the KEPT set; constructors
/// that sample an assigned set store its complement here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    n: usize,
    alive: u64,
    /// `signs[i]` is ±1 exactly when coordinate `i` is assigned, else 0.
    signs: Vec<i8>,
}

impl Restriction {
    pub fn new(n: usize, alive: u64, signs: Vec<i8>) -> Result<Restriction, RestrictError> {
        if n > 64 || (n < 64 && alive >> n != 0) || signs.len() != n {
            return Err(RestrictError::SignShape);
        }
        for (i, &s) in signs.iter().enumerate() {
            let ok = if alive >> i & 1 == 1 { s == 0 } else { s == 1 || s == -1 };
            if !ok {
                return Err(RestrictError::SignShape);
            }
        }
        Ok(Restriction { n, alive, signs })
    }

    /// Everything alive.
    pub fn full(n: usize) -> Restriction {
        assert!(n <= 64);
        let alive = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Restriction {
            n,
            alive,
            signs: vec![0; n],
        }
    }

    /// Everything assigned.
    pub fn assign_all(signs: Vec<i8>) -> Result<Restriction, RestrictError> {
        let n = signs.len();
        Restriction::new(n, 0, signs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alive_mask(&self) -> u64 {
        self.alive
    }

    pub fn alive_count(&self) -> u32 {
        self.alive.count_ones()
    }

    pub fn is_alive(&self, i: usize) -> bool {
        self.alive >> i & 1 == 1
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Assigned values as a sign mask (bit set = -1); alive bits are 0.
    pub fn sign_mask(&self) -> u64 {
        let mut m = 0u64;
        for (i, &s) in self.signs.iter().enumerate() {
            if s < 0 {
                m |= 1 << i;
            }
        }
        m
    }

    /// Merge free values `x` (as a sign mask) with the stored assignment.
    pub fn sel_mask(&self, x: u64) -> u64 {
        (x & self.alive) | self.sign_mask()
    }

    /// Kill the coordinates that `round` assigns, keeping existing
    /// assignments. No subset requirement: `round` may assign anywhere, only
    /// its values on our alive set take effect.
    pub fn refine(&self, round: &Restriction) -> Result<Restriction, RestrictError> {
        if round.n != self.n {
            return Err(RestrictError::AmbientMismatch {
                expected: self.n,
                got: round.n,
            });
        }
        let alive = self.alive & round.alive;
        let signs = (0..self.n)
            .map(|i| {
                if !self.is_alive(i) {
                    self.signs[i]
                } else if !round.is_alive(i) {
                    round.signs[i]
                } else {
                    0
                }
            })
            .collect();
        Ok(Restriction {
            n: self.n,
            alive,
            signs,
        })
    }

    /// `later ∘ earlier`: `later` must keep a subset of `earlier`'s alive set.
    /// The merged assignment takes `earlier`'s values where `earlier` already
    /// assigned and `later`'s on the newly killed coordinates.
    pub fn compose(later: &Restriction, earlier: &Restriction) -> Result<Restriction, RestrictError> {
        if later.alive & !earlier.alive != 0 {
            return Err(RestrictError::NotSubset);
        }
        earlier.refine(later)
    }

    /// One-line form: `restriction <n> <cells>` where each cell is `.` for
    /// alive, `+`/`-` for an assigned sign.
    pub fn to_text(&self) -> String {
        let cells: String = (0..self.n)
            .map(|i| match self.signs[i] {
                0 => '.',
                1 => '+',
                _ => '-',
            })
            .collect();
        format!("restriction {} {}\n", self.n, cells)
    }

    pub fn from_text(s: &str) -> Result<Restriction, RestrictError> {
        let mut it = s.split_whitespace();
        let parse = |msg: &str| RestrictError::Parse { msg: msg.into() };
        if it.next() != Some("restriction") {
            return Err(parse("missing restriction header"));
        }
        let n: usize = it
            .next()
            .ok_or_else(|| parse("missing length"))?
            .parse()
            .map_err(|_| parse("bad length"))?;
        let cells = if n == 0 {
            ""
        } else {
            it.next().ok_or_else(|| parse("missing cells"))?
        };
        if it.next().is_some() {
            return Err(parse("trailing content"));
        }
        if cells.len() != n {
            return Err(parse("cell count mismatch"));
        }
        let mut alive = 0u64;
        let mut signs = vec![0i8; n];
        for (i, c) in cells.chars().enumerate() {
            match c {
                '.' => alive |= 1 << i,
                '+' => signs[i] = 1,
                '-' => signs[i] = -1,
                _ => return Err(parse("bad cell")),
            }
        }
        Restriction::new(n, alive, signs)
    }
}

/// Merge per-coordinate: take from `x` on the alive set, from `y` off it.
/// `x` lists signs for alive coordinates in ascending index order, `y` for
/// the dead ones likewise.
pub fn sel(n: usize, alive: u64, x: &[i8], y: &[i8]) -> Result<Vec<i8>, RestrictError> {
    if n > 64 || (n < 64 && alive >> n != 0) {
        return Err(RestrictError::SignShape);
    }
    let k = alive.count_ones() as usize;
    if x.len() != k || y.len() != n - k {
        return Err(RestrictError::SignShape);
    }
    if x.iter().chain(y).any(|&s| s != 1 && s != -1) {
        return Err(RestrictError::SignShape);
    }
    let (mut xi, mut yi) = (0, 0);
    Ok((0..n)
        .map(|i| {
            if alive >> i & 1 == 1 {
                xi += 1;
                x[xi - 1]
            } else {
                yi += 1;
                y[yi - 1]
            }
        })
        .collect())
}

/// Restrict a program: assigned steps collapse into their neighbors, alive
/// steps survive with the original ambient variable indices. Width never
/// grows; a fully assigned program becomes a length-0 constant.
pub fn apply(r: &Restriction, p: &Robp) -> Result<Robp, RestrictError> {
    if r.n() != p.ambient_n() {
        return Err(RestrictError::AmbientMismatch {
            expected: p.ambient_n(),
            got: r.n(),
        });
    }
    let n = p.n();
    let y = r.sign_mask();
    let kept: Vec<usize> = (0..n).filter(|&i| r.is_alive(p.read_at(i))).collect();

    if kept.is_empty() {
        let accept = if p.evaluate_mask(y) == -1 { vec![0] } else { vec![] };
        return Ok(Robp::new(vec![1], vec![], 0, accept, p.ambient_n(), Some(vec![]))?);
    }

    let mut start = p.start();
    for i in 0..kept[0] {
        start = p.step_mask(i, start, y);
    }

    let mut widths: Vec<u8> = kept.iter().map(|&i| p.widths()[i]).collect();
    widths.push(*p.widths().last().unwrap());

    let mut trans = Vec::with_capacity(kept.len());
    for (j, &i) in kept.iter().enumerate() {
        let next_kept = if j + 1 < kept.len() { kept[j + 1] } else { n };
        let w = p.widths()[i] as usize;
        let mut rows = Vec::with_capacity(w);
        for v in 0..w as u8 {
            let mut row = [0u8; 2];
            for (lab, sign) in [(0usize, -1i8), (1, 1)] {
                let mut cur = p.transition(i, v, sign);
                for k in i + 1..next_kept {
                    cur = p.step_mask(k, cur, y);
                }
                row[lab] = cur;
            }
            rows.push(row);
        }
        trans.push(rows);
    }

    let reads: Vec<usize> = kept.iter().map(|&i| p.read_at(i)).collect();
    let identity = p.ambient_n() == reads.len() && reads.iter().enumerate().all(|(j, &v)| j == v);
    let perm = if identity { None } else { Some(reads) };
    Ok(Robp::new(
        widths,
        trans,
        start,
        p.accept().to_vec(),
        p.ambient_n(),
        perm,
    )?)
}

/// Independent per-coordinate restriction: each coordinate stays alive with
/// probability `p` (a dyadic), otherwise gets a uniform sign.
pub fn p_random<R: Rng>(n: usize, p: &Dyadic, rng: &mut R) -> Restriction {
    assert!(n <= 64);
    assert!(*p >= Dyadic::zero() && *p <= Dyadic::one());
    let exp = p.exponent();
    assert!(exp <= 48, "p resolution too fine");
    let num: u64 = if *p == Dyadic::one() {
        1 << exp
    } else {
        // numerator fits: p < 1 means num < 2^exp
        let digits = p.numerator().to_u64_digits().1;
        if digits.is_empty() { 0 } else { digits[0] }
    };
    let mut alive = 0u64;
    let mut signs = vec![0i8; n];
    for i in 0..n {
        let u = if exp == 0 { 0 } else { rng.gen_range(0..1u64 << exp) };
        if u < num {
            alive |= 1 << i;
        } else {
            signs[i] = if rng.gen::<bool>() { 1 } else { -1 };
        }
    }
    Restriction { n, alive, signs }
}
