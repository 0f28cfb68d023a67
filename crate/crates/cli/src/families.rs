//! Built-in program families for corpora.
//!
//! Every constructor takes `(n, seed)` and is deterministic in both. The
//! non-random families ignore the seed. Uniform-input acceptance
//! probabilities worth remembering: `mod3` accepts iff the number of -1
//! inputs is divisible by three (n = 3 gives 1/4), `parity` accepts on an
//! odd count (always 1/2), `read-once-dnf` accepts with probability
//! 1 - prod_i (1 - 2^-len_i) over its blocks and `read-once-cnf` with
//! prod_i (1 - 2^-len_i).

use robp_core::{Robp, RobpError};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    Unknown { name: String },
    BadSize { family: &'static str, n: usize },
    Program(RobpError),
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::Unknown { name } => write!(f, "unknown family {name:?}"),
            FamilyError::BadSize { family, n } => {
                write!(f, "family {family} does not support n = {n}")
            }
            FamilyError::Program(e) => write!(f, "program construction failed: {e}"),
        }
    }
}

impl std::error::Error for FamilyError {}

impl From<RobpError> for FamilyError {
    fn from(e: RobpError) -> Self {
        FamilyError::Program(e)
    }
}

pub const FAMILY_NAMES: &[&str] = &[
    "mod3",
    "parity",
    "tribes",
    "read-once-cnf",
    "read-once-dnf",
    "read-once-poly",
    "random-width3",
    "random-permutation-bp",
];

/// Deterministic splitmix64 stream; the whole crate derives per-entry
/// randomness from it so suite runs replay bit-for-bit.
pub struct Rng64(pub u64);

impl Rng64 {
    pub fn next(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}

pub fn build(name: &str, n: usize, seed: u64) -> Result<Robp, FamilyError> {
    match name {
        "mod3" => mod3(n),
        "parity" => parity(n),
        "tribes" => tribes(n),
        "read-once-cnf" => read_once_cnf(n, seed),
        "read-once-dnf" => read_once_dnf(n, seed),
        "read-once-poly" => read_once_poly(n, seed),
        "random-width3" => random_width3(n, seed),
        "random-permutation-bp" => random_permutation_bp(n, seed),
        _ => Err(FamilyError::Unknown { name: name.into() }),
    }
}

/// Counts -1 inputs mod 3, accepts residue 0.
pub fn mod3(n: usize) -> Result<Robp, FamilyError> {
    if n == 0 {
        return Err(FamilyError::BadSize { family: "mod3", n });
    }
    let mut widths = vec![1u8];
    widths.extend(std::iter::repeat(3).take(n));
    let mut trans = vec![vec![[1, 0]]];
    for _ in 1..n {
        trans.push(vec![[1, 0], [2, 1], [0, 2]]);
    }
    Ok(Robp::new(widths, trans, 0, vec![0], n, None)?)
}

/// Accepts an odd number of -1 inputs.
pub fn parity(n: usize) -> Result<Robp, FamilyError> {
    if n == 0 {
        return Err(FamilyError::BadSize { family: "parity", n });
    }
    let mut widths = vec![1u8];
    widths.extend(std::iter::repeat(2).take(n));
    let mut trans = vec![vec![[1, 0]]];
    for _ in 1..n {
        trans.push(vec![[1, 0], [0, 1]]);
    }
    Ok(Robp::new(widths, trans, 0, vec![1], n, None)?)
}

/// OR of ANDs over equal blocks of size ceil(log2(n+1)); a block fires when
/// all its variables are -1. The last block absorbs the remainder.
pub fn tribes(n: usize) -> Result<Robp, FamilyError> {
    if n == 0 {
        return Err(FamilyError::BadSize { family: "tribes", n });
    }
    let k = (usize::BITS - n.leading_zeros()) as usize; // ceil(log2(n+1))
    read_once_dnf_blocks(&partition_even(n, k.max(1)))
}

/// OR of ANDs over seeded random blocks of size 1..=3.
pub fn read_once_dnf(n: usize, seed: u64) -> Result<Robp, FamilyError> {
    if n == 0 {
        return Err(FamilyError::BadSize { family: "read-once-dnf", n });
    }
    read_once_dnf_blocks(&partition_random(n, seed))
}

/// AND of ORs over seeded random blocks of size 1..=3; a clause holds when
/// some variable in it is -1.
pub fn read_once_cnf(n: usize, seed: u64) -> Result<Robp, FamilyError> {
    if n == 0 {
        return Err(FamilyError::BadSize { family: "read-once-cnf", n });
    }
    read_once_cnf_blocks(&partition_random(n, seed))
}

/// XOR of monomials over seeded random blocks of size 1..=3; a monomial
/// fires when all its variables are -1 and the program accepts an odd
/// number of fired monomials.
pub fn read_once_poly(n: usize, seed: u64) -> Result<Robp, FamilyError> {
    if n == 0 {
        return Err(FamilyError::BadSize { family: "read-once-poly", n });
    }
    read_once_poly_blocks(&partition_random(n, seed))
}

pub fn random_width3(n: usize, seed: u64) -> Result<Robp, FamilyError> {
    if n == 0 {
        return Err(FamilyError::BadSize { family: "random-width3", n });
    }
    let mut rng = Rng64(seed);
    Ok(random_program(&mut rng, n, 3))
}

/// Every layer applies two independent random permutations of {0,1,2}.
pub fn random_permutation_bp(n: usize, seed: u64) -> Result<Robp, FamilyError> {
    if n == 0 {
        return Err(FamilyError::BadSize {
            family: "random-permutation-bp",
            n,
        });
    }
    let mut rng = Rng64(seed);
    let widths = vec![3u8; n + 1];
    let trans = (0..n)
        .map(|_| {
            let sigma = random_perm3(&mut rng);
            let tau = random_perm3(&mut rng);
            (0..3).map(|v| [sigma[v], tau[v]]).collect()
        })
        .collect();
    let mask = 1 + rng.below(7); // nonempty accept set
    let accept = (0..3).filter(|v| mask >> v & 1 == 1).collect();
    Ok(Robp::new(widths, trans, 0, accept, n, None)?)
}

/// Random layered program with widths in 1..=max_w; exposed so test
/// corpora can share one construction.
pub fn random_program(rng: &mut Rng64, n: usize, max_w: u8) -> Robp {
    let mut widths = vec![1u8];
    for _ in 1..n {
        widths.push(1 + rng.below(max_w as u64) as u8);
    }
    widths.push(1 + rng.below(max_w as u64) as u8);
    let trans = (0..n)
        .map(|i| {
            (0..widths[i])
                .map(|_| {
                    [
                        rng.below(widths[i + 1] as u64) as u8,
                        rng.below(widths[i + 1] as u64) as u8,
                    ]
                })
                .collect()
        })
        .collect();
    let wl = *widths.last().unwrap();
    let accept = (0..wl).filter(|_| rng.below(2) == 1).collect();
    Robp::new(widths, trans, 0, accept, n, None).unwrap()
}

fn random_perm3(rng: &mut Rng64) -> [u8; 3] {
    let mut p = [0u8, 1, 2];
    for i in (1..3).rev() {
        p.swap(i, rng.below(i as u64 + 1) as usize);
    }
    p
}

fn partition_even(n: usize, k: usize) -> Vec<usize> {
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let take = k.min(left);
        // fold a short tail into the previous block
        if take < k && !blocks.is_empty() {
            *blocks.last_mut().unwrap() += take;
        } else {
            blocks.push(take);
        }
        left -= take;
    }
    blocks
}

fn partition_random(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = Rng64(seed);
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let take = (1 + rng.below(3) as usize).min(left);
        blocks.push(take);
        left -= take;
    }
    blocks
}

/// Shared DNF scaffold. Vertex layers: width 1 at the start, width 2 at
/// block boundaries (0 = satisfied, 1 = alive), width 3 inside a block
/// (0 = satisfied, 1 = current AND alive, 2 = current AND dead). After the
/// last block state 1 means unsatisfied; accept = {satisfied}.
fn read_once_dnf_blocks(blocks: &[usize]) -> Result<Robp, FamilyError> {
    let n: usize = blocks.iter().sum();
    let mut widths = vec![1u8];
    let mut trans: Vec<Vec<[u8; 2]>> = Vec::with_capacity(n);
    for &len in blocks {
        for pos in 0..len {
            let src_w = *widths.last().unwrap();
            let last = pos + 1 == len;
            let mut rows = Vec::new();
            if src_w > 1 {
                rows.push([0, 0]); // satisfied stays satisfied
            }
            // alive row: -1 keeps the AND going (or completes it)
            rows.push(if last { [0, 1] } else { [1, 2] });
            if src_w == 3 {
                rows.push(if last { [1, 1] } else { [2, 2] }); // dead row
            }
            trans.push(rows);
            widths.push(if last { 2 } else { 3 });
        }
    }
    Ok(Robp::new(widths, trans, 0, vec![0], n, None)?)
}

/// Shared CNF scaffold, the De Morgan dual of the DNF one. Boundaries:
/// 0 = all clauses so far hold, 1 = failed. Inside a block: 0 = current
/// clause already satisfied, 1 = current clause still open, 2 = failed.
fn read_once_cnf_blocks(blocks: &[usize]) -> Result<Robp, FamilyError> {
    let n: usize = blocks.iter().sum();
    let mut widths = vec![1u8];
    let mut trans: Vec<Vec<[u8; 2]>> = Vec::with_capacity(n);
    for &len in blocks {
        for pos in 0..len {
            let src_w = *widths.last().unwrap();
            let last = pos + 1 == len;
            // open clause: -1 satisfies it, +1 leaves it open (and on the
            // last variable an open clause fails); same targets either way
            let open = [0, 1];
            let mut rows = Vec::new();
            match src_w {
                1 => rows.push(open),
                2 => {
                    // boundary: 0 = ok (clause opens), 1 = failed
                    rows.push(open);
                    rows.push(if last { [1, 1] } else { [2, 2] });
                }
                _ => {
                    rows.push([0, 0]); // clause already satisfied
                    rows.push(open);
                    rows.push(if last { [1, 1] } else { [2, 2] }); // failed
                }
            }
            trans.push(rows);
            widths.push(if last { 2 } else { 3 });
        }
    }
    Ok(Robp::new(widths, trans, 0, vec![0], n, None)?)
}

/// XOR-of-monomials scaffold. Boundaries carry the parity (width 2);
/// inside a block the state is 2*parity + alive (width 4).
fn read_once_poly_blocks(blocks: &[usize]) -> Result<Robp, FamilyError> {
    let n: usize = blocks.iter().sum();
    let mut widths = vec![1u8];
    let mut trans: Vec<Vec<[u8; 2]>> = Vec::with_capacity(n);
    for &len in blocks {
        for pos in 0..len {
            let src_w = *widths.last().unwrap();
            let last = pos + 1 == len;
            let mut rows = Vec::new();
            match src_w {
                1 | 2 => {
                    // parity p, block opens: -1 starts the monomial alive
                    for p in 0..src_w {
                        rows.push(if last { [p ^ 1, p] } else { [2 * p + 1, 2 * p] });
                    }
                }
                _ => {
                    for p in 0..2u8 {
                        let dead = 2 * p;
                        let alive = 2 * p + 1;
                        rows.resize(4, [0, 0]);
                        rows[dead as usize] = if last { [p, p] } else { [dead, dead] };
                        rows[alive as usize] = if last { [p ^ 1, p] } else { [alive, dead] };
                    }
                }
            }
            trans.push(rows);
            widths.push(if last { 2 } else { 4 });
        }
    }
    Ok(Robp::new(widths, trans, 0, vec![1], n, None)?)
}
