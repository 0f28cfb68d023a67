use restrictions::ParamConfig;
use smallbias::{Gf2k, SeedReport, SeedStream};

use crate::generator::{GenError, Generator};

/// Recursive seed-doubling generator. One chunk of `c` bits is expanded by
/// repeatedly appending a hashed copy: level `l` maps `s` to `s || h_l(s)`
/// with `h_l(s) = a_l*s + b_l` over GF(2^c), a pairwise-independent family.
/// Seed layout: the chunk `s`, then `(a_l, b_l)` for levels 1..=L, so
/// `c + 2cL` bits for `c * 2^L >= n` output signs (truncated to `n`).
#[derive(Clone, Debug)]
pub struct HashTreeGenerator {
    n: usize,
    chunk: u32,
    levels: u32,
}

impl HashTreeGenerator {
    pub fn new(n: usize, chunk: u32) -> Result<HashTreeGenerator, GenError> {
        if n == 0 || chunk == 0 || chunk > 32 {
            return Err(GenError::Infeasible {
                what: format!("hash tree needs 0 < chunk <= 32, got {chunk} for n={n}"),
            });
        }
        let leaves = n.div_ceil(chunk as usize);
        let levels = leaves.next_power_of_two().trailing_zeros();
        Ok(HashTreeGenerator { n, chunk, levels })
    }

    pub fn chunk(&self) -> u32 {
        self.chunk
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }
}

impl Generator for HashTreeGenerator {
    fn n(&self) -> usize {
        self.n
    }

    fn seed_bits(&self) -> u64 {
        self.chunk as u64 * (1 + 2 * self.levels as u64)
    }

    fn emit(&self, seed: &mut SeedStream) -> Vec<i8> {
        let field = Gf2k::new(self.chunk);
        let s = seed.take(self.chunk);
        let hashes: Vec<(u64, u64)> = (0..self.levels)
            .map(|_| (seed.take(self.chunk), seed.take(self.chunk)))
            .collect();
        let mut out = Vec::with_capacity(self.n);
        'leaves: for leaf in 0..1u64 << self.levels {
            let mut t = s;
            // level l splits blocks of 2^l leaves; highest level first
            for l in (0..self.levels).rev() {
                if leaf >> l & 1 == 1 {
                    let (a, b) = hashes[l as usize];
                    t = field.mul(a, t) ^ b;
                }
            }
            for j in 0..self.chunk {
                if out.len() == self.n {
                    break 'leaves;
                }
                out.push(if t >> j & 1 == 1 { -1 } else { 1 });
            }
        }
        out
    }

    fn report(&self) -> SeedReport {
        SeedReport::node(
            "hash-tree",
            format!("chunk={} levels={}", self.chunk, self.levels),
            vec![
                SeedReport::leaf("root-chunk", "uniform chunk", self.chunk as u64),
                SeedReport::leaf(
                    "level-hashes",
                    "affine pair per level",
                    2 * self.chunk as u64 * self.levels as u64,
                ),
            ],
        )
    }

    fn kind(&self) -> &'static str {
        "hash-tree"
    }
}

/// Chunk size the full-strength analysis would use for width-`w` programs.
pub fn honest_hash_chunk(n: usize, width_hint: u32, eps: f64) -> u32 {
    let v = 2.0 * (n as f64 * width_hint as f64 / eps).log2();
    v.ceil().max(1.0) as u32
}

/// Seed-doubling generator sized from the config: the desk profile uses its
/// chunk knob, the honest profile the full-strength chunk (which errors out
/// of the 32-bit field when the instance is too large to run).
pub fn inw(
    n: usize,
    width_hint: u32,
    eps: f64,
    cfg: &ParamConfig,
) -> Result<HashTreeGenerator, GenError> {
    let chunk = if cfg.honest {
        honest_hash_chunk(n, width_hint, eps)
    } else {
        cfg.hash_chunk
    };
    HashTreeGenerator::new(n, chunk)
}
