use std::fmt;

use restrictions::RestrictError;
use robp_core::RobpError;
use serde::Serialize;
use smallbias::{Bits, SeedReport, SeedStream, SmallBiasSampler};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    LengthMismatch { left: usize, right: usize },
    ExpansionTooLarge { m: usize },
    NoCollisionBlock { block: usize },
    Infeasible { what: String },
    Restrict(RestrictError),
    Program(RobpError),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::LengthMismatch { left, right } => {
                write!(f, "output length mismatch: {left} vs {right}")
            }
            GenError::ExpansionTooLarge { m } => {
                write!(f, "expansion over {m} blocks is too large")
            }
            GenError::NoCollisionBlock { block } => {
                write!(f, "block {block} admits no path collision")
            }
            GenError::Infeasible { what } => write!(f, "infeasible: {what}"),
            GenError::Restrict(e) => write!(f, "restriction error: {e}"),
            GenError::Program(e) => write!(f, "program error: {e}"),
        }
    }
}

impl std::error::Error for GenError {}

impl From<RestrictError> for GenError {
    fn from(e: RestrictError) -> Self {
        GenError::Restrict(e)
    }
}

impl From<RobpError> for GenError {
    fn from(e: RobpError) -> Self {
        GenError::Program(e)
    }
}

/// A deterministic map from seeds to ±1 strings. Total on exactly
/// 2^seed_bits seeds; `emit` must consume exactly `seed_bits()` bits.
/// Send + Sync so seed spaces can be swept concurrently.
pub trait Generator: Send + Sync {
    fn n(&self) -> usize;
    fn seed_bits(&self) -> u64;
    fn emit(&self, seed: &mut SeedStream) -> Vec<i8>;
    fn report(&self) -> SeedReport;
    fn kind(&self) -> &'static str;
}

/// Emit from an integer seed (seed_bits <= 64).
pub fn emit_from_u64(g: &dyn Generator, seed: u64) -> Vec<i8> {
    let bits = Bits::from_u64(seed, g.seed_bits() as usize);
    let mut stream = SeedStream::new(&bits);
    let out = g.emit(&mut stream);
    debug_assert_eq!(stream.consumed() as u64, g.seed_bits());
    out
}

/// Emit as a sign mask (bit set = -1); needs n <= 64.
pub fn emit_mask_from_u64(g: &dyn Generator, seed: u64) -> u64 {
    let out = emit_from_u64(g, seed);
    let mut m = 0u64;
    for (i, v) in out.iter().enumerate() {
        if *v < 0 {
            m |= 1 << i;
        }
    }
    m
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorDescriptor {
    pub kind: String,
    pub n: usize,
    pub seed_bits: u64,
    pub report: SeedReport,
}

pub fn descriptor(g: &dyn Generator) -> GeneratorDescriptor {
    GeneratorDescriptor {
        kind: g.kind().to_string(),
        n: g.n(),
        seed_bits: g.seed_bits(),
        report: g.report(),
    }
}

/// Truly uniform output: one seed bit per coordinate.
#[derive(Clone, Debug)]
pub struct UniformGenerator {
    n: usize,
}

impl UniformGenerator {
    pub fn new(n: usize) -> UniformGenerator {
        UniformGenerator { n }
    }
}

impl Generator for UniformGenerator {
    fn n(&self) -> usize {
        self.n
    }

    fn seed_bits(&self) -> u64 {
        self.n as u64
    }

    fn emit(&self, seed: &mut SeedStream) -> Vec<i8> {
        (0..self.n)
            .map(|_| if seed.take_bit() == 1 { -1 } else { 1 })
            .collect()
    }

    fn report(&self) -> SeedReport {
        SeedReport::leaf("uniform", format!("n={}", self.n), self.n as u64)
    }

    fn kind(&self) -> &'static str {
        "uniform"
    }
}

/// A small-bias sampler used directly as a generator.
#[derive(Clone, Debug)]
pub struct SmallBiasGenerator {
    inner: SmallBiasSampler,
}

impl SmallBiasGenerator {
    pub fn new(inner: SmallBiasSampler) -> SmallBiasGenerator {
        SmallBiasGenerator { inner }
    }

    pub fn sampler(&self) -> &SmallBiasSampler {
        &self.inner
    }
}

impl Generator for SmallBiasGenerator {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn seed_bits(&self) -> u64 {
        self.inner.seed_bits()
    }

    fn emit(&self, seed: &mut SeedStream) -> Vec<i8> {
        self.inner.generate(seed)
    }

    fn report(&self) -> SeedReport {
        self.inner.report("small-bias")
    }

    fn kind(&self) -> &'static str {
        "small-bias"
    }
}

/// Coordinatewise product of two generators on independent seed halves;
/// fools the union of what either factor fools.
pub struct XorGenerator {
    left: Box<dyn Generator>,
    right: Box<dyn Generator>,
}

pub fn xor_combine(
    left: Box<dyn Generator>,
    right: Box<dyn Generator>,
) -> Result<XorGenerator, GenError> {
    if left.n() != right.n() {
        return Err(GenError::LengthMismatch {
            left: left.n(),
            right: right.n(),
        });
    }
    Ok(XorGenerator { left, right })
}

impl Generator for XorGenerator {
    fn n(&self) -> usize {
        self.left.n()
    }

    fn seed_bits(&self) -> u64 {
        self.left.seed_bits() + self.right.seed_bits()
    }

    fn emit(&self, seed: &mut SeedStream) -> Vec<i8> {
        let a = self.left.emit(seed);
        let b = self.right.emit(seed);
        a.iter().zip(b).map(|(x, y)| x * y).collect()
    }

    fn report(&self) -> SeedReport {
        SeedReport::node(
            "xor",
            "coordinatewise product",
            vec![self.left.report(), self.right.report()],
        )
    }

    fn kind(&self) -> &'static str {
        "xor"
    }
}
