use std::fmt;

use generators::{emit_mask_from_u64, Generator};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robp_core::{Dyadic, Robp};
use smallbias::{Bits, SeedStream};

/// Exhaustive sweeps stop here; larger spaces go through sampling.
pub const MAX_SWEEP_BITS: u64 = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    SeedSpaceTooLarge { bits: u64 },
    InputSpaceTooLarge { n: usize },
    LengthMismatch { program: usize, generator: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::SeedSpaceTooLarge { bits } => {
                write!(f, "cannot sweep {bits} seed bits exhaustively")
            }
            OracleError::InputSpaceTooLarge { n } => {
                write!(f, "cannot sweep {n} input bits exhaustively")
            }
            OracleError::LengthMismatch { program, generator } => {
                write!(f, "program reads {program} variables, generator emits {generator}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Count how many values in 0..total satisfy the predicate. The parallel
/// and sequential paths count the same integer, so results are identical.
fn count_range(total: u64, pred: impl Fn(u64) -> bool + Sync + Send) -> u64 {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..total).into_par_iter().filter(|&v| pred(v)).count() as u64
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..total).filter(|&v| pred(v)).count() as u64
    }
}

/// Reference single-threaded count, kept callable for benchmarks.
fn count_range_seq(total: u64, pred: impl Fn(u64) -> bool) -> u64 {
    (0..total).filter(|&v| pred(v)).count() as u64
}

fn check_lengths(p: &Robp, g: &dyn Generator) -> Result<(), OracleError> {
    if p.ambient_n() != g.n() {
        return Err(OracleError::LengthMismatch {
            program: p.ambient_n(),
            generator: g.n(),
        });
    }
    Ok(())
}

/// Acceptance probability under truly uniform input, by enumerating every
/// assignment. Exists to cross-check the layered-walk computation.
pub fn exact_uniform_accept(p: &Robp) -> Result<Dyadic, OracleError> {
    let n = p.ambient_n();
    if n as u64 > MAX_SWEEP_BITS {
        return Err(OracleError::InputSpaceTooLarge { n });
    }
    let count = count_range(1u64 << n, |x| p.accept_indicator_mask(x) == 1);
    Ok(Dyadic::ratio_pow2(count as i64, n as u32))
}

/// Single-threaded variant of `exact_uniform_accept`.
pub fn exact_uniform_accept_seq(p: &Robp) -> Result<Dyadic, OracleError> {
    let n = p.ambient_n();
    if n as u64 > MAX_SWEEP_BITS {
        return Err(OracleError::InputSpaceTooLarge { n });
    }
    let count = count_range_seq(1u64 << n, |x| p.accept_indicator_mask(x) == 1);
    Ok(Dyadic::ratio_pow2(count as i64, n as u32))
}

/// Acceptance probability under the generator's output distribution, by
/// enumerating every seed. Exact.
pub fn exact_generator_accept(p: &Robp, g: &dyn Generator) -> Result<Dyadic, OracleError> {
    check_lengths(p, g)?;
    let bits = g.seed_bits();
    if bits > MAX_SWEEP_BITS {
        return Err(OracleError::SeedSpaceTooLarge { bits });
    }
    let count = count_range(1u64 << bits, |s| {
        p.accept_indicator_mask(emit_mask_from_u64(g, s)) == 1
    });
    Ok(Dyadic::ratio_pow2(count as i64, bits as u32))
}

/// Single-threaded variant of `exact_generator_accept`.
pub fn exact_generator_accept_seq(p: &Robp, g: &dyn Generator) -> Result<Dyadic, OracleError> {
    check_lengths(p, g)?;
    let bits = g.seed_bits();
    if bits > MAX_SWEEP_BITS {
        return Err(OracleError::SeedSpaceTooLarge { bits });
    }
    let count = count_range_seq(1u64 << bits, |s| {
        p.accept_indicator_mask(emit_mask_from_u64(g, s)) == 1
    });
    Ok(Dyadic::ratio_pow2(count as i64, bits as u32))
}

/// Exact acceptance under uniform and under the generator, side by side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoolingReport {
    pub n: usize,
    pub seed_bits: u64,
    pub uniform: Dyadic,
    pub pseudo: Dyadic,
    pub error: Dyadic,
}

impl FoolingReport {
    pub fn error_f64(&self) -> f64 {
        self.error.to_f64()
    }
}

/// |Pr_uniform[accept] - Pr_generator[accept]| with both sides exact. The
/// uniform side comes from the layered walk, which is exact at any length.
pub fn fooling_error(p: &Robp, g: &dyn Generator) -> Result<FoolingReport, OracleError> {
    check_lengths(p, g)?;
    let uniform = p.acceptance();
    let pseudo = exact_generator_accept(p, g)?;
    let error = (&uniform - &pseudo).abs();
    Ok(FoolingReport {
        n: p.ambient_n(),
        seed_bits: g.seed_bits(),
        uniform,
        pseudo,
        error,
    })
}

/// Monte Carlo estimate for seed spaces too large to sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFooling {
    pub samples: u64,
    pub uniform: Dyadic,
    pub estimate: f64,
    pub error_estimate: f64,
    /// Two-sided 99% Hoeffding radius for the estimate.
    pub ci99: f64,
}

pub fn sampled_fooling(
    p: &Robp,
    g: &dyn Generator,
    samples: u64,
    rng_seed: u64,
) -> Result<SampledFooling, OracleError> {
    check_lengths(p, g)?;
    assert!(samples > 0, "sampling needs at least one draw");
    let uniform = p.acceptance();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let len = g.seed_bits() as usize;
    let words = len.div_ceil(64);
    let mut hits = 0u64;
    for _ in 0..samples {
        let pool: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
        let bits = Bits::from_fn(len, |i| pool[i / 64] >> (i % 64) & 1 == 1);
        let mut stream = SeedStream::new(&bits);
        let out = g.emit(&mut stream);
        debug_assert_eq!(stream.consumed(), len);
        let mut mask = 0u64;
        for (i, v) in out.iter().enumerate() {
            if *v < 0 {
                mask |= 1 << i;
            }
        }
        if p.accept_indicator_mask(mask) == 1 {
            hits += 1;
        }
    }
    let estimate = hits as f64 / samples as f64;
    let error_estimate = (estimate - uniform.to_f64()).abs();
    let ci99 = (f64::ln(2.0 / 0.01) / (2.0 * samples as f64)).sqrt();
    Ok(SampledFooling {
        samples,
        uniform,
        estimate,
        error_estimate,
        ci99,
    })
}
