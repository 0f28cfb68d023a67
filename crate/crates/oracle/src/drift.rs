use fourier::mixed_expectation;
use generators::LinearCombination;
use restrictions::Restriction;
use robp_core::{Dyadic, Robp};
use smallbias::{Bits, SeedStream};

use crate::fooling::{OracleError, MAX_SWEEP_BITS};
use crate::sum::mean_pow2;

/// Collect one dyadic value per point of 0..total.
fn map_range(total: u64, f: impl Fn(u64) -> Dyadic + Sync + Send) -> Vec<Dyadic> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..total).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..total).map(f).collect()
    }
}

/// Exact drift of a pseudorandom restriction family: the average over all
/// seeds of E[p restricted by the sampled restriction] minus E[p], where
/// alive coordinates stay uniform. Zero means the family preserves the
/// program's expectation perfectly.
pub fn expectation_drift(
    p: &Robp,
    seed_bits: u64,
    build: impl Fn(&mut SeedStream) -> Restriction + Sync,
) -> Result<Dyadic, OracleError> {
    if seed_bits > MAX_SWEEP_BITS {
        return Err(OracleError::SeedSpaceTooLarge { bits: seed_bits });
    }
    let values = map_range(1u64 << seed_bits, |s| {
        let bits = Bits::from_u64(s, seed_bits as usize);
        let mut stream = SeedStream::new(&bits);
        let rho = build(&mut stream);
        mixed_expectation(p, rho.alive_mask(), rho.sign_mask())
    });
    let avg = mean_pow2(&values, seed_bits as u32);
    Ok(&avg - &p.expectation())
}

/// First input where the combination disagrees with the program, if any.
pub fn first_mismatch(p: &Robp, lc: &LinearCombination) -> Result<Option<u64>, OracleError> {
    let n = p.ambient_n();
    if n as u64 > MAX_SWEEP_BITS {
        return Err(OracleError::InputSpaceTooLarge { n });
    }
    for x in 0..1u64 << n {
        if lc.evaluate_mask(x) != Dyadic::from_int(p.evaluate_mask(x) as i64) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
