//! Brute-force oracles: exact acceptance probabilities under uniform and
//! pseudorandom distributions, exact restriction drift, and Monte Carlo
//! fallbacks for seed spaces too large to enumerate.

mod drift;
mod fooling;
mod sum;

pub use drift::{expectation_drift, first_mismatch};
pub use fooling::{
    exact_generator_accept, exact_generator_accept_seq, exact_uniform_accept,
    exact_uniform_accept_seq, fooling_error, sampled_fooling, FoolingReport, OracleError,
    SampledFooling, MAX_SWEEP_BITS,
};
pub use sum::{mean_pow2, sum_tree};
