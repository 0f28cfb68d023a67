//! Partial-assignment algebra for read-once branching programs, plus the
//! pseudorandom restriction procedures that drive the generators: a
//! short-block one-step restriction, a two-stage width-3 restriction, and
//! iterated composition. Every sampled restriction is a deterministic
//! function of its seed with exact bit accounting.

mod config;
mod pseudorandom;
mod restriction;

pub use config::{HonestRestrictionParams, HonestTwoStepParams, ParamConfig};
pub use pseudorandom::{
    iterate, width3_two_step, xor_short_restriction, TwoStepRestriction, XorShortRestriction,
};
pub use restriction::{apply, p_random, sel, RestrictError, Restriction};
