//! Small-bias sign samplers over GF(2^k), pseudorandom subset samplers with
//! dyadic marginals, and low-degree xor stacks. Every construction carries an
//! exactly certifiable bias bound: character biases and subset marginals are
//! computed in closed form as dyadic rationals, never estimated.

mod bits;
mod field;
mod sampler;

pub use bits::{Bits, SeedStream};
pub use field::Gf2k;
pub use sampler::{
    LowDegreeSampler, SbKind, SeedReport, SmallBiasSampler, SubsetSampler,
};
