//! Read-once branching programs with exact dyadic probability arithmetic.
//!
//! Everything downstream (Fourier tables, restriction oracles, generator
//! fooling reports) leans on two guarantees made here: walks are cheap on
//! sign masks, and every probability is an exact dyadic rational.

mod blocks;
mod dyadic;
mod io;
mod robp;
mod transform;

pub use blocks::{recompose, BlockDecomposition};
pub use dyadic::Dyadic;
pub use io::{from_text, to_text};
pub use robp::{LayerClass, ReachStats, Robp, RobpError, MAX_AMBIENT, MAX_WIDTH};
