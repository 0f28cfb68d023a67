//! Exact Fourier analysis over the Boolean cube, plus the elementary
//! symmetric tail bounds used by the spectral arguments.
//!
//! Point indexing: bit `i` of an index set means variable `i` carries `-1`.
//! Characters are `chi_S(x) = (-1)^{popcount(x & S)}`, i.e. the product of
//! the selected variables' signs.

mod symmetric;
mod tables;

pub use symmetric::{elementary_symmetric, symmetric_tail_check, TailReport};
pub use tables::{
    coeffs_csv, mixed_expectation, FourierTable, TableError, TruthTable, MAX_TABLE_ARITY,
};
