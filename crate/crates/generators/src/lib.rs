//! Pseudorandom generators for read-once branching programs, plus the exact
//! linear-combination decompositions their analysis rests on.

mod chain;
mod generator;
mod hash_tree;
mod pipelines;
mod structural;

pub use chain::{chain_decompose, LinearCombination};
pub use generator::{
    descriptor, emit_from_u64, emit_mask_from_u64, xor_combine, GenError, Generator,
    GeneratorDescriptor, SmallBiasGenerator, UniformGenerator, XorGenerator,
};
pub use hash_tree::{honest_hash_chunk, inw, HashTreeGenerator};
pub use pipelines::{
    base_short_robp, base_short_robp_with, honest_locally_monotone_shape, honest_short_xor_shape,
    honest_width3_shape, read_once_poly_prg, BaseKind, HonestLocallyMonotoneShape,
    HonestShortXorShape, HonestWidth3Shape, LocallyMonotonePrg, ManyProductsGenerator,
    ShortXorGenerator, SparseAliveRestriction, Width3Prg,
};
pub use structural::{structural_decompose, StructuralDecomposition};
