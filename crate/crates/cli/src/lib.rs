//! Batch front door: corpora, suite runs, seed-length tables and format
//! conversion for the generator workspace.

pub mod describe;
pub mod families;
pub mod listing;
pub mod suite;
