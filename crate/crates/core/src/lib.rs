//! A workbench for ordinal notations below ε₀ and the proof theory built on
//! them.

pub mod cli;
pub mod combinatorics;
pub mod hierarchy;
pub mod omega;
pub mod ordinal;
pub mod proofs;
pub mod syntax;

pub use ordinal::{omega_tower, parse_ordinal, reduces_to, Ordinal, OrdinalError, ReductionPath};
