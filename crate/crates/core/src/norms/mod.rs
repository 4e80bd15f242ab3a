//! Finite-dimensional `l_p` calculus.
//!
//! Everything here works on finite truncations: blocks `l_{p_n}^{K_n}` glued
//! by an outer `l_p` or `c_0` norm. Powers of block dimensions are always taken
//! in the log domain so that dimensions far beyond `u64` can be described.

mod constants;
mod estimates;
mod exponent;
mod space;

pub use constants::{
    eq_const_closed_form, eq_const_from_log, eq_const_oracle, lemma_2_1_bounds, EquivalenceOracle,
    OracleEstimate, SandwichBounds, DEFAULT_ORACLE_BOUND,
};
pub use estimates::{check_lower_p_estimate, lemma_2_4_check, DisjointSumCheck};
pub use exponent::Exponent;
pub use space::{
    lp_norm, sum_norm, BlockDim, BlockSpec, BlockVector, Outer, SumSpace, INSTANTIATE_LIMIT,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid exponent {0}: exponents must be >= 1")]
    InvalidExponent(f64),
    #[error("block {block} has {actual} coefficients, expected {expected}")]
    ShapeMismatch {
        block: usize,
        expected: u64,
        actual: usize,
    },
    #[error("space is descriptor-only: block dimensions are too large to instantiate vectors")]
    DescriptorOnly,
    #[error("oracle bound exceeded: dimension {dim} > bound {bound}")]
    OracleBoundExceeded { dim: u64, bound: u64 },
    #[error("vectors {first} and {second} are not successive")]
    NotSuccessive { first: usize, second: usize },
    #[error("vectors {first} and {second} are not disjointly supported")]
    NotDisjoint { first: usize, second: usize },
    #[error("invalid exponents: {0}")]
    InvalidExponents(String),
    #[error("vectors live in different spaces")]
    SpaceMismatch,
}
