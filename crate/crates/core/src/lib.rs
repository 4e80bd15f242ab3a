//! Finite-truncation toolkit for Borel reductions into sequence spaces.
//!
//! The crate is organised in four layers:
//!
//! * [`norms`]: exact finite-dimensional `l_p` calculus, equivalence constants
//!   of canonical bases and the estimate inequalities built on them.
//! * [`relations`]: finitely describable points of the source Polish spaces and
//!   exact deciders for `H_0`, `E_0`, `E_1`, `=^+` and products.
//! * [`reductions`]: parameter schedules, the maps from points to sum-space
//!   descriptors, and truncation-scale verifiers.
//! * [`hierarchy`]: the registry of canonical relations and known reducibility
//!   edges.
//!
//! [`verify`] packages the randomized property sweeps used by the CLI.

// Negated comparisons are how NaN inputs get rejected alongside range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod hierarchy;
pub mod norms;
pub mod reductions;
pub mod relations;
pub mod verify;

/// Relative tolerance used by every floating comparison unless stated otherwise.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
