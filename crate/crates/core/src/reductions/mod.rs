//! Parameter schedules and the maps from encoded points to sequence-space
//! descriptors, with truncation-scale verifiers of their conclusions.

mod descriptor;
mod lpsum;
mod schedule;

pub use descriptor::{
    constant_chain, gap_bound_check, separation_report, space_for, truncated_eq_const,
    truncated_eq_consts, ChainCheck, GapRow, SeparationRow, SpaceDescriptor,
};
pub use lpsum::{
    h_direct_sum, summand_detect, x_alpha, ComponentVerdict, DirectSumDescriptor, DirectSumMap,
    LpSumDescriptor,
};
pub use schedule::{
    gen_params, gen_params_with, validate_schedule, ClauseCheck, Flavor, GenOptions, ParamSchedule,
    ValidationReport,
};

use thiserror::Error;

use crate::norms::NormError;
use crate::relations::RelationError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("infeasible: clause {clause} fails at n = {n} (slack {slack:e})")]
    Infeasible {
        clause: String,
        n: usize,
        slack: f64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("schedule invalid: clause {clause} fails at n = {n} (slack {slack:e})")]
    ScheduleInvalid {
        clause: String,
        n: usize,
        slack: f64,
    },
    #[error("descriptors were built from different schedules")]
    ScheduleMismatch,
    #[error("truncation {n} is outside 1..={n_max}")]
    TruncationOutOfRange { n: usize, n_max: usize },
    #[error("value {value} lies outside the open interval ]{lo}, {hi}[")]
    ValueOutsideInterval {
        value: String,
        lo: String,
        hi: String,
    },
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Norm(#[from] NormError),
}
