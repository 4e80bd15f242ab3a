//! Finitely describable points of the source spaces and exact deciders for
//! the relations reduced to isomorphism.

mod cycle;
mod embed;
mod periodic;
mod point;
pub mod rational;
mod x0;

pub use cycle::{eplus_decide, CycleListPoint, Interval};
pub use embed::j_embed;
pub use periodic::{e0_decide, e1_decide, eventually_equal, PeriodicPoint};
pub use point::{decide, decide_product, product_decide, Point, Relation, Verdict};
pub use rational::Rational;
pub use x0::{h0_decide, Divergence, H0Verdict, PointX0, TailRule};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("points live in different interval configurations")]
    DomainMismatch,
    #[error("{relation} expects points of {expected}, got {found}")]
    TypeMismatch {
        relation: &'static str,
        expected: &'static str,
        found: &'static str,
    },
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
}
