//! Dynamically typed points, their JSON form and relation dispatch.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::cycle::{eplus_decide, CycleListPoint, Interval};
use super::periodic::{e0_decide, e1_decide, PeriodicPoint};
use super::rational::{int, Q};
use super::x0::{h0_decide, PointX0, TailRule};
use super::RelationError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub enum Point {
    X0(PointX0),
    Cantor(PeriodicPoint<bool>),
    RSeq(PeriodicPoint<super::rational::Rational>),
    Pomega(CycleListPoint),
}

impl Point {
    pub fn space_name(&self) -> &'static str {
        match self {
            Point::X0(_) => "X0",
            Point::Cantor(_) => "Cantor",
            Point::RSeq(_) => "RSeq",
            Point::Pomega(_) => "Pomega",
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "space")]
enum PointRepr {
    X0 {
        #[serde(default)]
        prefix: Vec<u64>,
        #[serde(default = "zero_tail")]
        tail: X0Tail,
    },
    Cantor {
        #[serde(default)]
        prefix: Vec<u8>,
        tail: Period<u8>,
    },
    RSeq {
        #[serde(default)]
        prefix: Vec<Q>,
        tail: Period<Q>,
    },
    Pomega {
        values: Vec<Q>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        interval: Option<IntervalRepr>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum X0Tail {
    Constant(u64),
    Affine(Q),
    Slopes(Vec<Q>),
}

fn zero_tail() -> X0Tail {
    X0Tail::Constant(0)
}

#[derive(Serialize, Deserialize)]
struct Period<T> {
    period: Vec<T>,
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: Q,
    hi: Q,
}

impl TryFrom<PointRepr> for Point {
    type Error = RelationError;

    fn try_from(repr: PointRepr) -> Result<Self, Self::Error> {
        Ok(match repr {
            PointRepr::X0 { prefix, tail } => {
                let tail = match tail {
                    X0Tail::Constant(c) => TailRule::Constant(c),
                    X0Tail::Affine(r) => TailRule::Affine(r.0),
                    X0Tail::Slopes(rs) => {
                        TailRule::PeriodicSlope(rs.into_iter().map(|q| q.0).collect())
                    }
                };
                Point::X0(PointX0::new(prefix, tail)?)
            }
            PointRepr::Cantor { prefix, tail } => {
                let to_bits = |v: Vec<u8>| -> Result<Vec<bool>, RelationError> {
                    v.into_iter()
                        .map(|b| match b {
                            0 => Ok(false),
                            1 => Ok(true),
                            other => {
                                Err(RelationError::InvalidPoint(format!("{other} is not a bit")))
                            }
                        })
                        .collect()
                };
                Point::Cantor(PeriodicPoint::new(to_bits(prefix)?, to_bits(tail.period)?)?)
            }
            PointRepr::RSeq { prefix, tail } => Point::RSeq(PeriodicPoint::new(
                prefix.into_iter().map(|q| q.0).collect(),
                tail.period.into_iter().map(|q| q.0).collect(),
            )?),
            PointRepr::Pomega { values, interval } => {
                let interval = match interval {
                    Some(i) => Interval::new(i.lo.0, i.hi.0)?,
                    None => Interval::for_base(&int(1))?,
                };
                Point::Pomega(CycleListPoint::new(
                    values.into_iter().map(|q| q.0).collect(),
                    interval,
                )?)
            }
        })
    }
}

impl From<Point> for PointRepr {
    fn from(p: Point) -> Self {
        let qs = |v: &[super::rational::Rational]| v.iter().cloned().map(Q).collect::<Vec<_>>();
        match p {
            Point::X0(x) => PointRepr::X0 {
                prefix: x.prefix().to_vec(),
                tail: match x.tail() {
                    TailRule::Constant(c) => X0Tail::Constant(*c),
                    TailRule::Affine(r) => X0Tail::Affine(Q(r.clone())),
                    TailRule::PeriodicSlope(rs) => X0Tail::Slopes(qs(rs)),
                },
            },
            Point::Cantor(c) => PointRepr::Cantor {
                prefix: c.prefix().iter().map(|b| *b as u8).collect(),
                tail: Period {
                    period: c.period().iter().map(|b| *b as u8).collect(),
                },
            },
            Point::RSeq(r) => PointRepr::RSeq {
                prefix: qs(r.prefix()),
                tail: Period {
                    period: qs(r.period()),
                },
            },
            Point::Pomega(c) => PointRepr::Pomega {
                values: qs(c.values()),
                interval: Some(IntervalRepr {
                    lo: Q(c.interval().lo().clone()),
                    hi: Q(c.interval().hi().clone()),
                }),
            },
        }
    }
}

/// The source relations with exact deciders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    H0,
    E0,
    E1,
    EPlus,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::H0 => "H0",
            Relation::E0 => "E0",
            Relation::E1 => "E1",
            Relation::EPlus => "=+",
        }
    }

    fn space(self) -> &'static str {
        match self {
            Relation::H0 => "X0",
            Relation::E0 => "Cantor",
            Relation::E1 => "RSeq",
            Relation::EPlus => "Pomega",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = RelationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "H0" | "h0" => Ok(Relation::H0),
            "E0" | "e0" => Ok(Relation::E0),
            "E1" | "e1" => Ok(Relation::E1),
            "=+" | "eplus" | "E+" => Ok(Relation::EPlus),
            other => Err(RelationError::UnknownRelation(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub related: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<u64>,
}

/// Runs the decider for `relation` on two points of its space.
pub fn decide(relation: Relation, a: &Point, b: &Point) -> Result<Verdict, RelationError> {
    let mismatch = |p: &Point| RelationError::TypeMismatch {
        relation: relation.name(),
        expected: relation.space(),
        found: p.space_name(),
    };
    let plain = |related| Verdict {
        related,
        witness: None,
    };
    match (relation, a, b) {
        (Relation::H0, Point::X0(x), Point::X0(y)) => {
            let v = h0_decide(x, y);
            Ok(Verdict {
                related: v.is_related(),
                witness: v.witness(),
            })
        }
        (Relation::E0, Point::Cantor(x), Point::Cantor(y)) => Ok(plain(e0_decide(x, y))),
        (Relation::E1, Point::RSeq(x), Point::RSeq(y)) => Ok(plain(e1_decide(x, y))),
        (Relation::EPlus, Point::Pomega(x), Point::Pomega(y)) => Ok(plain(eplus_decide(x, y)?)),
        _ => Err(mismatch(if a.space_name() != relation.space() {
            a
        } else {
            b
        })),
    }
}

/// `(x, x') R (x) R' (y, y')` iff `x R y` and `x' R' y'`.
pub fn product_decide<A, B, E>(
    first: impl Fn(&A, &A) -> Result<bool, E>,
    second: impl Fn(&B, &B) -> Result<bool, E>,
    x: (&A, &B),
    y: (&A, &B),
) -> Result<bool, E> {
    let left = first(x.0, y.0)?;
    let right = second(x.1, y.1)?;
    Ok(left && right)
}

/// [`product_decide`] over dynamically typed points.
pub fn decide_product(
    first: Relation,
    second: Relation,
    x: (&Point, &Point),
    y: (&Point, &Point),
) -> Result<bool, RelationError> {
    product_decide(
        |a: &Point, b: &Point| decide(first, a, b).map(|v| v.related),
        |a: &Point, b: &Point| decide(second, a, b).map(|v| v.related),
        x,
        y,
    )
}
