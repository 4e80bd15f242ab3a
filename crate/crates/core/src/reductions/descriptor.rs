use serde::ser::{Serialize, SerializeMap, Serializer};

use super::schedule::{validate_schedule, Flavor, ParamSchedule};
use super::ReductionError;
use crate::norms::{BlockSpec, Exponent, Outer, SumSpace};
use crate::relations::{Point, PointX0};
use crate::DEFAULT_TOLERANCE;

/// The truncation `l_p(l_{p_n}^{K_n}(alpha))` (or its `c_0` analogue) of the
/// space attached to a point `alpha` of `X_0`, with block `n` carrying the
/// perturbed exponent `e_n = p_n + alpha(n) / log K_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceDescriptor {
    space: SumSpace,
    schedule: ParamSchedule,
    point: PointX0,
    alpha: Vec<u64>,
    exponents: Vec<f64>,
}

impl SpaceDescriptor {
    pub fn space(&self) -> &SumSpace {
        &self.space
    }

    pub fn schedule(&self) -> &ParamSchedule {
        &self.schedule
    }

    pub fn point(&self) -> &PointX0 {
        &self.point
    }

    /// `alpha(1..=n_max)`.
    pub fn alpha(&self) -> &[u64] {
        &self.alpha
    }

    /// `e_1..e_{n_max}`.
    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }
}

/// Builds the descriptor of `point` over a validated schedule.
pub fn space_for(
    point: &PointX0,
    schedule: &ParamSchedule,
) -> Result<SpaceDescriptor, ReductionError> {
    let report = validate_schedule(schedule);
    if let Some(bad) = report.first_failure() {
        return Err(ReductionError::ScheduleInvalid {
            clause: bad.id.clone(),
            n: bad.n,
            slack: bad.slack,
        });
    }
    let n_max = schedule.n_max();
    let alpha: Vec<u64> = (1..=n_max as u64).map(|n| point.coordinate(n)).collect();
    let exponents: Vec<f64> = (1..=n_max)
        .map(|n| schedule.p(n) + alpha[n - 1] as f64 / schedule.log_k(n))
        .collect();
    let blocks = exponents
        .iter()
        .zip(schedule.dims())
        .map(|(e, dim)| {
            Ok(BlockSpec {
                exponent: Exponent::new(*e)?,
                dim: *dim,
            })
        })
        .collect::<Result<Vec<_>, crate::norms::NormError>>()?;
    let outer = match schedule.flavor() {
        Flavor::Lp => Outer::lp(schedule.base_p())?,
        Flavor::C0 => Outer::C0,
    };
    Ok(SpaceDescriptor {
        space: SumSpace::new(outer, blocks)?,
        schedule: schedule.clone(),
        point: point.clone(),
        alpha,
        exponents,
    })
}

fn shared_schedule<'a>(
    d1: &'a SpaceDescriptor,
    d2: &SpaceDescriptor,
) -> Result<&'a ParamSchedule, ReductionError> {
    if d1.schedule != d2.schedule {
        return Err(ReductionError::ScheduleMismatch);
    }
    Ok(&d1.schedule)
}

fn check_truncation(n: usize, n_max: usize) -> Result<(), ReductionError> {
    if n == 0 || n > n_max {
        return Err(ReductionError::TruncationOutOfRange { n, n_max });
    }
    Ok(())
}

/// Equivalence constant of block `n` of two descriptors over one schedule.
///
/// `K^{|1/e - 1/e'|} = exp(|e - e'| log K / (e e'))`, and `|e - e'| log K` is
/// exactly `|alpha(n) - beta(n)|`, so the log K factor never multiplies a
/// rounded difference.
fn block_constant(d1: &SpaceDescriptor, d2: &SpaceDescriptor, n: usize) -> f64 {
    let (a, b) = (d1.alpha[n - 1], d2.alpha[n - 1]);
    if a == b {
        return 1.0;
    }
    let (e, f) = (d1.exponents[n - 1], d2.exponents[n - 1]);
    (a.abs_diff(b) as f64 / (e * f)).exp()
}

/// Equivalence constant of the canonical bases of the first `n` blocks.
///
/// Blocks align and the outer norm is shared, so the constant of the
/// block-diagonal identity is the largest blockwise constant.
pub fn truncated_eq_const(
    d1: &SpaceDescriptor,
    d2: &SpaceDescriptor,
    n: usize,
) -> Result<f64, ReductionError> {
    let s = shared_schedule(d1, d2)?;
    check_truncation(n, s.n_max())?;
    Ok((1..=n)
        .map(|m| block_constant(d1, d2, m))
        .fold(1.0, f64::max))
}

/// `truncated_eq_const` for every `n = 1..=n_max`.
pub fn truncated_eq_consts(
    d1: &SpaceDescriptor,
    d2: &SpaceDescriptor,
) -> Result<Vec<f64>, ReductionError> {
    let s = shared_schedule(d1, d2)?;
    let mut running = 1.0f64;
    Ok((1..=s.n_max())
        .map(|m| {
            running = running.max(block_constant(d1, d2, m));
            running
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GapRow {
    pub n: usize,
    /// `e_n(d1) - e_n(d2)`.
    pub gap: f64,
    /// `C / log K_n`.
    pub bound: f64,
    pub holds: bool,
}

/// Per-block check of `e_n(d1) - e_n(d2) <= C / log K_n`.
pub fn gap_bound_check(
    d1: &SpaceDescriptor,
    d2: &SpaceDescriptor,
    c: f64,
) -> Result<Vec<GapRow>, ReductionError> {
    let s = shared_schedule(d1, d2)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(ReductionError::InvalidArgument(format!(
            "bound constant {c} must be positive"
        )));
    }
    Ok((1..=s.n_max())
        .map(|n| {
            let l = s.log_k(n);
            // same p_n on both sides, so the gap is the perturbation difference
            let gap = (d1.alpha[n - 1] as f64 - d2.alpha[n - 1] as f64) / l;
            let bound = c / l;
            GapRow {
                n,
                gap,
                bound,
                holds: gap <= bound * (1.0 + DEFAULT_TOLERANCE),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SeparationRow {
    pub n: usize,
    pub m: usize,
    /// `|e_n(d1) - e_m(d2)|`.
    pub distance: f64,
    /// `min(m, n) / log K_{min(m, n)}`.
    pub bound: f64,
    pub holds: bool,
}

/// `|e_n(d1) - e_m(d2)| >= min(m,n) / log K_{min(m,n)}` for all `m != n`.
pub fn separation_report(
    d1: &SpaceDescriptor,
    d2: &SpaceDescriptor,
) -> Result<Vec<SeparationRow>, ReductionError> {
    let s = shared_schedule(d1, d2)?;
    let n_max = s.n_max();
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for m in (1..=n_max).filter(|&m| m != n) {
            let lo = m.min(n);
            let distance = (d1.exponents[n - 1] - d2.exponents[m - 1]).abs();
            let bound = lo as f64 / s.log_k(lo);
            rows.push(SeparationRow {
                n,
                m,
                distance,
                bound,
                holds: distance >= bound * (1.0 - DEFAULT_TOLERANCE),
            });
        }
    }
    Ok(rows)
}

/// The terms of `p - q <= 4(1/q - 1/p) <= 8 log C / log(K/2) <= 16 log C / log K`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ChainCheck {
    pub terms: [f64; 4],
    pub holds: bool,
}

/// Evaluates the chain for exponents `1 <= q <= p <= 2` whose blocks of
/// dimension `K` are `C`-equivalent. Only defined for `K >= 4`, where
/// `log(K/2) >= log K / 2`.
pub fn constant_chain(p: f64, q: f64, c: f64, log_k: f64) -> Result<ChainCheck, ReductionError> {
    if !(1.0 <= q && q <= p && p <= 2.0) {
        return Err(ReductionError::InvalidArgument(format!(
            "need 1 <= q <= p <= 2, got p = {p}, q = {q}"
        )));
    }
    if !(log_k >= 4f64.ln()) {
        return Err(ReductionError::InvalidArgument(
            "the chain needs K >= 4".into(),
        ));
    }
    if !(c >= 1.0) {
        return Err(ReductionError::InvalidArgument(format!("constant {c} < 1")));
    }
    let terms = [
        p - q,
        4.0 * (1.0 / q - 1.0 / p),
        8.0 * c.ln() / (log_k - 2f64.ln()),
        16.0 * c.ln() / log_k,
    ];
    let tol = 1.0 + DEFAULT_TOLERANCE;
    let holds = terms.windows(2).all(|w| w[0] <= w[1] * tol + f64::EPSILON);
    Ok(ChainCheck { terms, holds })
}

impl Serialize for SpaceDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Block {
            p: f64,
            #[serde(rename = "K")]
            k: Option<u64>,
            #[serde(rename = "logK")]
            log_k: f64,
        }
        #[derive(serde::Serialize)]
        struct Provenance<'a> {
            map: &'static str,
            schedule: &'a ParamSchedule,
            point: Point,
            alpha: &'a [u64],
            perturbed: &'a [f64],
        }
        let blocks: Vec<Block> = self
            .space
            .blocks()
            .iter()
            .map(|b| Block {
                p: b.exponent.value(),
                k: b.dim.exact_value(),
                log_k: b.dim.log(),
            })
            .collect();
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("outer", &OuterJson(self.space.outer()))?;
        map.serialize_entry("blocks", &blocks)?;
        map.serialize_entry(
            "provenance",
            &Provenance {
                map: match self.schedule.flavor() {
                    Flavor::Lp => "lp",
                    Flavor::C0 => "c0",
                },
                schedule: &self.schedule,
                point: Point::X0(self.point.clone()),
                alpha: &self.alpha,
                perturbed: &self.exponents,
            },
        )?;
        map.end()
    }
}

pub(super) struct OuterJson(pub Outer);

impl Serialize for OuterJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self.0 {
            Outer::Lp(p) => {
                map.serialize_entry("type", "lp")?;
                map.serialize_entry("p", &p)?;
            }
            Outer::C0 => map.serialize_entry("type", "c0")?,
        }
        map.end()
    }
}
