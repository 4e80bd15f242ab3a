use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::norms::BlockDim;
use crate::DEFAULT_TOLERANCE;

/// Which sum the schedule feeds: an `l_p`-sum over a base exponent or a
/// `c_0`-sum with exponents decreasing to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Lp,
    C0,
}

impl std::str::FromStr for Flavor {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lp" => Ok(Flavor::Lp),
            "c0" => Ok(Flavor::C0),
            other => Err(ReductionError::InvalidArgument(format!(
                "unknown flavor {other:?}"
            ))),
        }
    }
}

/// Block dimensions `K_1..K_N` and exponents `p_1..p_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "ScheduleRepr")]
pub struct ParamSchedule {
    flavor: Flavor,
    base_p: f64,
    growth: Option<f64>,
    dims: Vec<BlockDim>,
    p_seq: Vec<f64>,
}

impl ParamSchedule {
    /// Assembles a schedule from explicit data. Only shape and ranges are
    /// checked here; the constraint system is the job of [`validate_schedule`].
    pub fn from_parts(
        flavor: Flavor,
        base_p: f64,
        dims: Vec<BlockDim>,
        p_seq: Vec<f64>,
        growth: Option<f64>,
    ) -> Result<Self, ReductionError> {
        if !(1.0..2.0).contains(&base_p) {
            return Err(ReductionError::InvalidArgument(format!(
                "base exponent {base_p} is outside [1, 2)"
            )));
        }
        if dims.is_empty() || dims.len() != p_seq.len() {
            return Err(ReductionError::InvalidArgument(format!(
                "need matching non-empty K and p sequences, got {} and {}",
                dims.len(),
                p_seq.len()
            )));
        }
        if let Some(p) = p_seq.iter().find(|p| !(p.is_finite() && **p >= 1.0)) {
            return Err(ReductionError::InvalidArgument(format!(
                "block exponent {p} is not in [1, inf)"
            )));
        }
        Ok(ParamSchedule {
            flavor,
            base_p,
            growth,
            dims,
            p_seq,
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn base_p(&self) -> f64 {
        self.base_p
    }

    /// The constant `c` of `K_n = ceil(exp(c n^3))` for generated schedules.
    pub fn growth(&self) -> Option<f64> {
        self.growth
    }

    pub fn n_max(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[BlockDim] {
        &self.dims
    }

    pub fn p_seq(&self) -> &[f64] {
        &self.p_seq
    }

    /// `p_n`, 1-indexed.
    pub fn p(&self, n: usize) -> f64 {
        self.p_seq[n - 1]
    }

    /// `log K_n`, 1-indexed.
    pub fn log_k(&self, n: usize) -> f64 {
        self.dims[n - 1].log()
    }

    /// `K_n`, 1-indexed, when it is known exactly.
    pub fn k(&self, n: usize) -> Option<u64> {
        self.dims[n - 1].exact_value()
    }
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    flavor: Flavor,
    base_p: f64,
    n_max: usize,
    #[serde(default)]
    growth: Option<f64>,
    #[serde(rename = "K")]
    k: Vec<Option<u64>>,
    #[serde(rename = "logK", default)]
    log_k: Option<Vec<f64>>,
    p_seq: Vec<f64>,
}

impl From<ParamSchedule> for ScheduleRepr {
    fn from(s: ParamSchedule) -> Self {
        ScheduleRepr {
            flavor: s.flavor,
            base_p: s.base_p,
            n_max: s.dims.len(),
            growth: s.growth,
            k: s.dims.iter().map(BlockDim::exact_value).collect(),
            log_k: Some(s.dims.iter().map(BlockDim::log).collect()),
            p_seq: s.p_seq,
        }
    }
}

impl TryFrom<ScheduleRepr> for ParamSchedule {
    type Error = ReductionError;

    fn try_from(r: ScheduleRepr) -> Result<Self, Self::Error> {
        if r.n_max != r.k.len() {
            return Err(ReductionError::InvalidArgument(format!(
                "n_max = {} but {} dimensions given",
                r.n_max,
                r.k.len()
            )));
        }
        if let Some(logs) = &r.log_k {
            if logs.len() != r.k.len() {
                return Err(ReductionError::InvalidArgument(
                    "K and logK differ in length".into(),
                ));
            }
        }
        let dims =
            r.k.iter()
                .enumerate()
                .map(|(i, k)| match (k, r.log_k.as_ref().map(|l| l[i])) {
                    // an exact dimension is authoritative over a supplied logarithm
                    (Some(k), _) => BlockDim::exact(*k),
                    (None, Some(log)) => BlockDim::from_log(log),
                    (None, None) => Err(crate::norms::NormError::InvalidInput(format!(
                        "block {} has neither K nor logK",
                        i + 1
                    ))),
                })
                .collect::<Result<Vec<_>, _>>()?;
        ParamSchedule::from_parts(r.flavor, r.base_p, dims, r.p_seq, r.growth)
    }
}

/// Knobs of the generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenOptions {
    /// Largest admissible `c` in `K_n = ceil(exp(c n^3))`, i.e. a cap on `log K_1`.
    pub max_growth: f64,
    /// Factor by which every gap exceeds its required minimum.
    pub slack: f64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_growth: 64.0,
            slack: 1.1,
        }
    }
}

/// [`gen_params_with`] under the default options.
pub fn gen_params(
    flavor: Flavor,
    base_p: f64,
    n_max: usize,
    margin: f64,
) -> Result<ParamSchedule, ReductionError> {
    gen_params_with(flavor, base_p, n_max, margin, &GenOptions::default())
}

/// Builds a schedule with `K_n = ceil(exp(c n^3))` and exponents placed so that
/// every gap is the required minimum times `opts.slack`.
///
/// `l_p` flavor: with budget `B = margin (2 - base_p) / 4`, `c` is chosen so
/// the whole gap series `slack * sum_{m >= 2} m / log K_m` is at most `B`,
/// and `p_n = base_p + B/2 + slack * sum_{m > n} m / log K_m`.
///
/// `c_0` flavor: `c` is chosen so `slack * sum_m 2m / log K_m <= margin / 2`,
/// and `p_n = 1 + slack * sum_{m >= n} 2m / log K_m`, which decreases to 1.
///
/// Sums run over the actual blocks up to `n_max` and continue with
/// `log K_m = c m^3` beyond it, so truncations of one infinite schedule agree.
pub fn gen_params_with(
    flavor: Flavor,
    base_p: f64,
    n_max: usize,
    margin: f64,
    opts: &GenOptions,
) -> Result<ParamSchedule, ReductionError> {
    if !(base_p.is_finite() && (1.0..2.0).contains(&base_p)) {
        return Err(ReductionError::InvalidArgument(format!(
            "base exponent {base_p} is outside [1, 2)"
        )));
    }
    if n_max == 0 {
        return Err(ReductionError::InvalidArgument("n_max must be >= 1".into()));
    }
    if !(margin > 0.0 && margin < 1.0) {
        return Err(ReductionError::InvalidArgument(format!(
            "margin {margin} is outside (0, 1)"
        )));
    }
    if !(opts.slack > 1.0 && opts.max_growth > 0.0) {
        return Err(ReductionError::InvalidArgument(
            "bad generator options".into(),
        ));
    }

    let zeta2 = PI * PI / 6.0;
    // K_1 >= 4 with room to spare
    let min_growth = 1.05 * 4f64.ln();
    let required = match flavor {
        Flavor::Lp => opts.slack * (zeta2 - 1.0) / (margin * (2.0 - base_p) / 4.0),
        Flavor::C0 => 4.0 * opts.slack * zeta2 / margin,
    }
    .max(min_growth);
    let c = required.min(opts.max_growth);

    let dims = (1..=n_max)
        .map(|n| BlockDim::ceil_exp(c * (n as f64).powi(3)))
        .collect::<Result<Vec<_>, _>>()?;
    // sum_{m > n_max} m / (c m^3)
    let beyond = inv_square_tail(n_max as u64 + 1) / c;
    let log_k = |n: usize| dims[n - 1].log();

    let mut p_seq = vec![0.0; n_max];
    match flavor {
        Flavor::Lp => {
            let floor = margin * (2.0 - base_p) / 8.0;
            p_seq[n_max - 1] = base_p + floor + opts.slack * beyond;
            for n in (1..n_max).rev() {
                p_seq[n - 1] = p_seq[n] + opts.slack * (n + 1) as f64 / log_k(n + 1);
            }
        }
        Flavor::C0 => {
            let last = n_max as f64 / log_k(n_max);
            p_seq[n_max - 1] = 1.0 + opts.slack * 2.0 * (last + beyond);
            for n in (1..n_max).rev() {
                p_seq[n - 1] = p_seq[n] + opts.slack * 2.0 * n as f64 / log_k(n);
            }
        }
    }

    let schedule = ParamSchedule::from_parts(flavor, base_p, dims, p_seq, Some(c))?;
    let report = validate_schedule(&schedule);
    if let Some(bad) = report.first_failure() {
        return Err(ReductionError::Infeasible {
            clause: bad.id.clone(),
            n: bad.n,
            slack: bad.slack,
        });
    }
    if required > opts.max_growth {
        return Err(ReductionError::Infeasible {
            clause: "growth_cap".into(),
            n: 1,
            slack: opts.max_growth - required,
        });
    }
    Ok(schedule)
}

/// `sum_{j >= m} 1/j^2` for `m >= 1`: a direct sum over the first terms and
/// an Euler-Maclaurin remainder for the rest.
fn inv_square_tail(m: u64) -> f64 {
    const DIRECT: u64 = 64;
    let direct: f64 = (m..m + DIRECT).map(|j| 1.0 / (j as f64 * j as f64)).sum();
    let x = (m + DIRECT) as f64;
    direct + 1.0 / x + 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x.powi(3)) - 1.0 / (30.0 * x.powi(5))
}

/// One checked inequality of the constraint system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseCheck {
    pub id: String,
    /// Block index the clause refers to (1-based).
    pub n: usize,
    pub holds: bool,
    /// Signed distance from the boundary; positive means satisfied with room.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub flavor: Flavor,
    pub clauses: Vec<ClauseCheck>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&ClauseCheck> {
        self.clauses.iter().find(|c| !c.holds)
    }

    pub fn min_slack(&self) -> f64 {
        self.clauses
            .iter()
            .map(|c| c.slack)
            .fold(f64::INFINITY, f64::min)
    }
}

struct Recorder(Vec<ClauseCheck>);

impl Recorder {
    /// `slack > 0`.
    fn strict(&mut self, id: &str, n: usize, slack: f64) {
        self.0.push(ClauseCheck {
            id: id.into(),
            n,
            holds: slack > 0.0,
            slack,
        });
    }

    /// `lhs >= rhs` up to relative rounding; the reported slack is `lhs - rhs`.
    fn at_least(&mut self, id: &str, n: usize, lhs: f64, rhs: f64) {
        let slack = lhs - rhs;
        self.0.push(ClauseCheck {
            id: id.into(),
            n,
            holds: slack >= -DEFAULT_TOLERANCE * rhs.abs().max(f64::MIN_POSITIVE),
            slack,
        });
    }
}

/// Checks every clause of the schedule's constraint system.
///
/// `l_p` flavor, with base exponent `p`:
/// `K_1 >= 4`; `K_n >= n^2 K_{n-1}`; `p < p_n < 2`; `(p_n)` strictly
/// decreasing; `p_1 + 1/log K_1 < 2`; `p_n - p_{n+1} >= (n+1)/log K_{n+1}`;
/// and, for every perturbation `alpha(n) <= n - 1`, the perturbed exponents
/// `p_n + alpha(n)/log K_n` stay strictly decreasing and below 2.
///
/// `c_0` flavor: `p_n > 1` strictly decreasing; `1 < p_n + n/log K_n < 2`;
/// `n/log K_n` strictly decreasing; `p_n - p_{n+1} >= 2n/log K_n`;
/// `p_1 + 1/log K_1 < 2`; and the separation
/// `|q_n - p'_m| >= min(m,n)/log K_{min(m,n)}` for `m != n` and any two
/// perturbations, evaluated at the worst case over the perturbation intervals
/// `[p_n, p_n + (n-1)/log K_n]`.
///
/// Decrease to 1 is only checkable on the truncation as positivity of
/// `p_n - 1` together with monotonicity.
pub fn validate_schedule(s: &ParamSchedule) -> ValidationReport {
    let n_max = s.n_max();
    let p = |n: usize| s.p(n);
    let l = |n: usize| s.log_k(n);
    let mut r = Recorder(Vec::new());

    match s.flavor {
        Flavor::Lp => {
            let k1 = match s.k(1) {
                Some(k) => k as f64 - 4.0,
                None => l(1) - 4f64.ln(),
            };
            r.strict_or_equal("k1_at_least_4", 1, k1);
            for n in 2..=n_max {
                let slack = match (s.k(n), s.k(n - 1)) {
                    (Some(k), Some(prev)) => k as f64 - (n * n) as f64 * prev as f64,
                    _ => l(n) - 2.0 * (n as f64).ln() - l(n - 1),
                };
                r.strict_or_equal("dim_growth", n, slack);
            }
            for n in 1..=n_max {
                r.strict("exponent_in_range", n, (p(n) - s.base_p).min(2.0 - p(n)));
            }
            for n in 1..n_max {
                r.strict("exponents_decreasing", n, p(n) - p(n + 1));
            }
            r.strict("head_room", 1, 2.0 - p(1) - 1.0 / l(1));
            for n in 1..n_max {
                r.at_least(
                    "perturbation_gap",
                    n,
                    p(n) - p(n + 1),
                    (n + 1) as f64 / l(n + 1),
                );
            }
            for n in 1..n_max {
                r.strict(
                    "perturbed_decreasing",
                    n,
                    p(n) - (p(n + 1) + n as f64 / l(n + 1)),
                );
            }
            for n in 1..=n_max {
                r.strict(
                    "perturbed_below_two",
                    n,
                    2.0 - (p(n) + (n - 1) as f64 / l(n)),
                );
            }
        }
        Flavor::C0 => {
            for n in 1..=n_max {
                r.strict("exponents_above_one", n, p(n) - 1.0);
            }
            for n in 1..n_max {
                r.strict("exponents_decreasing", n, p(n) - p(n + 1));
            }
            for n in 1..=n_max {
                let e = p(n) + n as f64 / l(n);
                r.strict("perturbed_in_range", n, (e - 1.0).min(2.0 - e));
            }
            for n in 1..n_max {
                r.strict(
                    "ratio_decreasing",
                    n,
                    n as f64 / l(n) - (n + 1) as f64 / l(n + 1),
                );
            }
            for n in 1..n_max {
                r.at_least("c0_gap", n, p(n) - p(n + 1), 2.0 * n as f64 / l(n));
            }
            r.strict("head_room", 1, 2.0 - p(1) - 1.0 / l(1));
            for n in 1..=n_max {
                let worst = (1..=n_max)
                    .filter(|&m| m != n)
                    .map(|m| {
                        let (lo, hi) = (m.min(n), m.max(n));
                        // intervals are ordered, the higher index sits lower
                        let gap = p(lo) - (p(hi) + (hi - 1) as f64 / l(hi));
                        gap - lo as f64 / l(lo)
                    })
                    .fold(f64::INFINITY, f64::min);
                if worst.is_finite() {
                    r.0.push(ClauseCheck {
                        id: "separation".into(),
                        n,
                        holds: worst >= -DEFAULT_TOLERANCE,
                        slack: worst,
                    });
                }
            }
        }
    }
    ValidationReport {
        flavor: s.flavor,
        clauses: r.0,
    }
}

impl Recorder {
    /// Non-strict integer inequality: `slack >= 0`.
    fn strict_or_equal(&mut self, id: &str, n: usize, slack: f64) {
        self.0.push(ClauseCheck {
            id: id.into(),
            n,
            holds: slack >= 0.0,
            slack,
        });
    }
}
