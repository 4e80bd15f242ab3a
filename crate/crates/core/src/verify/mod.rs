//! Seeded property sweeps producing one report row per checked inequality.
//!
//! Every case draws from its own generator seeded by
//! `sha256(seed || case_id)`, so rows do not depend on how cases are
//! scheduled across threads.

pub mod gen;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::norms::{
    eq_const_closed_form, lemma_2_1_bounds, lemma_2_4_check, BlockVector, EquivalenceOracle,
    Exponent, NormError, Outer, SumSpace,
};
use crate::reductions::{
    gap_bound_check, gen_params, space_for, summand_detect, truncated_eq_consts, validate_schedule,
    x_alpha, Flavor, ParamSchedule, ReductionError,
};
use crate::relations::rational::{int, rat};
use crate::relations::{e0_decide, eplus_decide, h0_decide, j_embed, Interval, PointX0, TailRule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("schedule invalid: clause {clause} fails at n = {n} (slack {slack:e})")]
    ScheduleInvalid {
        clause: String,
        n: usize,
        slack: f64,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Lemma21,
    Lemma24,
    Cor22,
    Prop25,
    Eplus,
    JEmbed,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Lemma21,
        Suite::Lemma24,
        Suite::Cor22,
        Suite::Prop25,
        Suite::Eplus,
        Suite::JEmbed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma21 => "lemma21",
            Suite::Lemma24 => "lemma24",
            Suite::Cor22 => "cor22",
            Suite::Prop25 => "prop25",
            Suite::Eplus => "eplus",
            Suite::JEmbed => "j-embed",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| VerifyError::InvalidConfig(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerance: f64,
    pub n_max: usize,
    pub oracle_bound: u64,
    pub margin: f64,
    /// Random cases per suite.
    pub cases: usize,
    /// Fixed schedule for the schedule-based suites instead of generated ones.
    pub schedule: Option<ParamSchedule>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            tolerance: crate::DEFAULT_TOLERANCE,
            n_max: 12,
            oracle_bound: crate::norms::DEFAULT_ORACLE_BOUND,
            margin: 0.5,
            cases: 100,
            schedule: None,
        }
    }
}

impl RunConfig {
    fn check(&self) -> Result<(), VerifyError> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(VerifyError::InvalidConfig(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        if self.n_max == 0 {
            return Err(VerifyError::InvalidConfig("n_max must be >= 1".into()));
        }
        if !(self.margin > 0.0 && self.margin < 1.0) {
            return Err(VerifyError::InvalidConfig(format!(
                "margin {} is outside (0, 1)",
                self.margin
            )));
        }
        if self.oracle_bound == 0 {
            return Err(VerifyError::InvalidConfig(
                "oracle bound must be >= 1".into(),
            ));
        }
        if let Some(s) = &self.schedule {
            if let Some(bad) = validate_schedule(s).first_failure() {
                return Err(VerifyError::ScheduleInvalid {
                    clause: bad.id.clone(),
                    n: bad.n,
                    slack: bad.slack,
                });
            }
        }
        Ok(())
    }
}

/// One checked statement `lhs <= rhs` (or, for equivalences, `lhs == rhs`
/// with both sides encoded as 0/1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRow {
    pub suite: &'static str,
    pub case_id: String,
    pub inputs_digest: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub slack: f64,
}

/// Seed for one case, independent of execution order.
pub fn sub_seed(seed: u64, case_id: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(case_id.as_bytes());
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("digest has 32 bytes"))
}

fn digest(inputs: &serde_json::Value) -> String {
    hex::encode(Sha256::digest(inputs.to_string().as_bytes()))
}

struct Case<'a> {
    suite: Suite,
    id: String,
    inputs: serde_json::Value,
    cfg: &'a RunConfig,
}

impl Case<'_> {
    /// `lhs <= rhs` up to relative tolerance.
    fn at_most(&self, tag: &str, lhs: f64, rhs: f64) -> CaseRow {
        let holds = lhs <= rhs * (1.0 + self.cfg.tolerance);
        self.row(tag, lhs, rhs, holds, rhs - lhs)
    }

    fn agrees(&self, tag: &str, lhs: bool, rhs: bool) -> CaseRow {
        let holds = lhs == rhs;
        self.row(
            tag,
            lhs as u8 as f64,
            rhs as u8 as f64,
            holds,
            if holds { 0.0 } else { -1.0 },
        )
    }

    fn row(&self, tag: &str, lhs: f64, rhs: f64, holds: bool, slack: f64) -> CaseRow {
        let case_id = if tag.is_empty() {
            self.id.clone()
        } else {
            format!("{}/{}", self.id, tag)
        };
        CaseRow {
            suite: self.suite.name(),
            case_id,
            inputs_digest: digest(&self.inputs),
            lhs,
            rhs,
            holds,
            slack,
        }
    }
}

/// Runs one suite (or all of them, in a fixed order).
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<CaseRow>, VerifyError> {
    cfg.check()?;
    if suite == Suite::All {
        let mut rows = Vec::new();
        for s in Suite::EACH {
            rows.extend(run_suite(s, cfg)?);
        }
        return Ok(rows);
    }
    let per_case = (0..cfg.cases)
        .into_par_iter()
        .map(|i| {
            let id = format!("{}-{i:05}", suite.name());
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, &id));
            match suite {
                Suite::Lemma21 => sandwich_case(&mut rng, id, cfg),
                Suite::Lemma24 => disjoint_sum_case(&mut rng, id, cfg),
                Suite::Cor22 => truncation_case(&mut rng, id, cfg),
                Suite::Prop25 => schedule_case(&mut rng, id, cfg),
                Suite::Eplus => eplus_case(&mut rng, id, cfg),
                Suite::JEmbed => j_embed_case(&mut rng, id, cfg),
                Suite::All => unreachable!("expanded above"),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows: Vec<CaseRow> = per_case.into_iter().flatten().collect();
    if suite == Suite::Lemma24 {
        rows.push(disjoint_sum_tightness(cfg)?);
    }
    if suite == Suite::Prop25 {
        rows.extend(schedule_divergence(cfg)?);
    }
    Ok(rows)
}

const ORACLE_GRID: [f64; 6] = [1.0, 1.2, 1.5, 2.0, 3.0, f64::INFINITY];
const ORACLE_SAMPLES: usize = 2000;

fn exponent(p: f64) -> Exponent {
    Exponent::new(p).expect("grid exponents are >= 1")
}

fn sandwich_case(
    rng: &mut ChaCha8Rng,
    id: String,
    cfg: &RunConfig,
) -> Result<Vec<CaseRow>, VerifyError> {
    let c = rng.random_range(1.0..=4.0);
    let p = rng.random_range(1.0..=c);
    let q = rng.random_range(1.0..=c);
    let k = rng.random_range(1..=1_000_000u64);
    let b = lemma_2_1_bounds(p, q, k, c)?;
    let case = Case {
        suite: Suite::Lemma21,
        id,
        inputs: serde_json::json!({"p": p, "q": q, "K": k, "c": c}),
        cfg,
    };
    let mut rows = vec![
        case.at_most("lower", b.lower, b.constant),
        case.at_most("upper", b.constant, b.upper),
    ];

    // brute-force constant on a small grid instance
    let op = *ORACLE_GRID
        .get(rng.random_range(0..6))
        .expect("index in range");
    let oq = *ORACLE_GRID
        .get(rng.random_range(0..6))
        .expect("index in range");
    let ok = rng.random_range(1..=16u64.min(cfg.oracle_bound));
    let oracle = EquivalenceOracle {
        bound: cfg.oracle_bound,
    };
    let est = oracle.estimate(exponent(op), exponent(oq), ok, ORACLE_SAMPLES, rng.random())?;
    let closed = eq_const_closed_form(exponent(op), exponent(oq), ok);
    let oracle_case = Case {
        inputs: serde_json::json!({"p": op.to_string(), "q": oq.to_string(), "K": ok}),
        ..case
    };
    rows.push(oracle_case.at_most("oracle", est.value, closed));
    rows.push(oracle_case.at_most("oracle-attained", closed, est.flat_max));
    Ok(rows)
}

fn disjoint_sum_case(
    rng: &mut ChaCha8Rng,
    id: String,
    cfg: &RunConfig,
) -> Result<Vec<CaseRow>, VerifyError> {
    let p = rng.random_range(1.0..2.0);
    let nblocks = rng.random_range(1..=6usize);
    let dims: Vec<(f64, u64)> = (0..nblocks)
        .map(|_| (rng.random_range(p..=2.0), rng.random_range(1..=8u64)))
        .collect();
    let space = SumSpace::from_dims(Outer::lp(p)?, &dims)?;
    let coords: Vec<(usize, usize)> = dims
        .iter()
        .enumerate()
        .flat_map(|(b, (_, k))| (0..*k as usize).map(move |i| (b, i)))
        .collect();
    let k = rng.random_range(1..=coords.len().min(32));
    // each coordinate goes to one of the k vectors, each vector gets at least one
    let mut owner: Vec<usize> = (0..coords.len())
        .map(|i| if i < k { i } else { rng.random_range(0..k) })
        .collect();
    for i in (1..owner.len()).rev() {
        owner.swap(i, rng.random_range(0..=i));
    }
    let mut coeffs = vec![vec![vec![0.0; 0]; nblocks]; k];
    for c in coeffs.iter_mut() {
        for (b, (_, dim)) in dims.iter().enumerate() {
            c[b] = vec![0.0; *dim as usize];
        }
    }
    for ((b, i), v) in coords.iter().zip(&owner) {
        let mag = rng.random_range(0.1..2.0);
        coeffs[*v][*b][*i] = if rng.random_bool(0.5) { mag } else { -mag };
    }
    let ys = coeffs
        .into_iter()
        .map(|c| BlockVector::new(&space, c))
        .collect::<Result<Vec<_>, _>>()?;
    let out = lemma_2_4_check(&ys, Exponent::new(p)?, 1.0)?;
    let case = Case {
        suite: Suite::Lemma24,
        id,
        inputs: serde_json::json!({"p": p, "blocks": dims, "k": k}),
        cfg,
    };
    Ok(vec![case.at_most("", out.lhs, out.rhs)])
}

fn disjoint_sum_tightness(cfg: &RunConfig) -> Result<CaseRow, VerifyError> {
    let (r, k) = (1.7, 12usize);
    let space = SumSpace::from_dims(Outer::lp(1.3)?, &[(r, k as u64)])?;
    let ys = (0..k)
        .map(|i| BlockVector::unit(&space, 0, i))
        .collect::<Result<Vec<_>, _>>()?;
    let out = lemma_2_4_check(&ys, Exponent::new(1.3)?, 1.0)?;
    let case = Case {
        suite: Suite::Lemma24,
        id: "lemma24-tight".into(),
        inputs: serde_json::json!({"r": r, "k": k}),
        cfg,
    };
    let equal = (out.lhs - out.rhs).abs() <= cfg.tolerance * out.rhs;
    Ok(case.row("", out.lhs, out.rhs, equal, -(out.lhs - out.rhs).abs()))
}

fn schedule_for(rng: &mut ChaCha8Rng, cfg: &RunConfig) -> Result<ParamSchedule, VerifyError> {
    match &cfg.schedule {
        Some(s) => Ok(s.clone()),
        None => Ok(gen_params(
            Flavor::Lp,
            rng.random_range(1.0..1.5),
            cfg.n_max,
            cfg.margin,
        )?),
    }
}

fn related_pair(rng: &mut ChaCha8Rng) -> (PointX0, PointX0, u64) {
    let a = gen::point_x0(rng);
    let width = rng.random_range(0..=8);
    let b = gen::nearby_x0(rng, &a, width);
    let n0 = h0_decide(&a, &b)
        .witness()
        .expect("nearby points are related");
    (a, b, n0)
}

fn truncation_case(
    rng: &mut ChaCha8Rng,
    id: String,
    cfg: &RunConfig,
) -> Result<Vec<CaseRow>, VerifyError> {
    let schedule = schedule_for(rng, cfg)?;
    let (a, b, n0) = related_pair(rng);
    let consts = truncated_eq_consts(&space_for(&a, &schedule)?, &space_for(&b, &schedule)?)?;
    let worst = consts.iter().copied().fold(1.0, f64::max);
    let case = Case {
        suite: Suite::Cor22,
        id,
        inputs: serde_json::json!({
            "schedule": schedule,
            "a": crate::relations::Point::X0(a),
            "b": crate::relations::Point::X0(b),
        }),
        cfg,
    };
    Ok(vec![case.at_most("", worst, (2.0 * n0 as f64).exp())])
}

fn schedule_case(
    rng: &mut ChaCha8Rng,
    id: String,
    cfg: &RunConfig,
) -> Result<Vec<CaseRow>, VerifyError> {
    let schedule = schedule_for(rng, cfg)?;
    let (a, b, n0) = related_pair(rng);
    let c = (n0 as f64).max(0.5);
    let rows = gap_bound_check(&space_for(&a, &schedule)?, &space_for(&b, &schedule)?, c)?;
    // compare in units of 1/log K_n: gap * log K_n against C
    let worst = rows
        .iter()
        .map(|r| r.gap / r.bound * c)
        .fold(f64::NEG_INFINITY, f64::max);
    let case = Case {
        suite: Suite::Prop25,
        id,
        inputs: serde_json::json!({
            "schedule": schedule,
            "a": crate::relations::Point::X0(a),
            "b": crate::relations::Point::X0(b),
            "C": c,
        }),
        cfg,
    };
    let holds = rows.iter().all(|r| r.holds);
    Ok(vec![case.row("", worst, c, holds, c - worst)])
}

/// The identity-slope point against zero fails the gap bound exactly beyond
/// `C + 1`, for a few constants `C`.
fn schedule_divergence(cfg: &RunConfig) -> Result<Vec<CaseRow>, VerifyError> {
    let schedule = match &cfg.schedule {
        Some(s) => s.clone(),
        None => gen_params(Flavor::Lp, 1.0, cfg.n_max, cfg.margin)?,
    };
    let id = PointX0::with_tail(TailRule::Affine(int(1))).expect("slope 1 is admissible");
    let (di, dz) = (
        space_for(&id, &schedule)?,
        space_for(&PointX0::zero(), &schedule)?,
    );
    let mut out = Vec::new();
    for c in [1.0, 2.5, 4.0] {
        let rows = gap_bound_check(&di, &dz, c)?;
        let mismatches = rows
            .iter()
            .filter(|r| r.holds != ((r.n as f64) <= c + 1.0))
            .count();
        let case = Case {
            suite: Suite::Prop25,
            id: format!("prop25-diverge-C{c}"),
            inputs: serde_json::json!({"schedule": schedule, "C": c}),
            cfg,
        };
        out.push(case.row(
            "",
            mismatches as f64,
            0.0,
            mismatches == 0,
            -(mismatches as f64),
        ));
    }
    Ok(out)
}

fn eplus_case(
    rng: &mut ChaCha8Rng,
    id: String,
    cfg: &RunConfig,
) -> Result<Vec<CaseRow>, VerifyError> {
    let base = int(1);
    let interval = Interval::for_base(&base).expect("1 < 2");
    let pool = gen::value_pool(&base);
    let b = gen::cycle_point(rng, &pool, &interval);
    let c = if rng.random_bool(0.5) {
        gen::cycle_like(rng, &b, &pool)
    } else {
        gen::cycle_point(rng, &pool, &interval)
    };
    let same = eplus_decide(&b, &c).expect("shared interval");
    let (xb, xc) = (x_alpha(&b, &base)?, x_alpha(&c, &base)?);
    let q = rat(rng.random_range(8..=16), 8);
    let detected = summand_detect(&q, &xb);
    let expected = q == base || b.value_set().contains(&q);
    let case = Case {
        suite: Suite::Eplus,
        id,
        inputs: serde_json::json!({
            "b": crate::relations::Point::Pomega(b),
            "c": crate::relations::Point::Pomega(c),
            "q": crate::relations::rational::Q(q),
        }),
        cfg,
    };
    Ok(vec![
        case.agrees("parts", same, xb.parts() == xc.parts()),
        case.agrees("summand", detected, expected),
    ])
}

fn j_embed_case(
    rng: &mut ChaCha8Rng,
    id: String,
    cfg: &RunConfig,
) -> Result<Vec<CaseRow>, VerifyError> {
    let a = gen::bits(rng);
    let b = if rng.random_bool(0.5) {
        gen::bits_like(rng, &a)
    } else {
        gen::bits(rng)
    };
    let related = h0_decide(&j_embed(&a), &j_embed(&b)).is_related();
    let case = Case {
        suite: Suite::JEmbed,
        id,
        inputs: serde_json::json!({
            "a": crate::relations::Point::Cantor(a.clone()),
            "b": crate::relations::Point::Cantor(b.clone()),
        }),
        cfg,
    };
    Ok(vec![case.agrees("", e0_decide(&a, &b), related)])
}
