use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use thiserror::Error;

use redlab_core::hierarchy::{Hierarchy, HierarchyError};
use redlab_core::reductions::{
    gen_params, h_direct_sum, space_for, validate_schedule, x_alpha, DirectSumMap, Flavor,
    ParamSchedule, ReductionError,
};
use redlab_core::relations::rational::{parse_rational, to_f64, Rational};
use redlab_core::relations::{decide, Point, Relation, RelationError};
use redlab_core::verify::{run_suite, RunConfig, Suite, VerifyError};

use crate::output::{csv_report, emit, to_json};
use crate::{Cli, Command, FlavorArg, GlobalOpts, GraphFormat, HierarchyAction, MapArg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("malformed input {path}: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error("output error: {0}")]
    Io(#[from] io::Error),
    #[error("infeasible: clause {clause} fails at n = {n}")]
    Infeasible {
        clause: String,
        n: usize,
        slack: f64,
    },
    #[error("schedule invalid: clause {clause} fails at n = {n}")]
    ScheduleInvalid {
        clause: String,
        n: usize,
        slack: f64,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Infeasible { .. } | CliError::ScheduleInvalid { .. } => 2,
            _ => 1,
        }
    }

    /// One JSON line describing the failure.
    pub fn report(&self) -> String {
        let (kind, clause) = match self {
            CliError::Usage(_) => ("usage", None),
            CliError::Read { .. } => ("read", None),
            CliError::Malformed { .. } => ("malformed", None),
            CliError::Io(_) => ("io", None),
            CliError::Infeasible { clause, n, slack } => ("infeasible", Some((clause, n, slack))),
            CliError::ScheduleInvalid { clause, n, slack } => {
                ("schedule_invalid", Some((clause, n, slack)))
            }
        };
        let mut v = serde_json::json!({"error": kind, "message": self.to_string()});
        if let Some((clause, n, slack)) = clause {
            v["clause"] = clause.as_str().into();
            v["n"] = (*n).into();
            v["slack"] = (*slack).into();
        }
        to_json(&v)
            .unwrap_or_else(|_| self.to_string())
            .trim_end()
            .to_string()
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Infeasible { clause, n, slack } => {
                CliError::Infeasible { clause, n, slack }
            }
            ReductionError::ScheduleInvalid { clause, n, slack } => {
                CliError::ScheduleInvalid { clause, n, slack }
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::ScheduleInvalid { clause, n, slack } => {
                CliError::ScheduleInvalid { clause, n, slack }
            }
            VerifyError::Reduction(r) => r.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<RelationError> for CliError {
    fn from(e: RelationError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<HierarchyError> for CliError {
    fn from(e: HierarchyError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Malformed {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn check_globals(g: &GlobalOpts) -> Result<(), CliError> {
    if !(g.tolerance > 0.0 && g.tolerance.is_finite()) {
        return Err(CliError::Usage(format!(
            "tolerance {} must be positive",
            g.tolerance
        )));
    }
    if g.n_max == 0 {
        return Err(CliError::Usage("--n-max must be >= 1".into()));
    }
    Ok(())
}

/// Runs the parsed command; the returned value is the process exit code.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let g = &cli.global;
    check_globals(g)?;
    let out = g.out.as_deref();
    match &cli.command {
        Command::GenParams { flavor, base_p } => {
            let schedule = gen_params(flavor_of(*flavor), *base_p, g.n_max, g.margin)?;
            emit(out, &to_json(&schedule)?)?;
            Ok(0)
        }
        Command::Decide { relation, a, b } => cmd_decide(relation, a, b, out),
        Command::Reduce {
            map,
            schedule,
            base_p,
            points,
        } => cmd_reduce(g, *map, schedule.as_deref(), base_p, points),
        Command::Verify {
            suite,
            cases,
            oracle_bound,
            schedule,
        } => cmd_verify(g, suite, *cases, *oracle_bound, schedule.as_deref()),
        Command::Hierarchy { action } => {
            let h = Hierarchy::seeded();
            match action {
                HierarchyAction::Export { format } => match format {
                    GraphFormat::Dot => emit(out, &h.export_dot())?,
                    GraphFormat::Json => emit(out, &to_json(&h.to_json())?)?,
                },
                HierarchyAction::Query { from, to } => {
                    let reachable = h.reachable(from, to)?;
                    let v = serde_json::json!({
                        "from": from,
                        "to": to,
                        "reachable": reachable,
                        "bireducible": h.bireducible(from, to)?,
                    });
                    emit(out, &to_json(&v)?)?;
                    return Ok(if reachable { 0 } else { 3 });
                }
            }
            Ok(0)
        }
    }
}

fn flavor_of(f: FlavorArg) -> Flavor {
    match f {
        FlavorArg::Lp => Flavor::Lp,
        FlavorArg::C0 => Flavor::C0,
    }
}

#[derive(Deserialize)]
struct PointPair {
    first: Point,
    second: Point,
}

fn parse_relations(spec: &str) -> Result<Vec<Relation>, CliError> {
    spec.split(['x', '⊗', '*'])
        .map(|part| part.trim().parse::<Relation>().map_err(CliError::from))
        .collect()
}

fn cmd_decide(relation: &str, a: &Path, b: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let relations = parse_relations(relation)?;
    let verdict = match relations.as_slice() {
        [r] => {
            let (x, y): (Point, Point) = (read_json(a)?, read_json(b)?);
            serde_json::to_value(decide(*r, &x, &y)?).expect("verdicts serialize")
        }
        [r1, r2] => {
            let (x, y): (PointPair, PointPair) = (read_json(a)?, read_json(b)?);
            let first = decide(*r1, &x.first, &y.first)?;
            let second = decide(*r2, &x.second, &y.second)?;
            serde_json::json!({
                "related": first.related && second.related,
                "first": first,
                "second": second,
            })
        }
        _ => {
            return Err(CliError::Usage(format!(
                "cannot decide {relation:?}: at most two factors"
            )))
        }
    };
    let related = verdict["related"]
        .as_bool()
        .expect("verdict has a related flag");
    emit(out, &to_json(&verdict)?)?;
    Ok(if related { 0 } else { 3 })
}

fn load_schedule(path: &Path) -> Result<ParamSchedule, CliError> {
    read_json(path)
}

fn parse_base(text: &str) -> Result<Rational, CliError> {
    parse_rational(text)
        .ok_or_else(|| CliError::Usage(format!("cannot parse {text:?} as a rational")))
}

fn x0_point(p: Point, path: &Path) -> Result<redlab_core::relations::PointX0, CliError> {
    match p {
        Point::X0(x) => Ok(x),
        other => Err(CliError::Malformed {
            path: path.to_path_buf(),
            message: format!("expected an X0 point, found {}", other.space_name()),
        }),
    }
}

fn cycle_point(p: Point, path: &Path) -> Result<redlab_core::relations::CycleListPoint, CliError> {
    match p {
        Point::Pomega(x) => Ok(x),
        other => Err(CliError::Malformed {
            path: path.to_path_buf(),
            message: format!("expected a Pomega point, found {}", other.space_name()),
        }),
    }
}

fn cmd_reduce(
    g: &GlobalOpts,
    map: MapArg,
    schedule: Option<&Path>,
    base_p: &str,
    points: &[PathBuf],
) -> Result<u8, CliError> {
    let base = parse_base(base_p)?;
    let want_points = if map == MapArg::DirectSum { 2 } else { 1 };
    if points.len() != want_points {
        return Err(CliError::Usage(format!(
            "this map takes {want_points} point file(s)"
        )));
    }
    let text = match map {
        MapArg::LpSchedule | MapArg::C0Schedule => {
            let flavor = if map == MapArg::LpSchedule {
                Flavor::Lp
            } else {
                Flavor::C0
            };
            let s = match schedule {
                Some(path) => {
                    let s = load_schedule(path)?;
                    if s.flavor() != flavor {
                        return Err(CliError::Usage(
                            "schedule flavor does not match the map".into(),
                        ));
                    }
                    s
                }
                None => gen_params(flavor, to_f64(&base), g.n_max, g.margin)?,
            };
            let a = x0_point(read_json(&points[0])?, &points[0])?;
            to_json(&space_for(&a, &s)?)?
        }
        MapArg::LpSum => {
            let b = cycle_point(read_json(&points[0])?, &points[0])?;
            to_json(&x_alpha(&b, &base)?)?
        }
        MapArg::DirectSum => {
            let a = x0_point(read_json(&points[0])?, &points[0])?;
            let b = cycle_point(read_json(&points[1])?, &points[1])?;
            let h = match schedule {
                Some(path) => {
                    let s = load_schedule(path)?;
                    if let Some(bad) = validate_schedule(&s).first_failure() {
                        return Err(CliError::ScheduleInvalid {
                            clause: bad.id.clone(),
                            n: bad.n,
                            slack: bad.slack,
                        });
                    }
                    h_direct_sum(&a, &b, &base, &s)?
                }
                None => DirectSumMap::new(&base, g.n_max, g.margin)?.apply(&a, &b)?,
            };
            to_json(&h)?
        }
    };
    emit(g.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_verify(
    g: &GlobalOpts,
    suite: &str,
    cases: usize,
    oracle_bound: u64,
    schedule: Option<&Path>,
) -> Result<u8, CliError> {
    let suite: Suite = suite.parse()?;
    let cfg = RunConfig {
        seed: g.seed,
        tolerance: g.tolerance,
        n_max: g.n_max,
        oracle_bound,
        margin: g.margin,
        cases,
        schedule: schedule.map(load_schedule).transpose()?,
    };
    let rows = run_suite(suite, &cfg)?;
    emit(g.out.as_deref(), &csv_report(&rows)?)?;
    let failed = rows.iter().filter(|r| !r.holds).count();
    eprintln!(
        "verify suite={} seed={} rows={} failed={} status={}",
        suite,
        g.seed,
        rows.len(),
        failed,
        if failed == 0 { "pass" } else { "fail" }
    );
    Ok(if failed == 0 { 0 } else { 3 })
}
