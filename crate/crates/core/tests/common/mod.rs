//! Independent brute-force oracles shared by the integration tests.
//!
//! Nothing here calls the deciders or formulas under test; points are only
//! expanded coordinate by coordinate.

#![allow(dead_code)]

use redlab_core::reductions::{Flavor, ParamSchedule};
use redlab_core::relations::{PeriodicPoint, PointX0};

/// Every periodic tail used by the generators has period dividing this.
pub const COMMON_PERIOD: usize = 12;

/// `sup_k |a(k) - b(k)|` when the difference sequence is eventually
/// periodic, `None` when it keeps growing.
pub fn h0_brute(a: &PointX0, b: &PointX0) -> Option<u64> {
    let head = a.prefix().len().max(b.prefix().len());
    let len = 4 * (head + COMMON_PERIOD + 64);
    let xa = a.expand(len as u64);
    let xb = b.expand(len as u64);
    let d: Vec<u64> = xa.iter().zip(&xb).map(|(x, y)| x.abs_diff(*y)).collect();
    let periodic = (len / 2..len - COMMON_PERIOD).all(|k| d[k] == d[k + COMMON_PERIOD]);
    periodic.then(|| d.iter().copied().max().unwrap_or(0))
}

/// Eventual equality by comparing a long window beyond both prefixes.
pub fn eventually_equal_brute<T: Clone + PartialEq>(
    a: &PeriodicPoint<T>,
    b: &PeriodicPoint<T>,
) -> bool {
    let head = a.prefix().len().max(b.prefix().len());
    let len = 4 * (head + 64);
    let (xa, xb) = (a.expand(len), b.expand(len));
    xa[len / 2..] == xb[len / 2..]
}

/// `(sum |x_i|^p)^{1/p}` straight from the definition.
pub fn naive_lp(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return x.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Re-checks the schedule inequalities without the library validator.
/// Returns the smallest slack seen and a description of the first failure.
pub fn recheck_schedule(s: &ParamSchedule) -> Result<f64, String> {
    let n = s.n_max();
    let p: Vec<f64> = s.p_seq().to_vec();
    let l: Vec<f64> = (1..=n).map(|i| s.log_k(i)).collect();
    let mut min = f64::INFINITY;
    let mut need = |ok: f64, what: String| -> Result<(), String> {
        min = min.min(ok);
        if ok > 0.0 {
            Ok(())
        } else {
            Err(format!("{what}: slack {ok:e}"))
        }
    };
    need(
        1.0 - (p[0] + 1.0 / l[0] - 1.0),
        "p_1 + 1/log K_1 < 2".into(),
    )?;
    for i in 0..n {
        let idx = i + 1;
        if i + 1 < n {
            need(p[i] - p[i + 1], format!("p decreasing at {idx}"))?;
        }
        match s.flavor() {
            Flavor::Lp => {
                need(p[i] - s.base_p(), format!("p_{idx} > base"))?;
                need(
                    2.0 - p[i] - (idx - 1) as f64 / l[i],
                    format!("perturbed p_{idx} < 2"),
                )?;
                if i + 1 < n {
                    need(
                        p[i] - p[i + 1] - (idx + 1) as f64 / l[i + 1],
                        format!("gap at {idx}"),
                    )?;
                }
                if i == 0 {
                    need(l[0] - 4f64.ln(), "K_1 > 4".into())?;
                } else {
                    need(
                        l[i] - l[i - 1] - 2.0 * (idx as f64).ln(),
                        format!("growth at {idx}"),
                    )?;
                }
            }
            Flavor::C0 => {
                need(p[i] - 1.0, format!("p_{idx} > 1"))?;
                let e = p[i] + idx as f64 / l[i];
                need(
                    (e - 1.0).min(2.0 - e),
                    format!("1 < p_{idx} + {idx}/log K < 2"),
                )?;
                if i + 1 < n {
                    need(
                        idx as f64 / l[i] - (idx + 1) as f64 / l[i + 1],
                        format!("ratio at {idx}"),
                    )?;
                    need(
                        p[i] - p[i + 1] - 2.0 * idx as f64 / l[i],
                        format!("c0 gap at {idx}"),
                    )?;
                }
                // worst-case separation of perturbation intervals
                for m in 0..n {
                    if m == i {
                        continue;
                    }
                    let (lo, hi) = (i.min(m), i.max(m));
                    let dist = p[lo] - p[hi] - hi as f64 / l[hi];
                    need(
                        dist - (lo + 1) as f64 / l[lo],
                        format!("separation {idx}/{}", m + 1),
                    )?;
                }
            }
        }
    }
    Ok(min)
}
