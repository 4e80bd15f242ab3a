use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{lp_norm, Exponent, NormError};
use crate::DEFAULT_TOLERANCE;

pub const DEFAULT_ORACLE_BOUND: u64 = 64;

/// Equivalence constant of the canonical bases of `l_p^K` and `l_q^K`:
/// `K^{|1/p - 1/q|}`.
pub fn eq_const_closed_form(p: Exponent, q: Exponent, k: u64) -> f64 {
    eq_const_from_log(p, q, (k.max(1) as f64).ln())
}

/// Same constant with the dimension given as `log K`.
pub fn eq_const_from_log(p: Exponent, q: Exponent, log_k: f64) -> f64 {
    if p == q || log_k == 0.0 {
        return 1.0;
    }
    ((p.recip() - q.recip()).abs() * log_k).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    /// Largest ratio found over both families.
    pub value: f64,
    /// Maximum over flat support profiles.
    pub flat_max: f64,
    /// Support size attaining `flat_max`.
    pub flat_argmax: u64,
    /// Maximum over the random samples alone.
    pub sampled_max: f64,
}

/// Brute-force estimator of the two-sided equivalence constant between the
/// canonical bases of `l_p^K` and `l_q^K`.
///
/// Flat profiles `1_S` are enumerated for every support size; random vectors
/// from several shape families try to beat them.
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceOracle {
    pub bound: u64,
}

impl Default for EquivalenceOracle {
    fn default() -> Self {
        EquivalenceOracle {
            bound: DEFAULT_ORACLE_BOUND,
        }
    }
}

impl EquivalenceOracle {
    pub fn estimate(
        &self,
        p: Exponent,
        q: Exponent,
        k: u64,
        samples: usize,
        seed: u64,
    ) -> Result<OracleEstimate, NormError> {
        if k == 0 {
            return Err(NormError::InvalidInput("dimension must be >= 1".into()));
        }
        if k > self.bound {
            return Err(NormError::OracleBoundExceeded {
                dim: k,
                bound: self.bound,
            });
        }
        if samples == 0 {
            return Err(NormError::InvalidInput(
                "at least one sample is required".into(),
            ));
        }

        let mut flat_max = 1.0;
        let mut flat_argmax = 1;
        for s in 1..=k {
            let flat = vec![1.0; s as usize];
            let r = two_sided_ratio(&flat, p, q);
            if r > flat_max {
                flat_max = r;
                flat_argmax = s;
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sampled_max = 0.0f64;
        let mut a = vec![0.0; k as usize];
        for i in 0..samples {
            fill_sample(&mut rng, &mut a, i % 4);
            sampled_max = sampled_max.max(two_sided_ratio(&a, p, q));
        }

        Ok(OracleEstimate {
            value: flat_max.max(sampled_max),
            flat_max,
            flat_argmax,
            sampled_max,
        })
    }
}

/// [`EquivalenceOracle::estimate`] with the default dimension bound.
pub fn eq_const_oracle(
    p: Exponent,
    q: Exponent,
    k: u64,
    samples: usize,
    seed: u64,
) -> Result<f64, NormError> {
    EquivalenceOracle::default()
        .estimate(p, q, k, samples, seed)
        .map(|e| e.value)
}

fn two_sided_ratio(a: &[f64], p: Exponent, q: Exponent) -> f64 {
    let np = lp_norm(a, p).expect("non-empty finite sample");
    let nq = lp_norm(a, q).expect("non-empty finite sample");
    let r = np / nq;
    r.max(1.0 / r)
}

fn fill_sample(rng: &mut ChaCha8Rng, a: &mut [f64], family: usize) {
    let sign = |rng: &mut ChaCha8Rng| if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    match family {
        // dense uniform
        0 => a.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0)),
        // near-flat on a random support
        1 => {
            let density: f64 = rng.random_range(0.05..1.0);
            for x in a.iter_mut() {
                *x = if rng.random_bool(density) {
                    sign(rng) * rng.random_range(0.8..1.0)
                } else {
                    0.0
                };
            }
        }
        // exactly flat on a random support
        2 => {
            let density: f64 = rng.random_range(0.05..1.0);
            for x in a.iter_mut() {
                *x = if rng.random_bool(density) {
                    sign(rng)
                } else {
                    0.0
                };
            }
        }
        // magnitudes spread over many orders
        _ => {
            for x in a.iter_mut() {
                *x = sign(rng) * (rng.random_range(-8.0..8.0f64)).exp();
            }
        }
    }
    if a.iter().all(|x| *x == 0.0) {
        let i = rng.random_range(0..a.len());
        a[i] = 1.0;
    }
}

/// Exponential sandwich around the equivalence constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichBounds {
    pub lower: f64,
    pub upper: f64,
    pub constant: f64,
    pub holds: bool,
}

/// Checks `exp(|p-q| log K / c^2) <= K^{|1/p-1/q|} <= exp(|p-q| log K)` where
/// `c` bounds both exponents.
pub fn lemma_2_1_bounds(p: f64, q: f64, k: u64, c: f64) -> Result<SandwichBounds, NormError> {
    if !(p >= 1.0 && q >= 1.0 && p.is_finite() && q.is_finite()) {
        return Err(NormError::InvalidInput(format!(
            "exponents must be finite and >= 1, got {p}, {q}"
        )));
    }
    if !(c >= p.max(q)) {
        return Err(NormError::InvalidInput(format!(
            "c = {c} does not bound the exponents {p}, {q}"
        )));
    }
    if k == 0 {
        return Err(NormError::InvalidInput("dimension must be >= 1".into()));
    }
    let log_k = (k as f64).ln();
    let gap = (p - q).abs();
    let lower = (gap * log_k / (c * c)).exp();
    let upper = (gap * log_k).exp();
    let constant = eq_const_from_log(Exponent::Finite(p), Exponent::Finite(q), log_k);
    let holds = lower <= constant * (1.0 + DEFAULT_TOLERANCE)
        && constant <= upper * (1.0 + DEFAULT_TOLERANCE);
    Ok(SandwichBounds {
        lower,
        upper,
        constant,
        holds,
    })
}
