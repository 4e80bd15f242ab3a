//! Points of `X_0 = prod_{n>=1} {0, .., n-1}` and the decider for `H_0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;
use super::RelationError;

/// How coordinates beyond the prefix are generated.
///
/// Every rule is capped by `k - 1` so the point stays inside `X_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailRule {
    /// `alpha(k) = min(c, k - 1)`.
    Constant(u64),
    /// `alpha(k) = floor(r (k - 1))`, `r` in `[0, 1]`.
    Affine(Rational),
    /// `alpha(k) = floor(r_{k mod m} (k - 1))` with one slope per residue.
    PeriodicSlope(Vec<Rational>),
}

/// Asymptotic behaviour of a tail on one residue class.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Asymptote {
    /// Eventually the constant `c`.
    Const(u64),
    /// Grows like `r (k - 1)` with `r > 0`.
    Slope(Rational),
}

impl TailRule {
    pub fn zero() -> Self {
        TailRule::Constant(0)
    }

    fn validate(&self) -> Result<(), RelationError> {
        let in_unit = |r: &Rational| !r.is_negative() && *r <= Rational::one();
        match self {
            TailRule::Constant(_) => Ok(()),
            TailRule::Affine(r) if in_unit(r) => Ok(()),
            TailRule::Affine(r) => Err(RelationError::InvalidPoint(format!(
                "affine slope {r} outside [0, 1]"
            ))),
            TailRule::PeriodicSlope(rs) if rs.is_empty() => Err(RelationError::InvalidPoint(
                "periodic slope rule needs at least one slope".into(),
            )),
            TailRule::PeriodicSlope(rs) => match rs.iter().find(|r| !in_unit(r)) {
                Some(r) => Err(RelationError::InvalidPoint(format!(
                    "slope {r} outside [0, 1]"
                ))),
                None => Ok(()),
            },
        }
    }

    /// Value at coordinate `k >= 1`.
    pub fn value(&self, k: u64) -> u64 {
        let cap = k.saturating_sub(1);
        match self {
            TailRule::Constant(c) => (*c).min(cap),
            TailRule::Affine(r) => floor_mul(r, cap).min(cap),
            TailRule::PeriodicSlope(rs) => {
                let r = &rs[(k % rs.len() as u64) as usize];
                floor_mul(r, cap).min(cap)
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        match self {
            TailRule::PeriodicSlope(rs) => rs.len() as u64,
            _ => 1,
        }
    }

    fn asymptote(&self, residue: u64) -> Asymptote {
        let slope = match self {
            TailRule::Constant(c) => return Asymptote::Const(*c),
            TailRule::Affine(r) => r,
            TailRule::PeriodicSlope(rs) => &rs[(residue % rs.len() as u64) as usize],
        };
        if slope.is_zero() {
            Asymptote::Const(0)
        } else {
            Asymptote::Slope(slope.clone())
        }
    }
}

fn floor_mul(r: &Rational, n: u64) -> u64 {
    let v = (r.numer() * BigInt::from(n)).div_floor(r.denom());
    v.to_u64().unwrap_or(u64::MAX)
}

/// A finitely described element of `X_0`; coordinates are indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointX0 {
    prefix: Vec<u64>,
    tail: TailRule,
}

impl PointX0 {
    pub fn new(prefix: Vec<u64>, tail: TailRule) -> Result<Self, RelationError> {
        // coordinate k = i + 1 must lie in {0, .., k - 1}
        if let Some((i, v)) = prefix.iter().enumerate().find(|(i, v)| **v > *i as u64) {
            return Err(RelationError::InvalidPoint(format!(
                "coordinate {} has value {v}, above its maximum {i}",
                i + 1
            )));
        }
        tail.validate()?;
        Ok(PointX0 { prefix, tail })
    }

    pub fn zero() -> Self {
        PointX0 {
            prefix: Vec::new(),
            tail: TailRule::zero(),
        }
    }

    pub fn with_tail(tail: TailRule) -> Result<Self, RelationError> {
        PointX0::new(Vec::new(), tail)
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> &TailRule {
        &self.tail
    }

    /// `alpha(k)` for `k >= 1`.
    pub fn coordinate(&self, k: u64) -> u64 {
        assert!(k >= 1, "X_0 coordinates start at 1");
        match self.prefix.get((k - 1) as usize) {
            Some(v) => *v,
            None => self.tail.value(k),
        }
    }

    /// First `n` coordinates `alpha(1..=n)`.
    pub fn expand(&self, n: u64) -> Vec<u64> {
        (1..=n).map(|k| self.coordinate(k)).collect()
    }
}

/// Outcome of [`h0_decide`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum H0Verdict {
    /// `sup_k |a(k) - b(k)| = witness`.
    Related {
        witness: u64,
    },
    Unrelated(Divergence),
}

impl H0Verdict {
    pub fn is_related(&self) -> bool {
        matches!(self, H0Verdict::Related { .. })
    }

    pub fn witness(&self) -> Option<u64> {
        match self {
            H0Verdict::Related { witness } => Some(*witness),
            H0Verdict::Unrelated(_) => None,
        }
    }
}

/// Certificate that `|a(k) - b(k)|` is unbounded along the residue class
/// `k = residue (mod modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub residue: u64,
    pub modulus: u64,
    /// `|r_a - r_b| > 0` on that class.
    pub slope_gap: Rational,
    offset: u64,
    start: u64,
}

impl Divergence {
    /// Some `k` in the residue class with `|a(k) - b(k)| > bound`.
    ///
    /// On the class the difference is at least `gap (k-1) - 1 - offset`,
    /// so any `k - 1 > (bound + 1 + offset) / gap` beyond both prefixes works.
    pub fn index_exceeding(&self, bound: u64) -> Option<u64> {
        let need =
            (Rational::from_integer(BigInt::from(bound) + 1u32 + self.offset)) / &self.slope_gap;
        let min_k = need.floor().to_integer() + 2u32;
        let min_k = min_k.to_u64()?.max(self.start + 1);
        let shift = (self.residue + self.modulus - min_k % self.modulus) % self.modulus;
        min_k.checked_add(shift)
    }
}

/// Decides `a H_0 b`: bounded coordinatewise difference.
///
/// Tails are compared residue by residue modulo the common period; the pair
/// is related iff every residue class has matching asymptotic slopes. The
/// witness is exact: a direct scan of the prefix range plus the limit of
/// the constant parts beyond it.
pub fn h0_decide(a: &PointX0, b: &PointX0) -> H0Verdict {
    let modulus = a.tail.modulus().lcm(&b.tail.modulus());
    let start = a.prefix.len().max(b.prefix.len()) as u64;

    let mut tail_sup = 0u64;
    for residue in 0..modulus {
        match (a.tail.asymptote(residue), b.tail.asymptote(residue)) {
            (Asymptote::Const(c), Asymptote::Const(d)) => tail_sup = tail_sup.max(c.abs_diff(d)),
            (Asymptote::Slope(r), Asymptote::Slope(s)) if r == s => {}
            (x, y) => {
                let (slope_gap, offset) = match (x, y) {
                    (Asymptote::Slope(r), Asymptote::Slope(s)) => ((r - s).abs(), 0),
                    (Asymptote::Slope(r), Asymptote::Const(c))
                    | (Asymptote::Const(c), Asymptote::Slope(r)) => (r, c),
                    _ => unreachable!(),
                };
                return H0Verdict::Unrelated(Divergence {
                    residue,
                    modulus,
                    slope_gap,
                    offset,
                    start,
                });
            }
        }
    }

    let head = (1..=start)
        .map(|k| a.coordinate(k).abs_diff(b.coordinate(k)))
        .max()
        .unwrap_or(0);
    H0Verdict::Related {
        witness: head.max(tail_sup),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::rational::{int, rat};

    #[test]
    fn rejects_out_of_range_coordinates() {
        assert!(PointX0::new(vec![1], TailRule::zero()).is_err());
        assert!(PointX0::new(vec![0, 1, 2, 3], TailRule::zero()).is_ok());
        assert!(PointX0::new(vec![0, 2], TailRule::zero()).is_err());
        assert!(PointX0::with_tail(TailRule::Affine(rat(3, 2))).is_err());
        assert!(PointX0::with_tail(TailRule::PeriodicSlope(vec![])).is_err());
    }

    #[test]
    fn tail_values() {
        let p = PointX0::with_tail(TailRule::Affine(int(1))).unwrap();
        assert_eq!(p.expand(5), vec![0, 1, 2, 3, 4]);
        let c = PointX0::with_tail(TailRule::Constant(5)).unwrap();
        assert_eq!(c.expand(8), vec![0, 1, 2, 3, 4, 5, 5, 5]);
        let h = PointX0::with_tail(TailRule::Affine(rat(1, 2))).unwrap();
        assert_eq!(h.expand(6), vec![0, 0, 1, 1, 2, 2]);
        let s = PointX0::with_tail(TailRule::PeriodicSlope(vec![int(0), int(1)])).unwrap();
        assert_eq!(s.expand(6), vec![0, 0, 2, 0, 4, 0]);
    }

    #[test]
    fn reflexive_with_zero_witness() {
        let p = PointX0::new(vec![0, 1, 0], TailRule::Affine(rat(2, 3))).unwrap();
        assert_eq!(h0_decide(&p, &p), H0Verdict::Related { witness: 0 });
    }

    #[test]
    fn zero_versus_constant_five() {
        let a = PointX0::zero();
        let b = PointX0::with_tail(TailRule::Constant(5)).unwrap();
        assert_eq!(h0_decide(&a, &b), H0Verdict::Related { witness: 5 });
    }

    #[test]
    fn identity_tail_diverges_from_zero() {
        let a = PointX0::with_tail(TailRule::Affine(int(1))).unwrap();
        let b = PointX0::zero();
        let H0Verdict::Unrelated(cert) = h0_decide(&a, &b) else {
            panic!("expected divergence");
        };
        for bound in [0, 1, 17, 1000, 123_456] {
            let k = cert.index_exceeding(bound).unwrap();
            assert!(a.coordinate(k).abs_diff(b.coordinate(k)) > bound);
        }
    }

    #[test]
    fn prefix_differences_count() {
        let a = PointX0::new(vec![0, 0, 2, 3], TailRule::Constant(1)).unwrap();
        let b = PointX0::new(vec![0, 1], TailRule::Constant(1)).unwrap();
        // k=3: 2 vs 1, k=4: 3 vs 1
        assert_eq!(h0_decide(&a, &b), H0Verdict::Related { witness: 2 });
    }

    #[test]
    fn periodic_slopes_compare_per_residue() {
        let a = PointX0::with_tail(TailRule::PeriodicSlope(vec![int(1), int(0)])).unwrap();
        let b = PointX0::with_tail(TailRule::PeriodicSlope(vec![
            int(1),
            int(0),
            int(1),
            int(0),
        ]))
        .unwrap();
        assert_eq!(h0_decide(&a, &b), H0Verdict::Related { witness: 0 });
        let c = PointX0::with_tail(TailRule::Affine(int(1))).unwrap();
        let H0Verdict::Unrelated(cert) = h0_decide(&a, &c) else {
            panic!("odd residues differ");
        };
        let k = cert.index_exceeding(50).unwrap();
        assert!(a.coordinate(k).abs_diff(c.coordinate(k)) > 50);
    }

    #[test]
    fn equal_slopes_with_constant_offsets() {
        let a = PointX0::with_tail(TailRule::PeriodicSlope(vec![int(0), rat(1, 2)])).unwrap();
        let b = PointX0::with_tail(TailRule::Constant(3)).unwrap();
        assert!(!h0_decide(&a, &b).is_related());
        let c = PointX0::with_tail(TailRule::PeriodicSlope(vec![int(0), int(0)])).unwrap();
        assert_eq!(h0_decide(&c, &b), H0Verdict::Related { witness: 3 });
    }
}
