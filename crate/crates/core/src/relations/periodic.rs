//! Eventually periodic sequences and eventual equality (`E_0`, `E_1`).

use num_integer::Integer;

use super::rational::Rational;
use super::RelationError;

/// `x(i) = prefix[i]` for `i < prefix.len()`, then `period` repeated forever.
/// Indices start at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPoint<T> {
    prefix: Vec<T>,
    period: Vec<T>,
}

impl<T: Clone + PartialEq> PeriodicPoint<T> {
    pub fn new(prefix: Vec<T>, period: Vec<T>) -> Result<Self, RelationError> {
        if period.is_empty() {
            return Err(RelationError::InvalidPoint(
                "period must be non-empty".into(),
            ));
        }
        Ok(PeriodicPoint { prefix, period })
    }

    pub fn constant(value: T) -> Self {
        PeriodicPoint {
            prefix: Vec::new(),
            period: vec![value],
        }
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn period(&self) -> &[T] {
        &self.period
    }

    pub fn value(&self, i: usize) -> &T {
        match self.prefix.get(i) {
            Some(v) => v,
            None => &self.period[(i - self.prefix.len()) % self.period.len()],
        }
    }

    pub fn expand(&self, n: usize) -> Vec<T> {
        (0..n).map(|i| self.value(i).clone()).collect()
    }
}

/// Eventual equality of two eventually periodic sequences.
///
/// Beyond `P = max prefix length` both sequences are periodic with period
/// dividing `L = lcm(periods)`, so they agree eventually iff they agree on
/// `[P + L, P + 2L)`.
pub fn eventually_equal<T: Clone + PartialEq>(a: &PeriodicPoint<T>, b: &PeriodicPoint<T>) -> bool {
    let lcm = a.period.len().lcm(&b.period.len());
    let start = a.prefix.len().max(b.prefix.len()) + lcm;
    (start..start + lcm).all(|i| a.value(i) == b.value(i))
}

/// `a E_0 b` on `2^omega`.
pub fn e0_decide(a: &PeriodicPoint<bool>, b: &PeriodicPoint<bool>) -> bool {
    eventually_equal(a, b)
}

/// `a E_1 b` on `R^omega`, with exact rational coordinates.
pub fn e1_decide(a: &PeriodicPoint<Rational>, b: &PeriodicPoint<Rational>) -> bool {
    eventually_equal(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::rational::rat;

    fn bits(prefix: &[u8], period: &[u8]) -> PeriodicPoint<bool> {
        PeriodicPoint::new(
            prefix.iter().map(|b| *b == 1).collect(),
            period.iter().map(|b| *b == 1).collect(),
        )
        .unwrap()
    }

    #[test]
    fn e0_examples() {
        let a = bits(&[1, 0], &[0, 1, 1]);
        assert!(e0_decide(&a, &a));
        assert!(e0_decide(&bits(&[], &[0]), &bits(&[1, 1, 1], &[0])));
        assert!(!e0_decide(&bits(&[], &[0, 1]), &bits(&[], &[0])));
        // same tail, shifted phase
        assert!(!e0_decide(&bits(&[], &[0, 1]), &bits(&[1], &[0, 1])));
        assert!(e0_decide(&bits(&[], &[0, 1]), &bits(&[0], &[1, 0])));
        // periods of different length describing the same tail
        assert!(e0_decide(
            &bits(&[1], &[1, 0]),
            &bits(&[0, 0, 0], &[1, 0, 1, 0])
        ));
    }

    #[test]
    fn e1_examples() {
        let a = PeriodicPoint::new(vec![rat(1, 3)], vec![rat(1, 2), rat(2, 5)]).unwrap();
        assert!(e1_decide(&a, &a));
        let b = PeriodicPoint::new(vec![rat(7, 1), rat(8, 1)], vec![rat(2, 5), rat(1, 2)]).unwrap();
        assert!(e1_decide(&a, &b));
        let c = PeriodicPoint::constant(rat(1, 2));
        let d = PeriodicPoint::constant(rat(1, 3));
        assert!(!e1_decide(&c, &d));
    }

    #[test]
    fn empty_period_is_invalid() {
        assert!(PeriodicPoint::<bool>::new(vec![true], vec![]).is_err());
    }
}
