//! Points of `P^omega` that cycle through finitely many values, and `=^+`.

use std::collections::BTreeSet;

use num_traits::One;

use super::rational::{int, Rational};
use super::RelationError;

/// An open rational interval `]lo, hi[`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, RelationError> {
        if lo >= hi {
            return Err(RelationError::InvalidPoint(format!(
                "empty interval ]{lo}, {hi}["
            )));
        }
        Ok(Interval { lo, hi })
    }

    /// `](p + 1)/2, 2[`, the exponent window used for base exponent `p`.
    pub fn for_base(p: &Rational) -> Result<Self, RelationError> {
        Interval::new((p + Rational::one()) / int(2), int(2))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

/// The sequence cycling through `values` forever, so each value occurs
/// infinitely often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleListPoint {
    values: Vec<Rational>,
    interval: Interval,
}

impl CycleListPoint {
    pub fn new(values: Vec<Rational>, interval: Interval) -> Result<Self, RelationError> {
        if values.is_empty() {
            return Err(RelationError::InvalidPoint(
                "value list must be non-empty".into(),
            ));
        }
        if let Some(v) = values.iter().find(|v| !interval.contains(v)) {
            return Err(RelationError::InvalidPoint(format!(
                "value {v} outside ]{}, {}[",
                interval.lo, interval.hi
            )));
        }
        Ok(CycleListPoint { values, interval })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn value_set(&self) -> BTreeSet<Rational> {
        self.values.iter().cloned().collect()
    }
}

/// `a =^+ b` with the underlying relation equality: equal value sets.
pub fn eplus_decide(a: &CycleListPoint, b: &CycleListPoint) -> Result<bool, RelationError> {
    if a.interval != b.interval {
        return Err(RelationError::DomainMismatch);
    }
    Ok(a.value_set() == b.value_set())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::rational::rat;

    fn unit_window() -> Interval {
        Interval::for_base(&int(1)).unwrap()
    }

    #[test]
    fn eplus_examples() {
        let a = CycleListPoint::new(vec![rat(3, 2), rat(7, 4)], unit_window()).unwrap();
        let b = CycleListPoint::new(vec![rat(7, 4), rat(3, 2), rat(3, 2)], unit_window()).unwrap();
        assert!(eplus_decide(&a, &a).unwrap());
        assert!(eplus_decide(&a, &b).unwrap());
        let c = CycleListPoint::new(vec![rat(3, 2)], unit_window()).unwrap();
        let d = CycleListPoint::new(vec![rat(7, 4)], unit_window()).unwrap();
        assert!(!eplus_decide(&c, &d).unwrap());
    }

    #[test]
    fn values_must_be_inside_the_window() {
        assert!(CycleListPoint::new(vec![int(1)], unit_window()).is_err());
        assert!(CycleListPoint::new(vec![int(2)], unit_window()).is_err());
        assert!(CycleListPoint::new(vec![], unit_window()).is_err());
        let w = Interval::for_base(&rat(3, 2)).unwrap();
        assert_eq!(w.lo(), &rat(5, 4));
        assert!(CycleListPoint::new(vec![rat(6, 5)], w).is_err());
    }

    #[test]
    fn different_windows_do_not_compare() {
        let a = CycleListPoint::new(vec![rat(3, 2)], unit_window()).unwrap();
        let w = Interval::for_base(&rat(6, 5)).unwrap();
        let b = CycleListPoint::new(vec![rat(3, 2)], w).unwrap();
        assert_eq!(eplus_decide(&a, &b), Err(RelationError::DomainMismatch));
    }
}
