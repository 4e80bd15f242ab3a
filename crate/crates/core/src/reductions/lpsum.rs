use std::collections::BTreeSet;

use serde::ser::{Serialize, SerializeMap, Serializer};

use super::descriptor::{space_for, truncated_eq_consts, OuterJson, SpaceDescriptor};
use super::schedule::{gen_params, Flavor, ParamSchedule};
use super::ReductionError;
use crate::norms::Outer;
use crate::relations::rational::{int, to_f64, Q};
use crate::relations::{h0_decide, CycleListPoint, Point, PointX0, Rational};
use crate::DEFAULT_TOLERANCE;

/// `l_p^infty(l_q)_{q in parts}`: an `l_p`-sum in which every `l_q`, `q` in
/// `parts`, appears infinitely often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSumDescriptor {
    base_p: Rational,
    parts: BTreeSet<Rational>,
    point: CycleListPoint,
}

impl LpSumDescriptor {
    pub fn base_p(&self) -> &Rational {
        &self.base_p
    }

    pub fn parts(&self) -> &BTreeSet<Rational> {
        &self.parts
    }

    pub fn point(&self) -> &CycleListPoint {
        &self.point
    }
}

fn outside(value: &Rational, lo: &Rational, hi: &Rational) -> ReductionError {
    ReductionError::ValueOutsideInterval {
        value: value.to_string(),
        lo: lo.to_string(),
        hi: hi.to_string(),
    }
}

/// The space `X(b) = l_p^infty(l_{b_n})_n`. Repetitions in `b` collapse since
/// every summand already has infinite multiplicity.
pub fn x_alpha(
    point: &CycleListPoint,
    base_p: &Rational,
) -> Result<LpSumDescriptor, ReductionError> {
    let two = int(2);
    if !(*base_p >= int(1) && *base_p < two) {
        return Err(ReductionError::InvalidArgument(format!(
            "base exponent {base_p} is outside [1, 2)"
        )));
    }
    if let Some(v) = point.values().iter().find(|v| !(*v > base_p && **v < two)) {
        return Err(outside(v, base_p, &two));
    }
    Ok(LpSumDescriptor {
        base_p: base_p.clone(),
        parts: point.value_set(),
        point: point.clone(),
    })
}

/// Whether `l_q` embeds into the sum: exactly when `q` is the outer exponent
/// or one of the summand exponents.
pub fn summand_detect(q: &Rational, d: &LpSumDescriptor) -> bool {
    *q == d.base_p || d.parts.contains(q)
}

/// `f(a) (+) g(b)`: the `l_{(p+1)/2}`-based descriptor of `a` next to `X(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSumDescriptor {
    left_base: Rational,
    left: SpaceDescriptor,
    right: LpSumDescriptor,
}

/// Component-wise comparison of two direct sums.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ComponentVerdict {
    /// `h0_decide` witness of the left points, when related.
    pub left_witness: Option<u64>,
    /// Largest truncated equivalence constant of the left parts.
    pub left_max_constant: f64,
    /// All left truncated constants stay within `e^{2 N_0}`.
    pub left_bounded: bool,
    /// Right part sets coincide.
    pub right_equal: bool,
}

impl ComponentVerdict {
    pub fn related(&self) -> bool {
        self.left_bounded && self.right_equal
    }
}

impl DirectSumDescriptor {
    pub fn left(&self) -> &SpaceDescriptor {
        &self.left
    }

    pub fn right(&self) -> &LpSumDescriptor {
        &self.right
    }

    /// `(p+1)/2`, the base exponent of the left part.
    pub fn left_base(&self) -> &Rational {
        &self.left_base
    }

    /// The left outer exponent never occurs on the right, so neither side
    /// embeds `l_{(p+1)/2}` from the other.
    pub fn totally_incomparable(&self) -> bool {
        !summand_detect(&self.left_base, &self.right)
    }

    /// Compares the two sides separately: the left through truncated
    /// equivalence constants against the bound `e^{2 N_0}` given by the
    /// `H_0` witness, the right through part sets.
    pub fn compare(&self, other: &DirectSumDescriptor) -> Result<ComponentVerdict, ReductionError> {
        let consts = truncated_eq_consts(&self.left, &other.left)?;
        let left_max_constant = consts.iter().copied().fold(1.0, f64::max);
        let left_witness = h0_decide(self.left.point(), other.left.point()).witness();
        let left_bounded = match left_witness {
            Some(n0) => {
                let bound = (2.0 * n0 as f64).exp() * (1.0 + DEFAULT_TOLERANCE);
                consts.iter().all(|c| *c <= bound)
            }
            None => false,
        };
        Ok(ComponentVerdict {
            left_witness,
            left_max_constant,
            left_bounded,
            right_equal: self.right.parts == other.right.parts,
        })
    }
}

/// The map `(a, b) -> f(a) (+) g(b)` for a fixed `p`, with its own schedule
/// over base `(p+1)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSumMap {
    p: Rational,
    schedule: ParamSchedule,
}

impl DirectSumMap {
    pub fn new(p: &Rational, n_max: usize, margin: f64) -> Result<Self, ReductionError> {
        let left_base = left_base(p)?;
        let schedule = gen_params(Flavor::Lp, to_f64(&left_base), n_max, margin)?;
        Ok(DirectSumMap {
            p: p.clone(),
            schedule,
        })
    }

    pub fn schedule(&self) -> &ParamSchedule {
        &self.schedule
    }

    pub fn apply(
        &self,
        a: &PointX0,
        b: &CycleListPoint,
    ) -> Result<DirectSumDescriptor, ReductionError> {
        h_direct_sum(a, b, &self.p, &self.schedule)
    }
}

fn left_base(p: &Rational) -> Result<Rational, ReductionError> {
    if !(*p >= int(1) && *p < int(2)) {
        return Err(ReductionError::InvalidArgument(format!(
            "p = {p} is outside [1, 2)"
        )));
    }
    Ok((p + int(1)) / int(2))
}

/// `h(a, b) = f(a) (+) g(b)` with `f` over an `l_p` schedule with base
/// `(p+1)/2` and `g = X(.)` over base `p`.
///
/// Values of `b` must lie in `](p+1)/2, 2[` and, since `g` is `X(.)` over
/// base `p`, also above `p`. For `p > 1` the binding constraint is `]p, 2[`.
pub fn h_direct_sum(
    a: &PointX0,
    b: &CycleListPoint,
    p: &Rational,
    schedule: &ParamSchedule,
) -> Result<DirectSumDescriptor, ReductionError> {
    let left_base = left_base(p)?;
    if schedule.flavor() != Flavor::Lp || schedule.base_p() != to_f64(&left_base) {
        return Err(ReductionError::ScheduleMismatch);
    }
    let two = int(2);
    if let Some(v) = b.values().iter().find(|v| !(**v > left_base && **v < two)) {
        return Err(outside(v, &left_base, &two));
    }
    Ok(DirectSumDescriptor {
        left: space_for(a, schedule)?,
        right: x_alpha(b, p)?,
        left_base,
    })
}

impl Serialize for LpSumDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Block {
            p: f64,
            exact: Q,
            #[serde(rename = "K")]
            k: Option<u64>,
            #[serde(rename = "logK")]
            log_k: Option<f64>,
            multiplicity: &'static str,
        }
        #[derive(serde::Serialize)]
        struct Provenance {
            map: &'static str,
            base_p: Q,
            parts: Vec<Q>,
            point: Point,
        }
        let blocks: Vec<Block> = self
            .parts
            .iter()
            .map(|q| Block {
                p: to_f64(q),
                exact: Q(q.clone()),
                k: None,
                log_k: None,
                multiplicity: "infinite",
            })
            .collect();
        let outer = Outer::lp(to_f64(&self.base_p)).map_err(serde::ser::Error::custom)?;
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("outer", &OuterJson(outer))?;
        map.serialize_entry("blocks", &blocks)?;
        map.serialize_entry(
            "provenance",
            &Provenance {
                map: "Lp",
                base_p: Q(self.base_p.clone()),
                parts: self.parts.iter().cloned().map(Q).collect(),
                point: Point::Pomega(self.point.clone()),
            },
        )?;
        map.end()
    }
}

impl Serialize for DirectSumDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("left_base", &Q(self.left_base.clone()))?;
        map.serialize_entry("left", &self.left)?;
        map.serialize_entry("right", &self.right)?;
        map.serialize_entry("totally_incomparable", &self.totally_incomparable())?;
        map.end()
    }
}

/// `eplus_decide` and part-set equality agree; kept next to `x_alpha` so the
/// equivalence can be asserted without reaching into the relations module.
#[cfg(test)]
fn parts_agree(b: &CycleListPoint, c: &CycleListPoint, p: &Rational) -> bool {
    let same = x_alpha(b, p).unwrap().parts == x_alpha(c, p).unwrap().parts;
    same == crate::relations::eplus_decide(b, c).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::rational::rat;
    use crate::relations::{Interval, TailRule};

    fn cyc(values: &[(i64, i64)]) -> CycleListPoint {
        CycleListPoint::new(
            values.iter().map(|(n, d)| rat(*n, *d)).collect(),
            Interval::for_base(&int(1)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn parts_collapse_multiplicity() {
        let d = x_alpha(&cyc(&[(3, 2)]), &int(1)).unwrap();
        assert_eq!(
            d.parts().iter().cloned().collect::<Vec<_>>(),
            vec![rat(3, 2)]
        );
        let d = x_alpha(&cyc(&[(3, 2), (7, 4), (3, 2)]), &int(1)).unwrap();
        assert_eq!(d.parts().len(), 2);
        assert!(parts_agree(
            &cyc(&[(3, 2), (7, 4)]),
            &cyc(&[(7, 4), (3, 2), (7, 4)]),
            &int(1)
        ));
        assert!(parts_agree(&cyc(&[(3, 2)]), &cyc(&[(7, 4)]), &int(1)));
    }

    #[test]
    fn value_at_the_base_is_rejected() {
        let b = cyc(&[(3, 2), (7, 4)]);
        assert!(matches!(
            x_alpha(&b, &rat(3, 2)),
            Err(ReductionError::ValueOutsideInterval { .. })
        ));
        assert!(x_alpha(&b, &rat(5, 4)).is_ok());
    }

    #[test]
    fn summand_detection() {
        let d = x_alpha(&cyc(&[(3, 2), (7, 4)]), &int(1)).unwrap();
        assert!(summand_detect(&int(1), &d));
        assert!(summand_detect(&rat(7, 4), &d));
        assert!(!summand_detect(&rat(5, 4), &d));
        assert!(!summand_detect(&int(2), &d));
    }

    #[test]
    fn direct_sum_pairs() {
        let p = rat(6, 5);
        let map = DirectSumMap::new(&p, 8, 0.5).unwrap();
        let b = cyc(&[(3, 2), (9, 5)]);
        let a = PointX0::with_tail(TailRule::Constant(2)).unwrap();
        let h = map.apply(&a, &b).unwrap();
        assert_eq!(h, map.apply(&a, &b).unwrap());
        assert!(h.totally_incomparable());
        assert_eq!(h.left_base(), &rat(11, 10));

        let a2 = PointX0::new(vec![0, 1, 2], TailRule::zero()).unwrap();
        let b2 = cyc(&[(9, 5), (3, 2), (3, 2)]);
        let v = h.compare(&map.apply(&a2, &b2).unwrap()).unwrap();
        assert!(v.related(), "{v:?}");
        assert_eq!(v.left_witness, Some(2));

        let id = PointX0::with_tail(TailRule::Affine(int(1))).unwrap();
        let v = h.compare(&map.apply(&id, &b).unwrap()).unwrap();
        assert!(!v.left_bounded && v.right_equal && !v.related());
    }

    #[test]
    fn direct_sum_rejects_low_values() {
        let p = rat(3, 2);
        let map = DirectSumMap::new(&p, 4, 0.5).unwrap();
        // 5/4 is inside ]1, 2[ but below (p+1)/2 = 5/4 is not strictly above it
        let b = cyc(&[(5, 4)]);
        assert!(matches!(
            map.apply(&PointX0::zero(), &b),
            Err(ReductionError::ValueOutsideInterval { .. })
        ));
        assert!(DirectSumMap::new(&int(2), 4, 0.5).is_err());
    }

    #[test]
    fn lp_sum_json_shape() {
        let d = x_alpha(&cyc(&[(3, 2), (7, 4)]), &int(1)).unwrap();
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["outer"]["type"], "lp");
        assert_eq!(v["blocks"][1]["multiplicity"], "infinite");
        assert!(v["blocks"][0]["K"].is_null());
    }
}
