//! Randomized invariants of the norm calculus and the deciders.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use redlab_core::norms::{lp_norm, sum_norm, BlockVector, Exponent, Outer, SumSpace};
use redlab_core::relations::rational::rat;
use redlab_core::relations::{
    eplus_decide, h0_decide, CycleListPoint, Interval, PointX0, TailRule,
};
use redlab_core::verify::gen;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::Infinite),
        (1.0f64..8.0).prop_map(|p| Exponent::new(p).unwrap()),
    ]
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, len)
}

proptest! {
    #[test]
    fn conjugate_is_an_involution(p in exponent()) {
        let back = p.conjugate().conjugate();
        match (back, p) {
            (Exponent::Finite(a), Exponent::Finite(b)) => prop_assert!((a - b).abs() <= 1e-12 * b),
            _ => prop_assert_eq!(back, p),
        }
        let sum = p.recip() + p.conjugate().recip();
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norms_decrease_in_the_exponent(x in coeffs(12), p in 1.0f64..6.0, dp in 0.0f64..6.0) {
        let small = lp_norm(&x, Exponent::new(p + dp).unwrap()).unwrap();
        let large = lp_norm(&x, Exponent::new(p).unwrap()).unwrap();
        prop_assert!(small <= large * (1.0 + 1e-12));
        let sup = lp_norm(&x, Exponent::Infinite).unwrap();
        prop_assert!(sup <= small * (1.0 + 1e-12));
    }

    #[test]
    fn lp_norm_matches_the_definition(x in coeffs(9), p in 1.0f64..5.0) {
        let direct = common::naive_lp(&x, p);
        let got = lp_norm(&x, Exponent::new(p).unwrap()).unwrap();
        prop_assert!((got - direct).abs() <= 1e-10 * direct.max(1.0));
    }

    #[test]
    fn sum_norm_is_homogeneous_and_subadditive(
        a in coeffs(7),
        b in coeffs(7),
        t in -5.0f64..5.0,
        outer_c0 in any::<bool>(),
        q in 1.0f64..3.0,
    ) {
        let outer = if outer_c0 { Outer::C0 } else { Outer::lp(q).unwrap() };
        let space = SumSpace::from_dims(outer, &[(1.5, 3), (2.5, 4)]).unwrap();
        let split = |v: &[f64]| vec![v[..3].to_vec(), v[3..].to_vec()];
        let x = BlockVector::new(&space, split(&a)).unwrap();
        let y = BlockVector::new(&space, split(&b)).unwrap();
        let scaled = sum_norm(&x.scaled(t));
        prop_assert!((scaled - t.abs() * sum_norm(&x)).abs() <= 1e-10 * scaled.max(1.0));
        let joint = sum_norm(&x.add(&y).unwrap());
        prop_assert!(joint <= (sum_norm(&x) + sum_norm(&y)) * (1.0 + 1e-12));
    }

    #[test]
    fn h0_witness_is_a_metric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::point_x0(&mut rng);
        let b = gen::nearby_x0(&mut rng, &a, 6);
        let c = gen::nearby_x0(&mut rng, &b, 6);
        let w = |x: &PointX0, y: &PointX0| h0_decide(x, y).witness();
        prop_assert_eq!(w(&a, &a), Some(0));
        prop_assert_eq!(w(&a, &b), w(&b, &a));
        prop_assert!(w(&a, &c).unwrap() <= w(&a, &b).unwrap() + w(&b, &c).unwrap());
        prop_assert_eq!(w(&a, &b), common::h0_brute(&a, &b));
    }

    #[test]
    fn eplus_ignores_order_and_repetition(
        idx in prop::collection::vec(0usize..7, 1..6),
        extra in prop::collection::vec(0usize..6, 0..4),
        seed in any::<u64>(),
    ) {
        let pool: Vec<_> = (9..16).map(|k| rat(k, 8)).collect();
        let interval = Interval::for_base(&rat(1, 1)).unwrap();
        let values: Vec<_> = idx.iter().map(|i| pool[*i].clone()).collect();
        let mut shuffled = values.clone();
        shuffled.extend(extra.iter().map(|i| values[*i % values.len()].clone()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::seq::SliceRandom;
        shuffled.shuffle(&mut rng);
        let a = CycleListPoint::new(values, interval.clone()).unwrap();
        let b = CycleListPoint::new(shuffled, interval).unwrap();
        prop_assert!(eplus_decide(&a, &b).unwrap());
    }

    #[test]
    fn slopes_decide_unrelatedness(num in 1i64..6, den in 1i64..7) {
        prop_assume!(num <= den);
        let sloped = PointX0::with_tail(TailRule::Affine(rat(num, den))).unwrap();
        let verdict = h0_decide(&sloped, &PointX0::zero());
        prop_assert!(!verdict.is_related());
        prop_assert_eq!(common::h0_brute(&sloped, &PointX0::zero()), None);
    }
}
