//! Seeded random instances for the property sweeps.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::relations::rational::{int, rat};
use crate::relations::{CycleListPoint, Interval, PeriodicPoint, PointX0, Rational, TailRule};

/// Slopes with small denominators keep brute-force expansions short.
pub fn small_slope<R: Rng>(rng: &mut R) -> Rational {
    let den = rng.random_range(1..=6i64);
    rat(rng.random_range(0..=den), den)
}

pub fn tail_rule<R: Rng>(rng: &mut R) -> TailRule {
    const PERIODIC: [(i64, i64); 5] = [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)];
    match rng.random_range(0..3) {
        0 => TailRule::Constant(rng.random_range(0..=20)),
        1 => TailRule::Affine(small_slope(rng)),
        _ => {
            let len = rng.random_range(1..=4);
            TailRule::PeriodicSlope(
                (0..len)
                    .map(|_| {
                        let (n, d) = *PERIODIC.choose(rng).expect("non-empty");
                        rat(n, d)
                    })
                    .collect(),
            )
        }
    }
}

pub fn point_x0<R: Rng>(rng: &mut R) -> PointX0 {
    let len = rng.random_range(0..=8u64);
    let prefix = (0..len).map(|i| rng.random_range(0..=i)).collect();
    PointX0::new(prefix, tail_rule(rng)).expect("prefix entries respect the bounds")
}

fn shift<R: Rng>(rng: &mut R, value: u64, width: u64, cap: u64) -> u64 {
    let d = rng.random_range(0..=width);
    if rng.random_bool(0.5) {
        value.saturating_sub(d)
    } else {
        (value + d).min(cap)
    }
}

/// A point whose coordinates differ from `a` by at most `width` everywhere,
/// so the pair is `H_0`-related with witness at most `width`.
pub fn nearby_x0<R: Rng>(rng: &mut R, a: &PointX0, width: u64) -> PointX0 {
    // cover a's whole prefix so the tails line up beyond it
    let len = a.prefix().len() as u64 + rng.random_range(0..=4u64);
    let prefix = (1..=len)
        .map(|k| shift(rng, a.coordinate(k), width, k - 1))
        .collect();
    let tail = match a.tail() {
        TailRule::Constant(c) => TailRule::Constant(shift(rng, *c, width, u64::MAX)),
        other => other.clone(),
    };
    PointX0::new(prefix, tail).expect("shifted coordinates stay within bounds")
}

pub fn bits<R: Rng>(rng: &mut R) -> PeriodicPoint<bool> {
    let pre = rng.random_range(0..=6);
    let per = rng.random_range(1..=4);
    PeriodicPoint::new(
        (0..pre).map(|_| rng.random_bool(0.5)).collect(),
        (0..per).map(|_| rng.random_bool(0.5)).collect(),
    )
    .expect("non-empty period")
}

/// A bit sequence that agrees with `a` beyond a random prefix, with its
/// period possibly rotated or doubled.
pub fn bits_like<R: Rng>(rng: &mut R, a: &PeriodicPoint<bool>) -> PeriodicPoint<bool> {
    let start = a.prefix().len() + rng.random_range(0..=4);
    let reps = rng.random_range(1..=2);
    let period: Vec<bool> = (0..a.period().len() * reps)
        .map(|i| *a.value(start + i))
        .collect();
    let prefix = (0..start).map(|_| rng.random_bool(0.5)).collect();
    PeriodicPoint::new(prefix, period).expect("non-empty period")
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.random_range(-3..=3), rng.random_range(1..=3))
}

pub fn real_seq<R: Rng>(rng: &mut R) -> PeriodicPoint<Rational> {
    let pre = rng.random_range(0..=5);
    let per = rng.random_range(1..=3);
    PeriodicPoint::new(
        (0..pre).map(|_| small_rational(rng)).collect(),
        (0..per).map(|_| small_rational(rng)).collect(),
    )
    .expect("non-empty period")
}

pub fn real_seq_like<R: Rng>(rng: &mut R, a: &PeriodicPoint<Rational>) -> PeriodicPoint<Rational> {
    let start = a.prefix().len() + rng.random_range(0..=3);
    let reps = rng.random_range(1..=2);
    let period = (0..a.period().len() * reps)
        .map(|i| a.value(start + i).clone())
        .collect();
    let prefix = (0..start).map(|_| small_rational(rng)).collect();
    PeriodicPoint::new(prefix, period).expect("non-empty period")
}

/// Values `k/8` strictly between `lo` and 2 for `lo` a multiple of 1/8.
pub fn value_pool(lo: &Rational) -> Vec<Rational> {
    (1..16)
        .map(|k| rat(k, 8))
        .filter(|v| v > lo && *v < int(2))
        .collect()
}

/// A finite list of values drawn from `pool`, inside `interval`.
pub fn cycle_point<R: Rng>(rng: &mut R, pool: &[Rational], interval: &Interval) -> CycleListPoint {
    let len = rng.random_range(1..=5);
    let values = (0..len)
        .map(|_| pool.choose(rng).expect("non-empty pool").clone())
        .collect();
    CycleListPoint::new(values, interval.clone()).expect("pool lies inside the interval")
}

/// A reordering of `b` with repetitions, occasionally with one value swapped.
pub fn cycle_like<R: Rng>(rng: &mut R, b: &CycleListPoint, pool: &[Rational]) -> CycleListPoint {
    let distinct: Vec<Rational> = b.value_set().into_iter().collect();
    let mut values: Vec<Rational> = distinct.clone();
    for _ in 0..rng.random_range(0..=3) {
        values.push(distinct.choose(rng).expect("non-empty").clone());
    }
    if rng.random_bool(0.3) {
        let i = rng.random_range(0..values.len());
        values[i] = pool.choose(rng).expect("non-empty pool").clone();
    }
    for i in (1..values.len()).rev() {
        values.swap(i, rng.random_range(0..=i));
    }
    CycleListPoint::new(values, b.interval().clone()).expect("values come from the same interval")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{e0_decide, h0_decide};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nearby_points_are_related_within_width() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = point_x0(&mut rng);
            let w = rng.random_range(0..=8);
            let b = nearby_x0(&mut rng, &a, w);
            let witness = h0_decide(&a, &b).witness().expect("related");
            assert!(witness <= w);
        }
    }

    #[test]
    fn bits_like_is_eventually_equal() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let a = bits(&mut rng);
            assert!(e0_decide(&a, &bits_like(&mut rng, &a)));
        }
    }
}
