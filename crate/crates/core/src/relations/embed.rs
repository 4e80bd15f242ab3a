use super::periodic::PeriodicPoint;
use super::rational::int;
use super::x0::{PointX0, TailRule};

/// `j(alpha) = (0, alpha(1), 2 alpha(2), 3 alpha(3), ...)`, embedding
/// `2^omega` into `X_0` so that `E_0` becomes `H_0`.
///
/// Bits are indexed from 1 here, i.e. `alpha(n)` is entry `n - 1` of the
/// periodic point. The image of a periodic tail is a periodic-slope tail with
/// slope 1 on the residues carrying a 1 bit and slope 0 elsewhere.
pub fn j_embed(alpha: &PeriodicPoint<bool>) -> PointX0 {
    let pre = alpha.prefix();
    let period = alpha.period();
    let m = period.len();

    // coordinate 1 is 0; coordinate k >= 2 is (k - 1) * alpha(k - 1)
    let mut prefix = Vec::with_capacity(pre.len() + 1);
    prefix.push(0);
    prefix.extend(
        pre.iter()
            .enumerate()
            .map(|(i, bit)| if *bit { i as u64 + 1 } else { 0 }),
    );

    // coordinate k beyond the prefix reads bit index k - 2 of the sequence,
    // i.e. period[(k - 2 - pre.len()) mod m]
    let slopes = (0..m)
        .map(|residue| {
            let idx = (residue as i64 - 2 - pre.len() as i64).rem_euclid(m as i64) as usize;
            int(period[idx] as i64)
        })
        .collect();
    PointX0::new(prefix, TailRule::PeriodicSlope(slopes)).expect("j maps into X_0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::periodic::e0_decide;
    use crate::relations::x0::h0_decide;

    #[test]
    fn zero_maps_to_zero() {
        let z = j_embed(&PeriodicPoint::constant(false));
        assert_eq!(z.expand(20), vec![0; 20]);
        assert_eq!(h0_decide(&z, &PointX0::zero()).witness(), Some(0));
    }

    #[test]
    fn ones_map_to_identity_tail() {
        let j = j_embed(&PeriodicPoint::constant(true));
        let expected: Vec<u64> = (1..=30).map(|k| k - 1).collect();
        assert_eq!(j.expand(30), expected);
        let id = PointX0::with_tail(TailRule::Affine(int(1))).unwrap();
        assert_eq!(h0_decide(&j, &id).witness(), Some(0));
    }

    #[test]
    fn matches_the_coordinate_formula() {
        let a = PeriodicPoint::new(vec![true, false, true], vec![false, true, true]).unwrap();
        let j = j_embed(&a);
        for k in 1..60u64 {
            let want = if k == 1 {
                0
            } else {
                (k - 1) * (*a.value(k as usize - 2) as u64)
            };
            assert_eq!(j.coordinate(k), want, "coordinate {k}");
        }
    }

    #[test]
    fn finite_changes_stay_related() {
        let a = PeriodicPoint::new(vec![true, true, false], vec![false, true]).unwrap();
        let b = PeriodicPoint::new(vec![false], vec![false, true]).unwrap();
        assert!(e0_decide(&a, &b));
        let v = h0_decide(&j_embed(&a), &j_embed(&b));
        assert_eq!(v.witness(), Some(3));
    }
}
