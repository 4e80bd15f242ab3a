use std::collections::HashMap;

use super::{lp_norm, BlockVector, Exponent, NormError, Outer};
use crate::DEFAULT_TOLERANCE;

/// Smallest `C >= 1` with `(sum ||x_i||^p)^{1/p} <= C ||sum x_i||` on this
/// family of successive vectors.
///
/// Vectors are successive when their block supports lie in intervals
/// `E_1 < E_2 < ...` in the order given. Zero vectors are ignored by the
/// ordering check.
pub fn check_lower_p_estimate(vectors: &[BlockVector<'_>], p: Exponent) -> Result<f64, NormError> {
    ensure_same_space(vectors)?;
    let mut last: Option<(usize, usize)> = None;
    for (i, v) in vectors.iter().enumerate() {
        let blocks = v.block_support();
        if let (Some(&lo), Some((prev, prev_max))) = (blocks.first(), last) {
            if lo <= prev_max {
                return Err(NormError::NotSuccessive {
                    first: prev,
                    second: i,
                });
            }
        }
        if let Some(&hi) = blocks.last() {
            last = Some((i, hi));
        }
    }

    let norms: Vec<f64> = vectors.iter().map(BlockVector::norm).collect();
    let lhs = lp_norm(&norms, p)?;
    let total = BlockVector::sum_of(vectors)?.norm();
    if total == 0.0 {
        return Ok(1.0);
    }
    Ok((lhs / total).max(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisjointSumCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `sum ||y_i|| <= C k^{1/r'} ||sum y_i||` for disjointly supported `y_i`,
/// where `r` is the largest block exponent of the ambient space.
///
/// The ambient space must have an `l_p` outer norm and every block exponent
/// must be at least `p`; `c` is the lower `p`-estimate constant of its
/// canonical decomposition.
pub fn lemma_2_4_check(
    vectors: &[BlockVector<'_>],
    p: Exponent,
    c: f64,
) -> Result<DisjointSumCheck, NormError> {
    let space = ensure_same_space(vectors)?;
    if !(c >= 1.0) {
        return Err(NormError::InvalidInput(format!(
            "estimate constant {c} < 1"
        )));
    }
    if !matches!(space.outer(), Outer::Lp(_)) {
        return Err(NormError::InvalidExponents(
            "a c_0 outer norm has no lower p-estimate".into(),
        ));
    }
    if let Some(b) = space
        .blocks()
        .iter()
        .find(|b| b.exponent.value() < p.value())
    {
        return Err(NormError::InvalidExponents(format!(
            "block exponent {} is below p = {}",
            b.exponent, p
        )));
    }

    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, v) in vectors.iter().enumerate() {
        for coord in v.support() {
            if let Some(&j) = owner.get(&coord) {
                return Err(NormError::NotDisjoint {
                    first: j,
                    second: i,
                });
            }
            owner.insert(coord, i);
        }
    }

    let k = vectors.len() as f64;
    let r_conj = space.max_block_exponent().conjugate();
    let lhs: f64 = vectors.iter().map(BlockVector::norm).sum();
    let rhs = c * k.powf(r_conj.recip()) * BlockVector::sum_of(vectors)?.norm();
    Ok(DisjointSumCheck {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + DEFAULT_TOLERANCE),
    })
}

fn ensure_same_space<'a>(vectors: &[BlockVector<'a>]) -> Result<&'a super::SumSpace, NormError> {
    let first = vectors
        .first()
        .ok_or_else(|| NormError::InvalidInput("empty vector family".into()))?;
    if vectors.iter().any(|v| v.space() != first.space()) {
        return Err(NormError::SpaceMismatch);
    }
    Ok(first.space())
}
