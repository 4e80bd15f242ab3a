use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Exponent, NormError};

/// Largest total dimension for which [`BlockVector`]s may be instantiated.
pub const INSTANTIATE_LIMIT: u64 = 1 << 24;

// 2^53: beyond this `ceil(exp(x))` is no longer an exactly computed integer.
const EXACT_FLOAT_INTEGER: f64 = 9_007_199_254_740_992.0;

/// Dimension of a block, always carried with its natural logarithm.
///
/// `exact` is `None` when the dimension is only known through `log`
/// (descriptor-only mode).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockDim {
    exact: Option<u64>,
    log: f64,
}

impl BlockDim {
    pub fn exact(k: u64) -> Result<Self, NormError> {
        if k == 0 {
            return Err(NormError::InvalidInput(
                "block dimension must be >= 1".into(),
            ));
        }
        Ok(BlockDim {
            exact: Some(k),
            log: (k as f64).ln(),
        })
    }

    /// A dimension known only through its logarithm.
    pub fn from_log(log: f64) -> Result<Self, NormError> {
        if !log.is_finite() || log < 0.0 {
            return Err(NormError::InvalidInput(format!("bad log dimension {log}")));
        }
        Ok(BlockDim { exact: None, log })
    }

    /// `ceil(exp(x))`, exact when it is representable, log-only otherwise.
    pub fn ceil_exp(x: f64) -> Result<Self, NormError> {
        if !x.is_finite() || x < 0.0 {
            return Err(NormError::InvalidInput(format!("bad log dimension {x}")));
        }
        let k = x.exp().ceil();
        if k < EXACT_FLOAT_INTEGER {
            BlockDim::exact(k as u64)
        } else {
            BlockDim::from_log(x)
        }
    }

    pub fn exact_value(&self) -> Option<u64> {
        self.exact
    }

    pub fn log(&self) -> f64 {
        self.log
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub exponent: Exponent,
    pub dim: BlockDim,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outer {
    /// Outer `l_p` norm, `p` finite.
    Lp(Exponent),
    C0,
}

impl Outer {
    pub fn lp(p: f64) -> Result<Self, NormError> {
        let p = Exponent::new(p)?;
        if !p.is_finite() {
            return Err(NormError::InvalidInput(
                "outer l_p exponent must be finite".into(),
            ));
        }
        Ok(Outer::Lp(p))
    }

    /// The exponent used to combine block norms on a truncation.
    pub fn exponent(self) -> Exponent {
        match self {
            Outer::Lp(p) => p,
            Outer::C0 => Exponent::Infinite,
        }
    }
}

/// A finite truncation of an `l_p`- or `c_0`-sum of blocks `l_{p_n}^{K_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumSpace {
    outer: Outer,
    blocks: Vec<BlockSpec>,
}

impl SumSpace {
    pub fn new(outer: Outer, blocks: Vec<BlockSpec>) -> Result<Self, NormError> {
        if blocks.is_empty() {
            return Err(NormError::InvalidInput(
                "a sum space needs at least one block".into(),
            ));
        }
        if let Outer::Lp(p) = outer {
            if !p.is_finite() {
                return Err(NormError::InvalidInput(
                    "outer l_p exponent must be finite".into(),
                ));
            }
        }
        Ok(SumSpace { outer, blocks })
    }

    /// Convenience constructor from `(exponent, dimension)` pairs.
    pub fn from_dims(outer: Outer, blocks: &[(f64, u64)]) -> Result<Self, NormError> {
        let blocks = blocks
            .iter()
            .map(|&(p, k)| {
                Ok(BlockSpec {
                    exponent: Exponent::new(p)?,
                    dim: BlockDim::exact(k)?,
                })
            })
            .collect::<Result<Vec<_>, NormError>>()?;
        SumSpace::new(outer, blocks)
    }

    pub fn outer(&self) -> Outer {
        self.outer
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn truncation_len(&self) -> usize {
        self.blocks.len()
    }

    /// Exact total dimension, `None` on overflow or in descriptor-only mode.
    pub fn total_dim(&self) -> Option<u64> {
        self.blocks
            .iter()
            .try_fold(0u64, |acc, b| acc.checked_add(b.dim.exact_value()?))
    }

    /// `log(sum K_n)` via log-sum-exp; always finite.
    pub fn total_dim_log(&self) -> f64 {
        let max = self
            .blocks
            .iter()
            .map(|b| b.dim.log())
            .fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = self.blocks.iter().map(|b| (b.dim.log() - max).exp()).sum();
        max + s.ln()
    }

    pub fn is_instantiable(&self) -> bool {
        matches!(self.total_dim(), Some(n) if n <= INSTANTIATE_LIMIT)
    }

    /// Largest block exponent.
    pub fn max_block_exponent(&self) -> Exponent {
        self.blocks
            .iter()
            .map(|b| b.exponent)
            .fold(
                Exponent::ONE,
                |acc, e| if e.value() > acc.value() { e } else { acc },
            )
    }
}

/// `(sum |c_i|^p)^(1/p)`, or `max |c_i|` for `p = inf`.
pub fn lp_norm(coeffs: &[f64], p: Exponent) -> Result<f64, NormError> {
    if coeffs.is_empty() {
        return Err(NormError::InvalidInput("empty coefficient list".into()));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(NormError::InvalidInput("non-finite coefficient".into()));
    }
    let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max == 0.0 {
        return Ok(0.0);
    }
    Ok(match p {
        Exponent::Infinite => max,
        Exponent::Finite(1.0) => coeffs.iter().map(|c| c.abs()).sum(),
        Exponent::Finite(p) => {
            // scale by the max entry so large p cannot overflow
            let s: f64 = coeffs.iter().map(|c| (c.abs() / max).powf(p)).sum();
            max * s.powf(1.0 / p)
        }
    })
}

/// Outer norm of the per-block norms.
pub fn sum_norm(v: &BlockVector<'_>) -> f64 {
    let block_norms: Vec<f64> = v
        .space
        .blocks
        .iter()
        .zip(&v.coeffs)
        .map(|(b, c)| lp_norm(c, b.exponent).expect("block vectors are validated"))
        .collect();
    lp_norm(&block_norms, v.space.outer.exponent()).expect("at least one block")
}

/// Coefficients of a vector in a [`SumSpace`], grouped by block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector<'a> {
    space: &'a SumSpace,
    coeffs: Vec<Vec<f64>>,
}

impl<'a> BlockVector<'a> {
    pub fn new(space: &'a SumSpace, coeffs: Vec<Vec<f64>>) -> Result<Self, NormError> {
        if !space.is_instantiable() {
            return Err(NormError::DescriptorOnly);
        }
        if coeffs.len() != space.blocks.len() {
            return Err(NormError::InvalidInput(format!(
                "expected {} blocks, got {}",
                space.blocks.len(),
                coeffs.len()
            )));
        }
        for (i, (b, c)) in space.blocks.iter().zip(&coeffs).enumerate() {
            let dim = b.dim.exact_value().ok_or(NormError::DescriptorOnly)?;
            if c.len() as u64 != dim {
                return Err(NormError::ShapeMismatch {
                    block: i,
                    expected: dim,
                    actual: c.len(),
                });
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(NormError::InvalidInput("non-finite coefficient".into()));
            }
        }
        Ok(BlockVector { space, coeffs })
    }

    pub fn zeros(space: &'a SumSpace) -> Result<Self, NormError> {
        if !space.is_instantiable() {
            return Err(NormError::DescriptorOnly);
        }
        let coeffs = space
            .blocks
            .iter()
            .map(|b| vec![0.0; b.dim.exact_value().unwrap_or(0) as usize])
            .collect();
        Ok(BlockVector { space, coeffs })
    }

    /// The canonical basis vector at coordinate `index` of block `block`.
    pub fn unit(space: &'a SumSpace, block: usize, index: usize) -> Result<Self, NormError> {
        let mut v = BlockVector::zeros(space)?;
        let slot = v
            .coeffs
            .get_mut(block)
            .and_then(|b| b.get_mut(index))
            .ok_or_else(|| NormError::InvalidInput(format!("no coordinate ({block}, {index})")))?;
        *slot = 1.0;
        Ok(v)
    }

    pub fn space(&self) -> &'a SumSpace {
        self.space
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        sum_norm(self)
    }

    /// Nonzero coordinates as `(block, index)` pairs, in order.
    pub fn support(&self) -> BTreeSet<(usize, usize)> {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(b, c)| {
                c.iter()
                    .enumerate()
                    .filter(|(_, x)| **x != 0.0)
                    .map(move |(i, _)| (b, i))
            })
            .collect()
    }

    /// Indices of blocks carrying at least one nonzero coordinate.
    pub fn block_support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().any(|x| *x != 0.0))
            .map(|(b, _)| b)
            .collect()
    }

    pub fn is_disjoint(&self, other: &BlockVector<'_>) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| *x == 0.0 || *y == 0.0))
    }

    pub fn scaled(&self, t: f64) -> BlockVector<'a> {
        BlockVector {
            space: self.space,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.iter().map(|x| x * t).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &BlockVector<'_>) -> Result<BlockVector<'a>, NormError> {
        if self.space != other.space {
            return Err(NormError::SpaceMismatch);
        }
        Ok(BlockVector {
            space: self.space,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        })
    }

    /// Sum of a non-empty family living in one space.
    pub fn sum_of(vectors: &[BlockVector<'a>]) -> Result<BlockVector<'a>, NormError> {
        let (first, rest) = vectors
            .split_first()
            .ok_or_else(|| NormError::InvalidInput("empty vector family".into()))?;
        rest.iter().try_fold(first.clone(), |acc, v| acc.add(v))
    }
}
