//! Block max-norms.
//!
//! Every stability inequality in this toolkit declares its own norm on a
//! product space, always of the form "max over blocks of an inner norm per
//! block" (for example `(u, x, alpha) -> max{|u|_2, |x|_2, |alpha|}`).
//! [`NormSpec`] makes that choice explicit per call; no global default norm
//! is assumed anywhere.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormError {
    #[error("vector has dimension {got}, norm expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ABS blocks must have dimension 1, got {0}")]
    AbsBlockDimension(usize),
    #[error("blocks must have positive dimension")]
    EmptyBlock,
}

/// Inner norm applied to one block of coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerNorm {
    L1,
    L2,
    /// Absolute value; only valid on blocks of dimension 1.
    Abs,
}

/// A norm on a product space: the max over consecutive coordinate blocks of
/// each block's inner norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormSpec {
    blocks: Vec<(usize, InnerNorm)>,
    total_dim: usize,
    /// All blocks have width one, so the norm is the max-coordinate norm
    /// and distances take a branch-free fast path.
    chebyshev: bool,
}

impl NormSpec {
    pub fn new(blocks: Vec<(usize, InnerNorm)>) -> Result<NormSpec, NormError> {
        let mut total_dim = 0;
        for &(dim, inner) in &blocks {
            if dim == 0 {
                return Err(NormError::EmptyBlock);
            }
            if inner == InnerNorm::Abs && dim != 1 {
                return Err(NormError::AbsBlockDimension(dim));
            }
            total_dim += dim;
        }
        let chebyshev = blocks.iter().all(|&(dim, _)| dim == 1);
        Ok(NormSpec {
            blocks,
            total_dim,
            chebyshev,
        })
    }

    /// Single Euclidean block covering the whole space.
    pub fn l2(dim: usize) -> NormSpec {
        NormSpec::new(vec![(dim, InnerNorm::L2)]).expect("positive dimension")
    }

    /// The norm `(x, alpha) -> max{|x|_2, |alpha|}` used on epigraph spaces.
    pub fn epi(dim: usize) -> NormSpec {
        NormSpec::new(vec![(dim, InnerNorm::L2), (1, InnerNorm::Abs)]).expect("valid blocks")
    }

    /// The norm `(u, x, alpha) -> max{|u|_2, |x|_2, |alpha|}` used on
    /// epigraphs of bivariate functions.
    pub fn epi_bivariate(m: usize, n: usize) -> NormSpec {
        NormSpec::new(vec![
            (m, InnerNorm::L2),
            (n, InnerNorm::L2),
            (1, InnerNorm::Abs),
        ])
        .expect("valid blocks")
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn blocks(&self) -> &[(usize, InnerNorm)] {
        &self.blocks
    }

    /// Evaluates the norm, checking the dimension first.
    pub fn eval(&self, v: &[f64]) -> Result<f64, NormError> {
        if v.len() != self.total_dim {
            return Err(NormError::DimensionMismatch {
                expected: self.total_dim,
                got: v.len(),
            });
        }
        Ok(self.eval_unchecked(v))
    }

    /// Evaluates the norm assuming the dimension already matches.
    ///
    /// This is the hot path of every nearest-neighbor query, so it skips the
    /// length check; callers validate dimensions once per cloud.
    #[inline]
    pub fn eval_unchecked(&self, v: &[f64]) -> f64 {
        let mut best = 0.0f64;
        let mut offset = 0;
        for &(dim, inner) in &self.blocks {
            let slice = &v[offset..offset + dim];
            let val = match inner {
                InnerNorm::L1 => slice.iter().map(|c| c.abs()).sum(),
                InnerNorm::L2 => slice.iter().map(|c| c * c).sum::<f64>().sqrt(),
                InnerNorm::Abs => slice[0].abs(),
            };
            if val > best {
                best = val;
            }
            offset += dim;
        }
        best
    }

    /// Norm of `a - b` with an early exit: any block reaching `cutoff`
    /// already decides a nearest-neighbor rejection, so the remaining
    /// blocks are skipped. The returned value equals the true distance
    /// whenever it is below `cutoff`.
    #[inline]
    pub fn distance_under(&self, a: &[f64], b: &[f64], cutoff: f64) -> f64 {
        if self.chebyshev {
            let mut best = 0.0f64;
            for (x, y) in a.iter().zip(b) {
                let d = (x - y).abs();
                if d >= cutoff {
                    return d;
                }
                if d > best {
                    best = d;
                }
            }
            return best;
        }
        let mut best = 0.0f64;
        let mut offset = 0;
        for &(dim, inner) in &self.blocks {
            let val = match inner {
                InnerNorm::L1 => (offset..offset + dim)
                    .map(|k| (a[k] - b[k]).abs())
                    .sum::<f64>(),
                InnerNorm::L2 => (offset..offset + dim)
                    .map(|k| {
                        let d = a[k] - b[k];
                        d * d
                    })
                    .sum::<f64>()
                    .sqrt(),
                InnerNorm::Abs => (a[offset] - b[offset]).abs(),
            };
            if val >= cutoff {
                return val;
            }
            if val > best {
                best = val;
            }
            offset += dim;
        }
        best
    }

    /// Norm of the difference `a - b`, without allocating.
    #[inline]
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), self.total_dim);
        debug_assert_eq!(b.len(), self.total_dim);
        if self.chebyshev {
            return a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max);
        }
        let mut best = 0.0f64;
        let mut offset = 0;
        for &(dim, inner) in &self.blocks {
            let val = match inner {
                InnerNorm::L1 => (offset..offset + dim)
                    .map(|k| (a[k] - b[k]).abs())
                    .sum::<f64>(),
                InnerNorm::L2 => (offset..offset + dim)
                    .map(|k| {
                        let d = a[k] - b[k];
                        d * d
                    })
                    .sum::<f64>()
                    .sqrt(),
                InnerNorm::Abs => (a[offset] - b[offset]).abs(),
            };
            if val > best {
                best = val;
            }
            offset += dim;
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_max_over_l1_l2_abs() {
        let n = NormSpec::new(vec![
            (2, InnerNorm::L1),
            (1, InnerNorm::L2),
            (1, InnerNorm::Abs),
        ])
        .unwrap();
        let v = [0.3, 0.4, 0.5, 0.2];
        assert!((n.eval(&v).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_has_zero_norm() {
        let n = NormSpec::epi_bivariate(2, 3);
        assert_eq!(n.eval(&[0.0; 6]).unwrap(), 0.0);
    }

    #[test]
    fn euclidean_block() {
        let n = NormSpec::l2(2);
        assert!((n.eval(&[3.0, 4.0]).unwrap() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let n = NormSpec::l2(2);
        assert_eq!(
            n.eval(&[1.0]),
            Err(NormError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn abs_block_must_be_one_dimensional() {
        assert_eq!(
            NormSpec::new(vec![(2, InnerNorm::Abs)]),
            Err(NormError::AbsBlockDimension(2))
        );
    }
}
