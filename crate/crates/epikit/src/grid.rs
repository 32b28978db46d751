//! Extended-real functions tabulated on uniform box grids.
//!
//! A [`GriddedFunction`] is the computational stand-in for an objective,
//! constraint component, or penalty term: values live on a uniform grid over
//! a box, everything off-grid is simply not represented. Operations here
//! build the derived objects the stability analysis consumes: infima and
//! near-minimizer sets, level sets, epigraph/hypograph point clouds,
//! discrete Legendre-Fenchel conjugates, Lipschitz modulus estimates, and
//! per-index convergence profiles of epigraph distances.

use rayon::prelude::*;
use thiserror::Error;

use crate::cloud::{truncated_hausdorff, CloudError, PointCloud};
use crate::extreal::ExtReal;
use crate::norm::NormSpec;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("axis {axis}: lo {lo} must be strictly below hi {hi}")]
    InvalidBox { axis: usize, lo: f64, hi: f64 },
    #[error("axis {0}: needs at least 2 steps")]
    TooFewSteps(usize),
    #[error("value table has {got} entries, grid has {expected} points")]
    ValueCount { expected: usize, got: usize },
    #[error("evaluator returned NaN at grid point {0:?}")]
    NanValue(Vec<f64>),
    #[error("function is identically +inf")]
    NotProper,
    #[error("non-finite value inside the ball at {0:?}")]
    NonFiniteInBall(Vec<f64>),
    #[error("point {0:?} is outside the grid box")]
    OutsideGrid(Vec<f64>),
    #[error("point {0:?} is not a grid point")]
    NotAGridPoint(Vec<f64>),
    #[error("vertical sampling step must be positive, got {0}")]
    BadAlphaStep(f64),
    #[error("alpha_lo {0} must be below alpha_hi {1}")]
    BadAlphaRange(f64, f64),
    #[error("sequence indices must be strictly increasing")]
    IndicesNotIncreasing,
    #[error(transparent)]
    Cloud(#[from] CloudError),
}

/// One grid axis: `steps` uniformly spaced points from `lo` to `hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    #[inline]
    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.steps - 1) as f64
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.spacing()
    }
}

/// A uniform box grid in `dim = axes.len()` dimensions, row-major with the
/// last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    axes: Vec<Axis>,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>) -> Result<GridSpec, GridError> {
        for (k, a) in axes.iter().enumerate() {
            if !(a.lo < a.hi) || !a.lo.is_finite() || !a.hi.is_finite() {
                return Err(GridError::InvalidBox {
                    axis: k,
                    lo: a.lo,
                    hi: a.hi,
                });
            }
            if a.steps < 2 {
                return Err(GridError::TooFewSteps(k));
            }
        }
        Ok(GridSpec { axes })
    }

    /// 1-D grid on `[lo, hi]` with spacing as close to `step` as fits.
    pub fn line(lo: f64, hi: f64, step: f64) -> Result<GridSpec, GridError> {
        let steps = (((hi - lo) / step).round() as usize + 1).max(2);
        GridSpec::new(vec![Axis { lo, hi, steps }])
    }

    /// Box grid with a common target spacing on each axis.
    pub fn uniform_box(bounds: &[(f64, f64)], step: f64) -> Result<GridSpec, GridError> {
        let axes = bounds
            .iter()
            .map(|&(lo, hi)| Axis {
                lo,
                hi,
                steps: (((hi - lo) / step).round() as usize + 1).max(2),
            })
            .collect();
        GridSpec::new(axes)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn point_count(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    pub fn max_spacing(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).fold(0.0f64, f64::max)
    }

    /// Writes the coordinates of flat index `idx` into `out`.
    #[inline]
    pub fn point_of(&self, mut idx: usize, out: &mut [f64]) {
        for k in (0..self.axes.len()).rev() {
            let a = &self.axes[k];
            out[k] = a.coord(idx % a.steps);
            idx /= a.steps;
        }
    }

    pub fn point_vec(&self, idx: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.point_of(idx, &mut out);
        out
    }

    /// All grid points as a flat row-major array.
    pub fn flat_points(&self) -> Vec<f64> {
        let dim = self.dim();
        let count = self.point_count();
        let mut flat = vec![0.0; count * dim];
        for idx in 0..count {
            let start = idx * dim;
            self.point_of(idx, &mut flat[start..start + dim]);
        }
        flat
    }

    /// Flat index of a point that must coincide with a grid node (within a
    /// relative tolerance of the spacing).
    pub fn index_of(&self, point: &[f64]) -> Result<usize, GridError> {
        let mut idx = 0usize;
        for (k, a) in self.axes.iter().enumerate() {
            let h = a.spacing();
            let rel = (point[k] - a.lo) / h;
            let i = rel.round();
            if i < -0.5 || i as usize >= a.steps {
                return Err(GridError::OutsideGrid(point.to_vec()));
            }
            if (rel - i).abs() > 1e-7 {
                return Err(GridError::NotAGridPoint(point.to_vec()));
            }
            idx = idx * a.steps + i as usize;
        }
        Ok(idx)
    }
}

/// An extended-real function stored as a value table over a [`GridSpec`].
#[derive(Clone, Debug)]
pub struct GriddedFunction {
    grid: GridSpec,
    values: Vec<ExtReal>,
}

/// Orientation of the cloud built by [`GriddedFunction::epi_cloud`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Points on or above the graph.
    Epi,
    /// Points on or below the graph.
    Hypo,
}

/// Vertical sampling window for epigraph/hypograph clouds.
#[derive(Clone, Copy, Debug)]
pub struct EpiCloudParams {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub alpha_step: f64,
}

impl EpiCloudParams {
    /// Window with the default vertical spacing: the widest spatial grid
    /// step, which balances cloud size against isotropic sampling error.
    pub fn with_default_step(grid: &GridSpec, alpha_lo: f64, alpha_hi: f64) -> EpiCloudParams {
        EpiCloudParams {
            alpha_lo,
            alpha_hi,
            alpha_step: grid.max_spacing(),
        }
    }
}

impl GriddedFunction {
    pub fn from_values(grid: GridSpec, values: Vec<ExtReal>) -> Result<GriddedFunction, GridError> {
        if values.len() != grid.point_count() {
            return Err(GridError::ValueCount {
                expected: grid.point_count(),
                got: values.len(),
            });
        }
        Ok(GriddedFunction { grid, values })
    }

    /// Tabulates `eval` on the grid. A NaN from the evaluator is an error;
    /// IEEE infinities map onto the extended-real infinities.
    pub fn sample<F>(grid: GridSpec, eval: F) -> Result<GriddedFunction, GridError>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let dim = grid.dim();
        let values: Result<Vec<ExtReal>, GridError> = (0..grid.point_count())
            .into_par_iter()
            .map(|idx| {
                let mut p = vec![0.0; dim];
                grid.point_of(idx, &mut p);
                ExtReal::try_new(eval(&p)).ok_or(GridError::NanValue(p))
            })
            .collect();
        Ok(GriddedFunction {
            grid,
            values: values?,
        })
    }

    /// Like [`GriddedFunction::sample`] for evaluators that already produce
    /// extended reals.
    pub fn sample_ext<F>(grid: GridSpec, eval: F) -> GriddedFunction
    where
        F: Fn(&[f64]) -> ExtReal + Sync,
    {
        let dim = grid.dim();
        let values: Vec<ExtReal> = (0..grid.point_count())
            .into_par_iter()
            .map(|idx| {
                let mut p = vec![0.0; dim];
                grid.point_of(idx, &mut p);
                eval(&p)
            })
            .collect();
        GriddedFunction { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> ExtReal {
        self.values[idx]
    }

    /// Value at a point that must be a grid node.
    pub fn value_at(&self, point: &[f64]) -> Result<ExtReal, GridError> {
        Ok(self.values[self.grid.index_of(point)?])
    }

    /// Multilinear interpolation. Any infinite corner with positive weight
    /// dominates, `+inf` winning over `-inf` as in extended-real addition.
    pub fn interpolate(&self, point: &[f64]) -> Result<ExtReal, GridError> {
        let dim = self.grid.dim();
        let mut base = Vec::with_capacity(dim);
        let mut frac = Vec::with_capacity(dim);
        for (k, a) in self.grid.axes.iter().enumerate() {
            let rel = (point[k] - a.lo) / a.spacing();
            if rel < -1e-9 || rel > (a.steps - 1) as f64 + 1e-9 {
                return Err(GridError::OutsideGrid(point.to_vec()));
            }
            let i = (rel.floor().max(0.0) as usize).min(a.steps - 2);
            base.push(i);
            frac.push((rel - i as f64).clamp(0.0, 1.0));
        }
        let mut saw_pos_inf = false;
        let mut saw_neg_inf = false;
        let mut finite_sum = 0.0;
        for corner in 0..(1usize << dim) {
            let mut w = 1.0;
            let mut idx = 0usize;
            for k in 0..dim {
                let hi_side = (corner >> k) & 1 == 1;
                w *= if hi_side { frac[k] } else { 1.0 - frac[k] };
                idx = idx * self.grid.axes[k].steps + base[k] + usize::from(hi_side);
            }
            if w == 0.0 {
                continue;
            }
            match self.values[idx] {
                ExtReal::PosInf => saw_pos_inf = true,
                ExtReal::NegInf => saw_neg_inf = true,
                ExtReal::Finite(v) => finite_sum += w * v,
            }
        }
        Ok(if saw_pos_inf {
            ExtReal::PosInf
        } else if saw_neg_inf {
            ExtReal::NegInf
        } else {
            ExtReal::new(finite_sum)
        })
    }

    /// Minimum over the table plus the grid points within `eps` of it.
    ///
    /// An identically `+inf` table yields `(+inf, empty)`; a table reaching
    /// `-inf` yields the points attaining `-inf`.
    pub fn infimum_argmin(&self, eps: f64) -> (ExtReal, PointCloud) {
        debug_assert!(eps >= 0.0);
        let inf = self.values.iter().copied().min().unwrap_or(ExtReal::PosInf);
        if inf == ExtReal::PosInf {
            return (inf, PointCloud::empty(self.grid.dim(), "argmin"));
        }
        let cutoff = inf + ExtReal::new(eps);
        let dim = self.grid.dim();
        let mut data = Vec::new();
        let mut p = vec![0.0; dim];
        for (idx, &v) in self.values.iter().enumerate() {
            let keep = match inf {
                ExtReal::NegInf => v == ExtReal::NegInf,
                _ => v <= cutoff,
            };
            if keep {
                self.grid.point_of(idx, &mut p);
                data.extend_from_slice(&p);
            }
        }
        let cloud = PointCloud::from_flat(dim, data, "argmin").expect("grid points are finite");
        (inf, cloud)
    }

    /// Grid points where the value does not exceed `alpha`.
    pub fn level_set(&self, alpha: f64) -> PointCloud {
        let dim = self.grid.dim();
        let cut = ExtReal::new(alpha);
        let mut data = Vec::new();
        let mut p = vec![0.0; dim];
        for (idx, &v) in self.values.iter().enumerate() {
            if v <= cut {
                self.grid.point_of(idx, &mut p);
                data.extend_from_slice(&p);
            }
        }
        PointCloud::from_flat(dim, data, "level-set").expect("grid points are finite")
    }

    /// Samples the epigraph (or hypograph) as a point cloud in one higher
    /// dimension.
    ///
    /// For each grid point with value at most `alpha_hi`, the column starts
    /// at `max(value, alpha_lo)` and climbs at `alpha_step` up to
    /// `alpha_hi`. The hypograph orientation applies the same construction
    /// to the negated function and flips the last coordinate back.
    pub fn epi_cloud(
        &self,
        params: EpiCloudParams,
        orientation: Orientation,
    ) -> Result<PointCloud, GridError> {
        if !(params.alpha_step > 0.0) {
            return Err(GridError::BadAlphaStep(params.alpha_step));
        }
        if !(params.alpha_lo < params.alpha_hi) {
            return Err(GridError::BadAlphaRange(params.alpha_lo, params.alpha_hi));
        }
        let dim = self.grid.dim();
        let sign = match orientation {
            Orientation::Epi => 1.0,
            Orientation::Hypo => -1.0,
        };
        let tag = match orientation {
            Orientation::Epi => "epi",
            Orientation::Hypo => "hypo",
        };
        let fuzz = 1e-9 * params.alpha_step;
        let mut data = Vec::new();
        let mut p = vec![0.0; dim + 1];
        for idx in 0..self.values.len() {
            let v = match orientation {
                Orientation::Epi => self.values[idx],
                Orientation::Hypo => -self.values[idx],
            };
            let base = match v {
                ExtReal::PosInf => continue,
                ExtReal::NegInf => params.alpha_lo,
                ExtReal::Finite(a) => {
                    if a > params.alpha_hi + fuzz {
                        continue;
                    }
                    a.max(params.alpha_lo)
                }
            };
            self.grid.point_of(idx, &mut p[..dim]);
            let mut k = 0usize;
            loop {
                let alpha = base + k as f64 * params.alpha_step;
                if alpha > params.alpha_hi + fuzz {
                    break;
                }
                p[dim] = sign * alpha;
                data.extend_from_slice(&p);
                k += 1;
            }
        }
        Ok(PointCloud::from_flat(dim + 1, data, tag).expect("finite samples"))
    }

    /// Discrete Legendre-Fenchel conjugate on a caller-supplied dual grid:
    /// `g*(y) = max_x <x, y> - g(x)` over the primal grid points.
    ///
    /// The dual grid is the caller's choice because the conjugate's domain
    /// can be unbounded; no automatic range inference is attempted.
    pub fn conjugate(&self, dual_grid: GridSpec) -> Result<GriddedFunction, GridError> {
        if self.values.iter().all(|&v| v == ExtReal::PosInf) {
            return Err(GridError::NotProper);
        }
        let dim = self.grid.dim();
        let primal = self.grid.flat_points();
        let values: Vec<ExtReal> = (0..dual_grid.point_count())
            .into_par_iter()
            .map(|yidx| {
                let mut y = vec![0.0; dim];
                dual_grid.point_of(yidx, &mut y);
                let mut best = ExtReal::NegInf;
                for (xi, v) in self.values.iter().enumerate() {
                    if *v == ExtReal::PosInf {
                        continue;
                    }
                    let x = &primal[xi * dim..(xi + 1) * dim];
                    let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
                    let term = ExtReal::new(dot) - *v;
                    if term > best {
                        best = term;
                    }
                }
                best
            })
            .collect();
        GriddedFunction::from_values(dual_grid, values)
    }

    /// Largest difference quotient over axis-adjacent grid pairs inside the
    /// Euclidean ball of radius `rho`; the discrete stand-in for a Lipschitz
    /// modulus at that radius.
    pub fn lipschitz_modulus(&self, rho: f64) -> Result<f64, GridError> {
        let dim = self.grid.dim();
        let mut p = vec![0.0; dim];
        let mut in_ball = vec![false; self.values.len()];
        for (idx, flag) in in_ball.iter_mut().enumerate() {
            self.grid.point_of(idx, &mut p);
            let r2: f64 = p.iter().map(|c| c * c).sum();
            if r2.sqrt() <= rho {
                *flag = true;
                if !self.values[idx].is_finite() {
                    return Err(GridError::NonFiniteInBall(p.clone()));
                }
            }
        }
        let mut modulus = 0.0f64;
        let mut stride = 1usize;
        for k in (0..dim).rev() {
            let steps = self.grid.axes[k].steps;
            let h = self.grid.axes[k].spacing();
            for idx in 0..self.values.len() {
                let i_k = (idx / stride) % steps;
                if i_k + 1 == steps {
                    continue;
                }
                let j = idx + stride;
                if in_ball[idx] && in_ball[j] {
                    let (a, b) = (self.values[idx], self.values[j]);
                    if let (Some(a), Some(b)) = (a.finite(), b.finite()) {
                        modulus = modulus.max((b - a).abs() / h);
                    }
                }
            }
            stride *= steps;
        }
        Ok(modulus)
    }

    /// Pointwise maximum of `|self - other|` over grid points inside the
    /// Euclidean ball; both tables must share the grid.
    pub fn sup_abs_diff(&self, other: &GriddedFunction, rho: f64) -> Result<f64, GridError> {
        assert_eq!(self.grid, other.grid, "tables must share a grid");
        let dim = self.grid.dim();
        let mut p = vec![0.0; dim];
        let mut sup = 0.0f64;
        for idx in 0..self.values.len() {
            self.grid.point_of(idx, &mut p);
            let r: f64 = p.iter().map(|c| c * c).sum::<f64>().sqrt();
            if r <= rho {
                match (self.values[idx], other.values[idx]) {
                    (ExtReal::Finite(a), ExtReal::Finite(b)) => sup = sup.max((a - b).abs()),
                    (a, b) if a == b => {}
                    _ => return Err(GridError::NonFiniteInBall(p.clone())),
                }
            }
        }
        Ok(sup)
    }
}

/// Distances of a family of approximations to a limit function, one entry
/// per sequence index, with an optional fitted log-log decay rate.
#[derive(Clone, Debug)]
pub struct ConvergenceProfile {
    pub rho: f64,
    pub entries: Vec<(u32, ExtReal)>,
    pub fitted_rate: Option<f64>,
}

/// Truncated Hausdorff distance between each `epi g_nu` and `epi g`, plus a
/// least-squares rate fit of `log d` against `log nu`.
///
/// Entries with distance at or below `rate_tol` are already converged at
/// grid resolution and are excluded from the fit, as are non-finite ones.
pub fn epi_profile(
    seq: &[(u32, &GriddedFunction)],
    g: &GriddedFunction,
    rho: f64,
    norm: &NormSpec,
    params: EpiCloudParams,
    rate_tol: f64,
) -> Result<ConvergenceProfile, GridError> {
    if seq.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(GridError::IndicesNotIncreasing);
    }
    let limit_cloud = g.epi_cloud(params, Orientation::Epi)?;
    let mut entries = Vec::with_capacity(seq.len());
    for &(nu, gnu) in seq {
        let cloud_nu = gnu.epi_cloud(params, Orientation::Epi)?;
        let d = truncated_hausdorff(&cloud_nu, &limit_cloud, rho, norm)?;
        entries.push((nu, d));
    }
    let fitted_rate = fit_rate(&entries, rate_tol);
    Ok(ConvergenceProfile {
        rho,
        entries,
        fitted_rate,
    })
}

/// Least-squares slope of `ln d` versus `ln nu` over usable entries.
pub fn fit_rate(entries: &[(u32, ExtReal)], tol: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = entries
        .iter()
        .filter_map(|&(nu, d)| match d {
            ExtReal::Finite(v) if v > tol => Some(((nu as f64).ln(), v.ln())),
            _ => None,
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(lo: f64, hi: f64, steps: usize) -> GridSpec {
        GridSpec::new(vec![Axis { lo, hi, steps }]).unwrap()
    }

    #[test]
    fn sample_square_on_three_points() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 3), |x| x[0] * x[0]).unwrap();
        assert_eq!(
            g.values(),
            &[
                ExtReal::Finite(1.0),
                ExtReal::Finite(0.0),
                ExtReal::Finite(1.0)
            ]
        );
    }

    #[test]
    fn sample_indicator_of_nonpositive_halfline() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 3), |x| {
            if x[0] <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .unwrap();
        assert_eq!(g.values(), &[ExtReal::ZERO, ExtReal::ZERO, ExtReal::PosInf]);
    }

    #[test]
    fn sample_constant_minus_infinity() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 3), |_| f64::NEG_INFINITY).unwrap();
        assert!(g.values().iter().all(|&v| v == ExtReal::NegInf));
    }

    #[test]
    fn sample_rejects_nan() {
        assert!(GriddedFunction::sample(line(-1.0, 1.0, 3), |_| f64::NAN).is_err());
    }

    #[test]
    fn infimum_of_everywhere_infinite_function_is_empty() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 5), |_| f64::INFINITY).unwrap();
        let (inf, argmin) = g.infimum_argmin(0.0);
        assert_eq!(inf, ExtReal::PosInf);
        assert!(argmin.is_empty());
    }

    #[test]
    fn argmin_collects_near_minimizers() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 201), |x| x[0] * x[0]).unwrap();
        let (inf, argmin) = g.infimum_argmin(0.01);
        assert_eq!(inf, ExtReal::ZERO);
        // x^2 <= 0.01 on the grid: |x| <= 0.1.
        assert!(argmin.iter_points().all(|p| p[0].abs() <= 0.1 + 1e-12));
        assert!(argmin.len() >= 19);
    }

    #[test]
    fn level_set_of_square() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 201), |x| x[0] * x[0]).unwrap();
        let ls = g.level_set(0.25);
        assert!(!ls.is_empty());
        assert!(ls.iter_points().all(|p| p[0].abs() <= 0.5 + 1e-12));
        assert!(g.level_set(-1.0).is_empty());
    }

    #[test]
    fn level_set_of_indicator() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 5), |x| {
            if x[0] <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .unwrap();
        let ls = g.level_set(0.0);
        assert_eq!(ls.len(), 3);
        assert!(ls.iter_points().all(|p| p[0] <= 0.0));
    }

    #[test]
    fn epi_cloud_of_infinite_function_is_empty() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 3), |_| f64::INFINITY).unwrap();
        let cloud = g
            .epi_cloud(
                EpiCloudParams {
                    alpha_lo: -1.0,
                    alpha_hi: 1.0,
                    alpha_step: 0.5,
                },
                Orientation::Epi,
            )
            .unwrap();
        assert!(cloud.is_empty());
    }

    #[test]
    fn epi_cloud_samples_vertical_ray() {
        // Zero at the origin, +inf on the second node: the cloud is the
        // vertical ray over the single point of the effective domain.
        let grid = line(0.0, 0.5, 2);
        let g = GriddedFunction::from_values(grid, vec![ExtReal::ZERO, ExtReal::PosInf]).unwrap();
        let cloud = g
            .epi_cloud(
                EpiCloudParams {
                    alpha_lo: 0.0,
                    alpha_hi: 1.0,
                    alpha_step: 0.5,
                },
                Orientation::Epi,
            )
            .unwrap();
        let pts: Vec<Vec<f64>> = cloud.iter_points().map(|p| p.to_vec()).collect();
        assert_eq!(pts, vec![vec![0.0, 0.0], vec![0.0, 0.5], vec![0.0, 1.0]]);
    }

    #[test]
    fn hypo_cloud_is_negated_epi_cloud() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 21), |x| x[0]).unwrap();
        let neg = GriddedFunction::sample(line(-1.0, 1.0, 21), |x| -x[0]).unwrap();
        let params = EpiCloudParams {
            alpha_lo: -2.0,
            alpha_hi: 2.0,
            alpha_step: 0.25,
        };
        let hypo = g.epi_cloud(params, Orientation::Hypo).unwrap();
        let epi_neg = neg.epi_cloud(params, Orientation::Epi).unwrap();
        assert_eq!(hypo.len(), epi_neg.len());
        for (a, b) in hypo.iter_points().zip(epi_neg.iter_points()) {
            assert_eq!(a[0], b[0]);
            assert_eq!(a[1], -b[1]);
        }
    }

    #[test]
    fn lipschitz_modulus_of_affine_and_constant() {
        let aff = GriddedFunction::sample(line(-2.0, 2.0, 81), |x| 3.0 * x[0]).unwrap();
        assert!((aff.lipschitz_modulus(2.0).unwrap() - 3.0).abs() < 1e-9);
        let cst = GriddedFunction::sample(line(-2.0, 2.0, 81), |_| 7.0).unwrap();
        assert_eq!(cst.lipschitz_modulus(2.0).unwrap(), 0.0);
    }

    #[test]
    fn lipschitz_modulus_of_square_near_four() {
        let g = GriddedFunction::sample(line(-2.0, 2.0, 401), |x| x[0] * x[0]).unwrap();
        let m = g.lipschitz_modulus(2.0).unwrap();
        assert!(m <= 4.0 + 1e-12 && m > 4.0 - 0.02, "modulus {m}");
    }

    #[test]
    fn lipschitz_modulus_rejects_infinite_values_in_ball() {
        let g = GriddedFunction::sample(line(-2.0, 2.0, 11), |x| {
            if x[0] <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .unwrap();
        assert!(g.lipschitz_modulus(2.0).is_err());
    }

    #[test]
    fn index_of_roundtrips() {
        let grid = GridSpec::uniform_box(&[(-1.0, 1.0), (0.0, 2.0)], 0.5).unwrap();
        for idx in 0..grid.point_count() {
            let p = grid.point_vec(idx);
            assert_eq!(grid.index_of(&p).unwrap(), idx);
        }
        assert!(grid.index_of(&[0.26, 0.0]).is_err());
    }

    #[test]
    fn default_vertical_step_is_the_widest_spatial_step() {
        let grid = GridSpec::uniform_box(&[(-1.0, 1.0), (0.0, 4.0)], 0.5).unwrap();
        let params = EpiCloudParams::with_default_step(&grid, -1.0, 1.0);
        assert_eq!(params.alpha_step, grid.max_spacing());
    }

    #[test]
    fn infimum_matches_the_lowest_epigraph_sample() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 41), |x| x[0] * x[0] - 0.3).unwrap();
        let cloud = g
            .epi_cloud(
                EpiCloudParams {
                    alpha_lo: -2.0,
                    alpha_hi: 2.0,
                    alpha_step: 0.1,
                },
                Orientation::Epi,
            )
            .unwrap();
        let lowest = cloud
            .iter_points()
            .map(|p| p[1])
            .fold(f64::INFINITY, f64::min);
        let (inf, _) = g.infimum_argmin(0.0);
        assert_eq!(inf, ExtReal::Finite(lowest));
    }

    #[test]
    fn profile_of_identical_functions_has_zero_distances_and_no_rate() {
        let g = GriddedFunction::sample(line(-1.0, 1.0, 41), |x| x[0] * x[0]).unwrap();
        let seq: Vec<(u32, &GriddedFunction)> = vec![(1, &g), (2, &g), (4, &g)];
        let profile = epi_profile(
            &seq,
            &g,
            1.0,
            &NormSpec::epi(1),
            EpiCloudParams {
                alpha_lo: -2.0,
                alpha_hi: 2.0,
                alpha_step: 0.05,
            },
            0.1,
        )
        .unwrap();
        assert!(profile.entries.iter().all(|&(_, d)| d == ExtReal::ZERO));
        assert!(profile.fitted_rate.is_none());
    }
}
