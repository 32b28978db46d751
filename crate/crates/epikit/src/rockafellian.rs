//! Parametric embeddings of optimization problems.
//!
//! A model here is a bivariate evaluator `(u, x) -> value` whose `u = 0`
//! slice recovers the objective being studied; the `u` axis carries the
//! perturbation. Builders cover the recurring problem families (composite
//! objectives, inequality systems, composite constraints, reweighted sums
//! over a probability simplex, and argument splitting), plus tilting by a
//! multiplier vector and augmentation by a function of the perturbation.
//!
//! Exactness of an embedding — whether its min-value function is minorized
//! by `inf phi + <y, u>` — and tightness of a sequence of embeddings are
//! probed numerically on caller-supplied grids; reports always state the
//! probed box, since a grid can only support or refute such properties on
//! the region it covers.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::cloud::PointCloud;
use crate::extreal::ExtReal;
use crate::grid::GridSpec;
use crate::norm::NormSpec;

/// Real-valued function of a vector argument.
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// Extended-real-valued function of a vector argument.
pub type ExtFn = Arc<dyn Fn(&[f64]) -> ExtReal + Send + Sync>;
/// Membership test for a constraint set.
pub type SetIndicator = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;
/// Custom bivariate evaluator `(u, x) -> value`.
pub type BivariateFn = Arc<dyn Fn(&[f64], &[f64]) -> ExtReal + Send + Sync>;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("multiplier has length {got}, perturbation dimension is {expected}")]
    MultiplierDimension { expected: usize, got: usize },
    #[error("weight vector is not in the probability simplex (sum {0})")]
    NotASimplexVector(f64),
    #[error("weights and component functions disagree in count")]
    ComponentCount,
    #[error("operation requires the {0} family")]
    WrongFamily(&'static str),
    #[error("probe set is empty")]
    EmptyProbe,
    #[error("baseline minimum value is -inf; exactness is undecidable")]
    Undecidable,
    #[error("baseline minimum value is not finite")]
    BaselineNotFinite,
    #[error("component {index} dips below -eta on the probe grid (min {min})")]
    EtaViolated { index: usize, min: f64 },
    #[error("sequence lengths disagree: {0} models, {1} multipliers, {2} anchor points")]
    SequenceLengths(usize, usize, usize),
    #[error("augmentation exponent must be positive, got {0}")]
    BadExponent(f64),
    #[error("augmentation weight must be nonnegative, got {0}")]
    BadWeight(f64),
}

/// Componentwise indicator of the nonpositive orthant.
#[inline]
pub fn indicator_nonpositive(z: &[f64]) -> ExtReal {
    if z.iter().all(|&c| c <= 0.0) {
        ExtReal::ZERO
    } else {
        ExtReal::PosInf
    }
}

/// Scalar times extended real with the convention `0 * (+-inf) = 0`, which
/// keeps zero-weight terms out of simplex-weighted sums.
#[inline]
fn scale(c: f64, v: ExtReal) -> ExtReal {
    if c == 0.0 {
        ExtReal::ZERO
    } else {
        match v {
            ExtReal::Finite(a) => ExtReal::new(c * a),
            inf => {
                if c > 0.0 {
                    inf
                } else {
                    -inf
                }
            }
        }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Stack scratch for low-dimensional argument vectors; evaluators run
/// millions of times per cloud build and must not touch the heap.
struct SmallBuf {
    data: [f64; 8],
    len: usize,
}

impl SmallBuf {
    #[inline]
    fn new(len: usize) -> SmallBuf {
        assert!(len <= 8, "argument blocks are limited to dimension 8");
        SmallBuf {
            data: [0.0; 8],
            len,
        }
    }

    #[inline]
    fn slice(&self) -> &[f64] {
        &self.data[..self.len]
    }

    #[inline]
    fn slice_mut(&mut self) -> &mut [f64] {
        &mut self.data[..self.len]
    }
}

/// Augmenting function of the perturbation, vanishing at zero.
#[derive(Clone)]
pub enum Augmentation {
    /// Indicator of `{0}`: infinite off the origin.
    IndicatorZero,
    /// `theta * |u|_2^2`.
    Prox { theta: f64 },
    /// `theta * |u|^alpha` in the given norm.
    Power {
        theta: f64,
        alpha: f64,
        norm: NormSpec,
    },
}

impl Augmentation {
    pub fn eval(&self, u: &[f64]) -> ExtReal {
        match self {
            Augmentation::IndicatorZero => {
                if u.iter().all(|&c| c.abs() <= 1e-12) {
                    ExtReal::ZERO
                } else {
                    ExtReal::PosInf
                }
            }
            Augmentation::Prox { theta } => {
                ExtReal::new(theta * u.iter().map(|c| c * c).sum::<f64>())
            }
            Augmentation::Power { theta, alpha, norm } => {
                ExtReal::new(theta * norm.eval_unchecked(u).powf(*alpha))
            }
        }
    }
}

impl fmt::Debug for Augmentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Augmentation::IndicatorZero => write!(f, "IndicatorZero"),
            Augmentation::Prox { theta } => write!(f, "Prox(theta={theta})"),
            Augmentation::Power { theta, alpha, .. } => {
                write!(f, "Power(theta={theta}, alpha={alpha})")
            }
        }
    }
}

pub struct CompositeParts {
    pub x_set: SetIndicator,
    pub g0: ScalarFn,
    /// Component functions of the inner mapping.
    pub g: Vec<ScalarFn>,
    pub h: ExtFn,
}

pub struct InequalityParts {
    pub g0: ExtFn,
    pub gs: Vec<ExtFn>,
}

pub struct ConstraintCompositeParts {
    pub g0: ExtFn,
    pub g: Vec<ScalarFn>,
    pub h: ExtFn,
}

pub struct AmbiguityParts {
    pub g0: ExtFn,
    pub gs: Vec<ExtFn>,
    pub p: Vec<f64>,
    pub theta: f64,
}

pub struct SplittingParts {
    pub gs: Vec<ExtFn>,
    pub p: Vec<f64>,
}

/// Which construction produced a model; carries the family data needed by
/// closed-form formulas.
pub enum Family {
    Composite(CompositeParts),
    Inequality(InequalityParts),
    ConstraintComposite(ConstraintCompositeParts),
    Ambiguity(AmbiguityParts),
    Splitting(SplittingParts),
    Tilted {
        base: Arc<RockafellianModel>,
        y: Vec<f64>,
    },
    Augmented {
        base: Arc<RockafellianModel>,
        augmentation: Augmentation,
    },
    Custom(BivariateFn),
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Composite(_) => "Composite",
            Family::Inequality(_) => "Inequality",
            Family::ConstraintComposite(_) => "ConstraintComposite",
            Family::Ambiguity(_) => "Ambiguity",
            Family::Splitting(_) => "Splitting",
            Family::Tilted { .. } => "Tilted",
            Family::Augmented { .. } => "Augmented",
            Family::Custom(_) => "Custom",
        };
        write!(f, "{name}")
    }
}

/// A bivariate evaluator `(u, x) -> value` with `eval(0, x)` equal to the
/// embedded objective at every `x`.
///
/// Models are immutable and cheap to clone (family data is shared); they
/// evaluate concurrently without synchronization.
#[derive(Clone, Debug)]
pub struct RockafellianModel {
    m: usize,
    n: usize,
    family: Arc<Family>,
}

impl RockafellianModel {
    pub fn custom(m: usize, n: usize, eval: BivariateFn) -> RockafellianModel {
        RockafellianModel {
            m,
            n,
            family: Arc::new(Family::Custom(eval)),
        }
    }

    /// `eval(u, x) = i_X(x) + g0(x) + h(G(x) + u)` where `G` has the given
    /// component functions.
    pub fn composite(
        n: usize,
        x_set: SetIndicator,
        g0: ScalarFn,
        g: Vec<ScalarFn>,
        h: ExtFn,
    ) -> RockafellianModel {
        let m = g.len();
        RockafellianModel {
            m,
            n,
            family: Arc::new(Family::Composite(CompositeParts { x_set, g0, g, h })),
        }
    }

    /// Inequality system `g0(x) + sum_i i_(-inf,0]( g_i(x) )` perturbed by
    /// argument shifts `v_i` and constraint offsets `w_i`:
    ///
    /// `eval(u, x) = g0(x + v_0) + sum_i i_(-inf,0]( g_i(x + v_i) + w_i )`
    ///
    /// with `u = (v_0, .., v_m, w_1, .., w_m)` of dimension `n(m+1) + m`.
    pub fn inequality(n: usize, g0: ExtFn, gs: Vec<ExtFn>) -> RockafellianModel {
        let m_constraints = gs.len();
        RockafellianModel {
            m: n * (m_constraints + 1) + m_constraints,
            n,
            family: Arc::new(Family::Inequality(InequalityParts { g0, gs })),
        }
    }

    /// Composite structure inside the constraint, perturbed by `u = (v, w)`:
    /// `eval(u, x) = g0(x) + i_(-inf,0]( h(G(x) + v) + w )`.
    pub fn constraint_composite(
        n: usize,
        g0: ExtFn,
        g: Vec<ScalarFn>,
        h: ExtFn,
    ) -> RockafellianModel {
        let m_inner = g.len();
        RockafellianModel {
            m: m_inner + 1,
            n,
            family: Arc::new(Family::ConstraintComposite(ConstraintCompositeParts {
                g0,
                g,
                h,
            })),
        }
    }

    /// Reweighted sum over the probability simplex with a proximal term:
    ///
    /// `eval(u, x) = g0(x) + sum_i (p_i + u_i) g_i(x) + (theta/2)|u|_2^2
    ///             + i_(-inf,0]^m(u) + i_[0,inf)^m(p + u)`.
    ///
    /// The weights must lie in the simplex within `1e-12`; they are
    /// renormalized to sum exactly to one.
    pub fn ambiguity(
        n: usize,
        g0: ExtFn,
        gs: Vec<ExtFn>,
        p: Vec<f64>,
        theta: f64,
    ) -> Result<RockafellianModel, ModelError> {
        if p.len() != gs.len() {
            return Err(ModelError::ComponentCount);
        }
        let p = normalize_simplex(p)?;
        let m = gs.len();
        Ok(RockafellianModel {
            m,
            n,
            family: Arc::new(Family::Ambiguity(AmbiguityParts { g0, gs, p, theta })),
        })
    }

    /// Argument splitting `eval(u, x) = sum_i p_i g_i(x + u_i)` with one
    /// shift block `u_i` in `R^n` per component.
    pub fn splitting(
        n: usize,
        gs: Vec<ExtFn>,
        p: Vec<f64>,
    ) -> Result<RockafellianModel, ModelError> {
        if p.len() != gs.len() {
            return Err(ModelError::ComponentCount);
        }
        let p = normalize_simplex(p)?;
        let m = gs.len();
        Ok(RockafellianModel {
            m: n * m,
            n,
            family: Arc::new(Family::Splitting(SplittingParts { gs, p })),
        })
    }

    /// Subtracts the linear term `<y, u>`.
    pub fn tilt(&self, y: Vec<f64>) -> Result<RockafellianModel, ModelError> {
        if y.len() != self.m {
            return Err(ModelError::MultiplierDimension {
                expected: self.m,
                got: y.len(),
            });
        }
        Ok(RockafellianModel {
            m: self.m,
            n: self.n,
            family: Arc::new(Family::Tilted {
                base: Arc::new(self.clone()),
                y,
            }),
        })
    }

    /// Adds an augmenting function of the perturbation. Since every
    /// augmentation vanishes at zero, the embedded objective is unchanged.
    pub fn augment(&self, augmentation: Augmentation) -> Result<RockafellianModel, ModelError> {
        match &augmentation {
            Augmentation::Prox { theta } if *theta < 0.0 => {
                return Err(ModelError::BadWeight(*theta))
            }
            Augmentation::Power { theta, alpha, .. } => {
                if *theta < 0.0 {
                    return Err(ModelError::BadWeight(*theta));
                }
                if *alpha <= 0.0 {
                    return Err(ModelError::BadExponent(*alpha));
                }
            }
            _ => {}
        }
        Ok(RockafellianModel {
            m: self.m,
            n: self.n,
            family: Arc::new(Family::Augmented {
                base: Arc::new(self.clone()),
                augmentation,
            }),
        })
    }

    /// Perturbation dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Decision dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn eval(&self, u: &[f64], x: &[f64]) -> ExtReal {
        debug_assert_eq!(u.len(), self.m);
        debug_assert_eq!(x.len(), self.n);
        match &*self.family {
            Family::Custom(f) => f(u, x),
            Family::Tilted { base, y } => base.eval(u, x) - ExtReal::new(dot(y, u)),
            Family::Augmented { base, augmentation } => base.eval(u, x) + augmentation.eval(u),
            Family::Composite(parts) => {
                if !(parts.x_set)(x) {
                    return ExtReal::PosInf;
                }
                let mut z = SmallBuf::new(parts.g.len());
                for (gi, (ui, slot)) in parts.g.iter().zip(u.iter().zip(z.slice_mut())) {
                    *slot = gi(x) + ui;
                }
                ExtReal::new((parts.g0)(x)) + (parts.h)(z.slice())
            }
            Family::Inequality(parts) => {
                let n = self.n;
                let mcons = parts.gs.len();
                let mut shifted = SmallBuf::new(n);
                for (k, s) in shifted.slice_mut().iter_mut().enumerate() {
                    *s = x[k] + u[k];
                }
                let mut val = (parts.g0)(shifted.slice());
                for (i, gi) in parts.gs.iter().enumerate() {
                    let v_off = n * (i + 1);
                    for (k, s) in shifted.slice_mut().iter_mut().enumerate() {
                        *s = x[k] + u[v_off + k];
                    }
                    let w_i = u[n * (mcons + 1) + i];
                    let slackd = gi(shifted.slice()) + ExtReal::new(w_i);
                    val = val
                        + if slackd <= ExtReal::ZERO {
                            ExtReal::ZERO
                        } else {
                            ExtReal::PosInf
                        };
                }
                val
            }
            Family::ConstraintComposite(parts) => {
                let m_inner = parts.g.len();
                let mut z = SmallBuf::new(m_inner);
                for (gi, (vi, slot)) in parts.g.iter().zip(u[..m_inner].iter().zip(z.slice_mut())) {
                    *slot = gi(x) + vi;
                }
                let inner = (parts.h)(z.slice()) + ExtReal::new(u[m_inner]);
                (parts.g0)(x)
                    + if inner <= ExtReal::ZERO {
                        ExtReal::ZERO
                    } else {
                        ExtReal::PosInf
                    }
            }
            Family::Ambiguity(parts) => {
                // A hair of slack absorbs float dust on probe grids whose
                // nodes only approximate 0 or -p_i.
                if u.iter().any(|&ui| ui > 1e-12) {
                    return ExtReal::PosInf;
                }
                if parts.p.iter().zip(u).any(|(&pi, &ui)| pi + ui < -1e-12) {
                    return ExtReal::PosInf;
                }
                let mut val = (parts.g0)(x);
                for (i, gi) in parts.gs.iter().enumerate() {
                    val = val + scale(parts.p[i] + u[i], gi(x));
                }
                val + ExtReal::new(0.5 * parts.theta * u.iter().map(|c| c * c).sum::<f64>())
            }
            Family::Splitting(parts) => {
                let n = self.n;
                let mut val = ExtReal::ZERO;
                let mut shifted = SmallBuf::new(n);
                for (i, gi) in parts.gs.iter().enumerate() {
                    for (k, s) in shifted.slice_mut().iter_mut().enumerate() {
                        *s = x[k] + u[i * n + k];
                    }
                    val = val + scale(parts.p[i], gi(shifted.slice()));
                }
                val
            }
        }
    }

    /// The embedded objective: the `u = 0` slice.
    pub fn objective(&self, x: &[f64]) -> ExtReal {
        self.eval(&vec![0.0; self.m], x)
    }

    /// Minimum of `eval(u, .)` over the probe points, for each probe `u`.
    pub fn min_value_function(&self, u_probe: &PointCloud, x_probe: &PointCloud) -> Vec<ExtReal> {
        (0..u_probe.len())
            .into_par_iter()
            .map(|i| self.inf_over_x(u_probe.point(i), x_probe))
            .collect()
    }

    pub fn inf_over_x(&self, u: &[f64], x_probe: &PointCloud) -> ExtReal {
        let mut best = ExtReal::PosInf;
        for x in x_probe.iter_points() {
            let v = self.eval(u, x);
            if v < best {
                best = v;
            }
        }
        best
    }

    /// Samples the epigraph `{(u, x, alpha) : eval(u, x) <= alpha}` over a
    /// product probe grid, with the same vertical sampling convention as
    /// [`crate::grid::GriddedFunction::epi_cloud`].
    pub fn epi_cloud(
        &self,
        u_grid: &GridSpec,
        x_grid: &GridSpec,
        params: crate::grid::EpiCloudParams,
    ) -> PointCloud {
        let mu = u_grid.point_count();
        let nx = x_grid.point_count();
        let dim = self.m + self.n + 1;
        let fuzz = 1e-9 * params.alpha_step;
        let mut data = Vec::new();
        let mut p = vec![0.0; dim];
        for ui in 0..mu {
            u_grid.point_of(ui, &mut p[..self.m]);
            for xi in 0..nx {
                x_grid.point_of(xi, &mut p[self.m..self.m + self.n]);
                let v = self.eval(&p[..self.m], &p[self.m..self.m + self.n]);
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
                let mut k = 0usize;
                loop {
                    let alpha = base + k as f64 * params.alpha_step;
                    if alpha > params.alpha_hi + fuzz {
                        break;
                    }
                    p[dim - 1] = alpha;
                    data.extend_from_slice(&p);
                    k += 1;
                }
            }
        }
        PointCloud::from_flat(dim, data, "epi-bivariate").expect("finite samples")
    }
}

fn normalize_simplex(mut p: Vec<f64>) -> Result<Vec<f64>, ModelError> {
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&w| w < -1e-12) || (sum - 1.0).abs() > 1e-12 {
        return Err(ModelError::NotASimplexVector(sum));
    }
    for w in &mut p {
        *w = (*w).max(0.0) / sum;
    }
    Ok(p)
}

/// Result of a minimization of the tilted model over a `u` grid at fixed
/// `x`: the minimum, the innermost minimizer, and whether even that
/// minimizer sits on the probe-box edge (a truncation-artifact signal).
#[derive(Clone, Debug)]
pub struct TiltedUScan {
    pub value: ExtReal,
    pub argmin: Option<Vec<f64>>,
    pub on_boundary: bool,
    /// Max-coordinate norm of the selected minimizer.
    pub argmin_radius: f64,
}

/// Scans `u -> eval(u, x) - <y, u>` over a grid, keeping the minimizer of
/// smallest max-coordinate norm among exact ties.
pub fn scan_tilted_u(
    f: &RockafellianModel,
    x: &[f64],
    y: &[f64],
    u_grid: &GridSpec,
) -> TiltedUScan {
    let m = f.m();
    let mut u = vec![0.0; m];
    let mut best = ExtReal::PosInf;
    let mut best_u: Option<Vec<f64>> = None;
    let mut best_radius = f64::INFINITY;
    let mut best_idx = 0usize;
    for idx in 0..u_grid.point_count() {
        u_grid.point_of(idx, &mut u);
        let v = f.eval(&u, x) - ExtReal::new(dot(y, &u));
        if v < best {
            best = v;
            best_radius = cheb(&u);
            best_u = Some(u.clone());
            best_idx = idx;
        } else if v == best && best < ExtReal::PosInf {
            let r = cheb(&u);
            if r < best_radius {
                best_radius = r;
                best_u = Some(u.clone());
                best_idx = idx;
            }
        }
    }
    let on_boundary = match &best_u {
        None => false,
        Some(_) => index_on_edge(u_grid, best_idx),
    };
    TiltedUScan {
        value: best,
        argmin: best_u,
        on_boundary,
        argmin_radius: if best_radius.is_finite() {
            best_radius
        } else {
            0.0
        },
    }
}

fn cheb(u: &[f64]) -> f64 {
    u.iter().map(|c| c.abs()).fold(0.0, f64::max)
}

fn index_on_edge(grid: &GridSpec, mut idx: usize) -> bool {
    for k in (0..grid.dim()).rev() {
        let steps = grid.axes()[k].steps;
        let i = idx % steps;
        if i == 0 || i + 1 == steps {
            return true;
        }
        idx /= steps;
    }
    false
}

/// Tolerances for the exactness probe.
#[derive(Clone, Copy, Debug)]
pub struct ExactnessParams {
    /// Slack below `-tol` refutes exactness on the probed box.
    pub tol: f64,
    /// Strictness requires slack above this margin at every probed `u != 0`.
    pub strict_margin: f64,
}

impl ExactnessParams {
    /// `tol = 1e-9 + 2 * grid_inf_error`, the grid error being the caller's
    /// estimate of how far a grid scan can overshoot the true minimum.
    pub fn from_grid_error(grid_inf_error: f64) -> ExactnessParams {
        ExactnessParams {
            tol: 1e-9 + 2.0 * grid_inf_error,
            strict_margin: 1e-6,
        }
    }
}

/// Outcome of an exactness probe over a `u` box.
#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub supported_by: Vec<f64>,
    /// `min over probed u of [ inf_x f(u, x) - inf phi - <y, u> ]`.
    pub min_slack: ExtReal,
    pub exact: bool,
    pub strict: bool,
    pub tol: f64,
    /// Probe description: counts and the u-box, so the report states what
    /// region the verdict covers.
    pub probe_note: String,
    pub baseline: f64,
}

/// Probes the exactness inequality `inf_x f(u, x) >= inf phi + <y, u>` on
/// the given grids.
pub fn check_exactness(
    f: &RockafellianModel,
    y: &[f64],
    u_probe: &PointCloud,
    x_probe: &PointCloud,
    params: ExactnessParams,
) -> Result<ExactnessReport, ModelError> {
    if y.len() != f.m() {
        return Err(ModelError::MultiplierDimension {
            expected: f.m(),
            got: y.len(),
        });
    }
    if u_probe.is_empty() || x_probe.is_empty() {
        return Err(ModelError::EmptyProbe);
    }
    let baseline = f.inf_over_x(&vec![0.0; f.m()], x_probe);
    let baseline = match baseline {
        ExtReal::NegInf => return Err(ModelError::Undecidable),
        ExtReal::PosInf => return Err(ModelError::BaselineNotFinite),
        ExtReal::Finite(v) => v,
    };
    let slacks: Vec<(ExtReal, bool)> = (0..u_probe.len())
        .into_par_iter()
        .map(|i| {
            let u = u_probe.point(i);
            let slack = f.inf_over_x(u, x_probe) - ExtReal::new(baseline) - ExtReal::new(dot(y, u));
            let is_zero = u.iter().all(|&c| c == 0.0);
            (slack, is_zero)
        })
        .collect();
    let min_slack = slacks
        .iter()
        .map(|&(s, _)| s)
        .min()
        .unwrap_or(ExtReal::PosInf);
    let exact = min_slack >= ExtReal::new(-params.tol);
    let strict = exact
        && slacks
            .iter()
            .filter(|&&(_, is_zero)| !is_zero)
            .all(|&(s, _)| s > ExtReal::new(params.strict_margin));
    Ok(ExactnessReport {
        supported_by: y.to_vec(),
        min_slack,
        exact,
        strict,
        tol: params.tol,
        probe_note: format!(
            "u probes: {} points in dim {}, x probes: {} points",
            u_probe.len(),
            u_probe.dim(),
            x_probe.len()
        ),
        baseline,
    })
}

/// Support vector for the reweighted-simplex family, taken from the
/// constructive argument behind its exactness: coordinates with positive
/// weight get `(2 delta(0) + 4 eta) / alpha + margin` where `alpha` is the
/// smallest positive weight, zero-weight coordinates get the margin alone.
pub fn ambiguity_support_vector(
    model: &RockafellianModel,
    eta: f64,
    x_probe: &PointCloud,
) -> Result<Vec<f64>, ModelError> {
    const MARGIN: f64 = 1e-6;
    let Family::Ambiguity(parts) = model.family() else {
        return Err(ModelError::WrongFamily("ambiguity"));
    };
    if x_probe.is_empty() {
        return Err(ModelError::EmptyProbe);
    }
    for (i, gi) in parts.gs.iter().enumerate() {
        let min = x_probe
            .iter_points()
            .map(|x| gi(x))
            .min()
            .unwrap_or(ExtReal::PosInf);
        if min < ExtReal::new(-eta) {
            return Err(ModelError::EtaViolated {
                index: i,
                min: min.to_f64(),
            });
        }
    }
    let delta0 = model.inf_over_x(&vec![0.0; model.m()], x_probe);
    let Some(delta0) = delta0.finite() else {
        return Err(ModelError::BaselineNotFinite);
    };
    let alpha = parts
        .p
        .iter()
        .copied()
        .filter(|&w| w > 0.0)
        .fold(f64::INFINITY, f64::min);
    let level = (2.0 * delta0 + 4.0 * eta) / alpha;
    Ok(parts
        .p
        .iter()
        .map(|&w| if w > 0.0 { level + MARGIN } else { MARGIN })
        .collect())
}

/// How a tightness diagnostic decides.
#[derive(Clone, Debug)]
pub enum TightnessMode {
    /// Locate the innermost minimizer of each tilted slice over the probe
    /// box; pass when all stay at least `margin` inside the box edge.
    Empirical { margin: f64 },
    /// Verify certificate constants: a concave lower bound
    /// `f(u, x) >= gamma - beta |u|_2^2` on the probe grid, a witness of
    /// small norm and value, and `beta` strictly inside `(0, theta)` for the
    /// proximal weight `theta` the certificate is meant to offset.
    Certificate {
        gamma: f64,
        beta: f64,
        tau: f64,
        theta: f64,
    },
}

#[derive(Clone, Debug)]
pub struct TightnessEntry {
    pub index: usize,
    /// Max-coordinate norm of the located minimizer (empirical mode).
    pub argmin_radius: Option<f64>,
    pub slice_inf: ExtReal,
    pub ok: bool,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct TightnessReport {
    pub pass: bool,
    pub box_radius: f64,
    pub entries: Vec<TightnessEntry>,
}

/// Diagnoses tightness of the sequence `f_nu` tilted by `y_nu` along anchor
/// points `x_nu`, over one shared `u` probe box.
pub fn tightness_diagnostic(
    models: &[RockafellianModel],
    y_seq: &[Vec<f64>],
    x_seq: &[Vec<f64>],
    u_grid: &GridSpec,
    mode: &TightnessMode,
) -> Result<TightnessReport, ModelError> {
    if models.len() != y_seq.len() || models.len() != x_seq.len() {
        return Err(ModelError::SequenceLengths(
            models.len(),
            y_seq.len(),
            x_seq.len(),
        ));
    }
    let box_radius = u_grid
        .axes()
        .iter()
        .map(|a| a.lo.abs().max(a.hi.abs()))
        .fold(0.0f64, f64::max);

    let mut entries = Vec::with_capacity(models.len());
    let mut pass = true;
    for (k, f) in models.iter().enumerate() {
        let entry = match mode {
            TightnessMode::Empirical { margin } => {
                let scan = scan_tilted_u(f, &x_seq[k], &y_seq[k], u_grid);
                match scan.value {
                    ExtReal::PosInf => TightnessEntry {
                        index: k,
                        argmin_radius: None,
                        slice_inf: scan.value,
                        ok: true,
                        note: "slice identically +inf; tight trivially".into(),
                    },
                    _ => {
                        let ok = scan.argmin_radius <= box_radius - margin && !scan.on_boundary;
                        TightnessEntry {
                            index: k,
                            argmin_radius: Some(scan.argmin_radius),
                            slice_inf: scan.value,
                            ok,
                            note: if ok {
                                "minimizer interior".into()
                            } else {
                                "minimizer at or near probe-box edge".into()
                            },
                        }
                    }
                }
            }
            TightnessMode::Certificate {
                gamma,
                beta,
                tau,
                theta,
            } => {
                if !(*beta > 0.0 && beta < theta) {
                    TightnessEntry {
                        index: k,
                        argmin_radius: None,
                        slice_inf: ExtReal::PosInf,
                        ok: false,
                        note: format!("beta {beta} outside (0, theta={theta})"),
                    }
                } else {
                    let x = &x_seq[k];
                    let mut u = vec![0.0; f.m()];
                    let mut slice_inf = ExtReal::PosInf;
                    for idx in 0..u_grid.point_count() {
                        u_grid.point_of(idx, &mut u);
                        let v = f.eval(&u, x);
                        if v < slice_inf {
                            slice_inf = v;
                        }
                    }
                    if slice_inf == ExtReal::PosInf {
                        TightnessEntry {
                            index: k,
                            argmin_radius: None,
                            slice_inf,
                            ok: true,
                            note: "slice identically +inf; tight trivially".into(),
                        }
                    } else {
                        let mut lower_ok = true;
                        let mut witness_ok = false;
                        for idx in 0..u_grid.point_count() {
                            u_grid.point_of(idx, &mut u);
                            let r2: f64 = u.iter().map(|c| c * c).sum();
                            let v = f.eval(&u, x);
                            if v < ExtReal::new(gamma - beta * r2) {
                                lower_ok = false;
                                break;
                            }
                            if r2.sqrt() <= *tau && v <= ExtReal::new(*tau) {
                                witness_ok = true;
                            }
                        }
                        let ok = lower_ok && witness_ok;
                        TightnessEntry {
                            index: k,
                            argmin_radius: None,
                            slice_inf,
                            ok,
                            note: match (lower_ok, witness_ok) {
                                (true, true) => "certificate verified".into(),
                                (false, _) => "lower bound refuted on grid".into(),
                                (_, false) => "no witness of norm and value <= tau".into(),
                            },
                        }
                    }
                }
            }
        };
        pass &= entry.ok;
        entries.push(entry);
    }
    Ok(TightnessReport {
        pass,
        box_radius,
        entries,
    })
}
