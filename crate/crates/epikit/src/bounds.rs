//! Two-sided evaluation of the quantitative stability inequalities.
//!
//! Each `bound_*` operation computes the left side (a truncated Hausdorff
//! distance between derived sets of a concrete instance) and the right side
//! (the combination of ingredient distances the corresponding inequality
//! promises), checks the inequality's side conditions, and reports the
//! outcome. Radii marked "provided that" in an inequality are always set to
//! their minimal admissible values computed from the instance, and every
//! ingredient entering the right side is recorded.
//!
//! A report never fails silently: when a side condition cannot be met on
//! the probed grids the status is `Inapplicable` with the reason, and the
//! caller's tolerance (derived from grid steps) is recorded next to the
//! slack so discretization error is visible, never absorbed.

use std::fmt;

use thiserror::Error;

use crate::cloud::{truncated_hausdorff, CloudError, PointCloud};
use crate::extreal::ExtReal;
use crate::grid::{EpiCloudParams, GridError, GridSpec, GriddedFunction, Orientation};
use crate::lagrangian::{dual_numeric, DualFunction, LagrangianError, NumericInf};
use crate::norm::{InnerNorm, NormSpec};
use crate::rockafellian::{Augmentation, Family, ModelError, RockafellianModel};

/// Proxy for `-inf` when reading tabulated dual values: entries at or below
/// `-HUGE` are treated as outside the effective domain.
pub const HUGE: f64 = 1e12;

#[derive(Debug, Error)]
pub enum BoundError {
    #[error(transparent)]
    Cloud(#[from] CloudError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lagrangian(#[from] LagrangianError),
    #[error("instance models must come from the {0} family")]
    WrongFamily(&'static str),
    #[error("component tables must share one grid")]
    TableGridMismatch,
}

/// Which inequality a report evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremId {
    MinValueApproximation,
    TiltedEmbeddings,
    CompositeDistance,
    InequalityFamily,
    ConstraintCompositeFamily,
    AmbiguityDistance,
    SplittingDistance,
    AugmentationDistance,
    LagrangianErrorBound,
    DualErrorBoundA,
    DualErrorBoundB,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::MinValueApproximation,
        TheoremId::TiltedEmbeddings,
        TheoremId::CompositeDistance,
        TheoremId::InequalityFamily,
        TheoremId::ConstraintCompositeFamily,
        TheoremId::AmbiguityDistance,
        TheoremId::SplittingDistance,
        TheoremId::AugmentationDistance,
        TheoremId::LagrangianErrorBound,
        TheoremId::DualErrorBoundA,
        TheoremId::DualErrorBoundB,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::MinValueApproximation => "bound.minval",
            TheoremId::TiltedEmbeddings => "bound.tilted",
            TheoremId::CompositeDistance => "bound.composite",
            TheoremId::InequalityFamily => "bound.inequality",
            TheoremId::ConstraintCompositeFamily => "bound.constraint-composite",
            TheoremId::AmbiguityDistance => "bound.ambiguity",
            TheoremId::SplittingDistance => "bound.splitting",
            TheoremId::AugmentationDistance => "bound.augmentation",
            TheoremId::LagrangianErrorBound => "bound.lagrangian",
            TheoremId::DualErrorBoundA => "bound.dual-a",
            TheoremId::DualErrorBoundB => "bound.dual-b",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    Pass,
    Fail,
    Inapplicable(String),
}

impl BoundStatus {
    pub fn as_str(&self) -> &str {
        match self {
            BoundStatus::Pass => "PASS",
            BoundStatus::Fail => "FAIL",
            BoundStatus::Inapplicable(_) => "INAPPLICABLE",
        }
    }
}

/// The radii a bound used, with the side conditions they had to satisfy.
#[derive(Clone, Debug, Default)]
pub struct RadiusBudget {
    pub rho: f64,
    pub rho_bar: Option<f64>,
    pub rho_prime: Option<f64>,
    pub rho_hat: Option<f64>,
    /// All side conditions admissible. False only on inapplicable reports.
    pub admissible: bool,
    pub notes: Vec<String>,
}

impl RadiusBudget {
    fn new(rho: f64) -> RadiusBudget {
        RadiusBudget {
            rho,
            admissible: true,
            ..RadiusBudget::default()
        }
    }
}

/// Computed left and right sides of one inequality on one instance.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub lhs: ExtReal,
    pub rhs: ExtReal,
    pub tol: f64,
    pub status: BoundStatus,
    pub radii: RadiusBudget,
    /// Every distance and constant entering the right side.
    pub ingredients: Vec<(String, f64)>,
}

impl BoundReport {
    /// `rhs + tol - lhs`; negative means the inequality failed beyond
    /// tolerance.
    pub fn slack(&self) -> f64 {
        self.rhs.to_f64() + self.tol - self.lhs.to_f64()
    }

    fn decide(
        theorem: TheoremId,
        lhs: ExtReal,
        rhs: ExtReal,
        tol: f64,
        radii: RadiusBudget,
        ingredients: Vec<(String, f64)>,
    ) -> BoundReport {
        let status = if lhs <= rhs + ExtReal::new(tol) {
            BoundStatus::Pass
        } else {
            BoundStatus::Fail
        };
        BoundReport {
            theorem,
            lhs,
            rhs,
            tol,
            status,
            radii,
            ingredients,
        }
    }

    fn inapplicable(
        theorem: TheoremId,
        reason: impl Into<String>,
        mut radii: RadiusBudget,
    ) -> BoundReport {
        radii.admissible = false;
        BoundReport {
            theorem,
            lhs: ExtReal::ZERO,
            rhs: ExtReal::ZERO,
            tol: 0.0,
            status: BoundStatus::Inapplicable(reason.into()),
            radii,
            ingredients: Vec::new(),
        }
    }
}

/// Product norm `(x, alpha) -> max{ <x-norm>, |alpha| }` from a norm on the
/// base space.
pub fn with_alpha(norm_x: &NormSpec) -> NormSpec {
    let mut blocks = norm_x.blocks().to_vec();
    blocks.push((1, InnerNorm::Abs));
    NormSpec::new(blocks).expect("valid blocks")
}

/// Norm for epigraphs of the inequality family:
/// `max{ |v_0|_2, .., |v_m|_2, |w_1|, .., |w_m|, |x|_2, |alpha| }`.
pub fn inequality_epi_norm(n: usize, constraints: usize) -> NormSpec {
    let mut blocks = Vec::new();
    for _ in 0..=constraints {
        blocks.push((n, InnerNorm::L2));
    }
    for _ in 0..constraints {
        blocks.push((1, InnerNorm::Abs));
    }
    blocks.push((n, InnerNorm::L2));
    blocks.push((1, InnerNorm::Abs));
    NormSpec::new(blocks).expect("valid blocks")
}

/// Norm for epigraphs of the splitting family:
/// `max{ |u_1|_2, .., |u_m|_2, |x|_2, |alpha| }`.
pub fn splitting_epi_norm(n: usize, components: usize) -> NormSpec {
    let mut blocks = vec![(n, InnerNorm::L2); components + 1];
    blocks.push((1, InnerNorm::Abs));
    NormSpec::new(blocks).expect("valid blocks")
}

/// Norm for epigraphs of the reweighting family:
/// `max{ |u|_1, |x|_2, |alpha| }`.
pub fn ambiguity_epi_norm(m: usize, n: usize) -> NormSpec {
    NormSpec::new(vec![
        (m, InnerNorm::L1),
        (n, InnerNorm::L2),
        (1, InnerNorm::Abs),
    ])
    .expect("valid blocks")
}

/// Norm for epigraphs of the constraint-composite family:
/// `max{ |v|_2, |w|, |x|_2, |alpha| }`.
pub fn constraint_composite_epi_norm(m_inner: usize, n: usize) -> NormSpec {
    NormSpec::new(vec![
        (m_inner, InnerNorm::L2),
        (1, InnerNorm::Abs),
        (n, InnerNorm::L2),
        (1, InnerNorm::Abs),
    ])
    .expect("valid blocks")
}

/// Vertical sampling window for a cloud that must faithfully represent a
/// set out to `radius`: the build box extends one unit past the truncation
/// ball so excess targets exist beyond it.
pub fn alpha_window(radius: f64, alpha_step: f64) -> EpiCloudParams {
    EpiCloudParams {
        alpha_lo: -(radius + 1.0),
        alpha_hi: radius + 1.0,
        alpha_step,
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn l2_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

// ---------------------------------------------------------------------------
// Minimum-value / near-minimizer / level-set approximation error.
// ---------------------------------------------------------------------------

pub struct MinValInput<'a> {
    pub g: &'a GriddedFunction,
    pub h: &'a GriddedFunction,
    pub rho: f64,
    pub eps: f64,
    pub norm_x: NormSpec,
    pub alpha_step: f64,
    pub tol: f64,
}

/// Verifies the three estimates controlled by the epigraph distance: the
/// gap of minimum values, the excess of near-minimizers of `h` into
/// near-minimizers of `g` (at any `delta` exceeding `eps` plus twice the
/// distance), and the excess of level sets (at `delta` exceeding `eps` plus
/// the distance).
pub fn bound_minval(input: &MinValInput) -> Result<BoundReport, BoundError> {
    let MinValInput {
        g,
        h,
        rho,
        eps,
        norm_x,
        alpha_step,
        tol,
    } = input;
    let (rho, eps, tol) = (*rho, *eps, *tol);
    let mut radii = RadiusBudget::new(rho);
    let theorem = TheoremId::MinValueApproximation;

    let prod_norm = with_alpha(norm_x);
    let params = alpha_window(rho, *alpha_step);
    let epi_g = g.epi_cloud(params, Orientation::Epi)?;
    let epi_h = h.epi_cloud(params, Orientation::Epi)?;
    let dl = truncated_hausdorff(&epi_g, &epi_h, rho, &prod_norm)?;
    let ExtReal::Finite(dl) = dl else {
        return Ok(BoundReport::inapplicable(
            theorem,
            "epigraph distance is infinite",
            radii,
        ));
    };

    if !(0.0..=2.0 * rho).contains(&eps) || eps.abs() > rho {
        return Ok(BoundReport::inapplicable(
            theorem,
            format!("eps {eps} outside the admissible windows"),
            radii,
        ));
    }

    let (inf_g, argmin_g) = g.infimum_argmin(0.0);
    let (inf_h, argmin_h) = h.infimum_argmin(0.0);
    let (Some(inf_g), Some(inf_h)) = (inf_g.finite(), inf_h.finite()) else {
        return Ok(BoundReport::inapplicable(
            theorem,
            "a minimum value is not finite",
            radii,
        ));
    };
    for (name, v) in [("inf g", inf_g), ("inf h", inf_h)] {
        if v < -rho || v > rho - eps {
            return Ok(BoundReport::inapplicable(
                theorem,
                format!("{name} = {v} outside [-rho, rho - eps]"),
                radii,
            ));
        }
    }
    let g_anchored = !argmin_g.indices_within(norm_x, rho).is_empty();
    let h_anchored = !argmin_h.indices_within(norm_x, rho).is_empty();
    if !g_anchored || !h_anchored {
        return Ok(BoundReport::inapplicable(
            theorem,
            "a minimizer set misses the truncation ball",
            radii,
        ));
    }

    // Minimal admissible deltas, opened up by the caller's tolerance so the
    // strict inequalities hold beyond grid noise.
    let delta_margin = tol.max(1e-9);
    let delta_a = eps + 2.0 * dl + delta_margin;
    let delta_b = eps + dl + delta_margin;
    radii.notes.push(format!(
        "delta(argmin) = {delta_a}, delta(level) = {delta_b}"
    ));

    let (_, near_h) = h.infimum_argmin(eps);
    let (_, near_g_delta) = g.infimum_argmin(delta_a);
    let near_h_in_ball = restrict_to_ball(&near_h, norm_x, rho);
    let exs_argmin = crate::cloud::excess(&near_h_in_ball, &near_g_delta, norm_x)?;

    let level_h = restrict_to_ball(&h.level_set(eps), norm_x, rho);
    let level_g = g.level_set(delta_b);
    let exs_level = crate::cloud::excess(&level_h, &level_g, norm_x)?;

    let lhs = ExtReal::new((inf_g - inf_h).abs())
        .max(exs_argmin)
        .max(exs_level);
    let ingredients = vec![
        ("dl(epi g, epi h)".to_string(), dl),
        ("|inf g - inf h|".to_string(), (inf_g - inf_h).abs()),
        ("exs(near-argmin)".to_string(), exs_argmin.to_f64()),
        ("exs(level-sets)".to_string(), exs_level.to_f64()),
        ("eps".to_string(), eps),
    ];
    Ok(BoundReport::decide(
        theorem,
        lhs,
        ExtReal::new(dl),
        tol,
        radii,
        ingredients,
    ))
}

fn restrict_to_ball(cloud: &PointCloud, norm: &NormSpec, rho: f64) -> PointCloud {
    let keep = cloud.indices_within(norm, rho);
    let mut data = Vec::with_capacity(keep.len() * cloud.dim());
    for i in keep {
        data.extend_from_slice(cloud.point(i));
    }
    PointCloud::from_flat(cloud.dim(), data, cloud.tag()).expect("finite points")
}

// ---------------------------------------------------------------------------
// Tilted embeddings.
// ---------------------------------------------------------------------------

pub struct TiltedInput<'a> {
    pub f: &'a RockafellianModel,
    pub f_nu: &'a RockafellianModel,
    pub y: Vec<f64>,
    pub y_nu: Vec<f64>,
    pub rho: f64,
    pub u_grid: &'a GridSpec,
    pub x_grid: &'a GridSpec,
    pub alpha_step: f64,
    pub tol: f64,
}

/// Distance between tilted epigraphs against the untilted distance at the
/// enlarged radius plus the multiplier gap:
///
/// `dl_rho(epi f_y, epi f_y') <= (1 + max norm y) dl_rhobar(epi f, epi f')
///                               + rho |y - y'|_2`
///
/// with `rhobar = rho (1 + max norm y)`.
pub fn bound_tilted(input: &TiltedInput) -> Result<BoundReport, BoundError> {
    let theorem = TheoremId::TiltedEmbeddings;
    let rho = input.rho;
    let mut radii = RadiusBudget::new(rho);
    let y_max = l2(&input.y).max(l2(&input.y_nu));
    let rho_bar = rho * (1.0 + y_max);
    radii.rho_bar = Some(rho_bar);

    let norm = NormSpec::epi_bivariate(input.f.m(), input.f.n());
    let base = alpha_window(rho_bar, input.alpha_step);
    let epi_f = input.f.epi_cloud(input.u_grid, input.x_grid, base);
    let epi_f_nu = input.f_nu.epi_cloud(input.u_grid, input.x_grid, base);
    if epi_f.is_empty() || epi_f_nu.is_empty() {
        return Ok(BoundReport::inapplicable(
            theorem,
            "an epigraph cloud is empty",
            radii,
        ));
    }
    let dl_bar = truncated_hausdorff(&epi_f, &epi_f_nu, rho_bar, &norm)?;

    let tilted = input.f.tilt(input.y.clone())?;
    let tilted_nu = input.f_nu.tilt(input.y_nu.clone())?;
    let tilt_params = alpha_window(rho, input.alpha_step);
    let epi_ty = tilted.epi_cloud(input.u_grid, input.x_grid, tilt_params);
    let epi_ty_nu = tilted_nu.epi_cloud(input.u_grid, input.x_grid, tilt_params);
    let lhs = truncated_hausdorff(&epi_ty, &epi_ty_nu, rho, &norm)?;

    let y_gap = l2_diff(&input.y, &input.y_nu);
    let rhs = ExtReal::new(1.0 + y_max) * dl_bar + ExtReal::new(rho * y_gap);
    let ingredients = vec![
        ("dl_rhobar(epi f, epi f')".into(), dl_bar.to_f64()),
        ("1 + max|y|".into(), 1.0 + y_max),
        ("rho |y - y'|".into(), rho * y_gap),
    ];
    Ok(BoundReport::decide(
        theorem,
        lhs,
        rhs,
        input.tol,
        radii,
        ingredients,
    ))
}

// ---------------------------------------------------------------------------
// Composite objective family.
// ---------------------------------------------------------------------------

pub struct CompositeInput<'a> {
    pub f: &'a RockafellianModel,
    pub f_nu: &'a RockafellianModel,
    pub x_cloud: &'a PointCloud,
    pub x_nu_cloud: &'a PointCloud,
    /// Pairs `(g_i, g_i_nu)` for `i = 0, .., m` on one shared grid.
    pub g_pairs: Vec<(&'a GriddedFunction, &'a GriddedFunction)>,
    pub h: &'a GriddedFunction,
    pub h_nu: &'a GriddedFunction,
    pub u_grid: &'a GridSpec,
    pub x_grid: &'a GridSpec,
    pub alpha_step: f64,
    pub tol: f64,
}

/// Epigraph distance of composite embeddings against the component
/// discrepancies: constraint-set distance, outer-function epigraph
/// distance, and the sup gap of the scalar components.
pub fn bound_composite(input: &CompositeInput, rho: f64) -> Result<BoundReport, BoundError> {
    let theorem = TheoremId::CompositeDistance;
    let mut radii = RadiusBudget::new(rho);
    let m = input.f.m();

    if input.x_cloud.is_empty() || input.x_nu_cloud.is_empty() {
        return Ok(BoundReport::inapplicable(
            theorem,
            "a constraint-set cloud is empty",
            radii,
        ));
    }
    let norm_x = NormSpec::l2(input.f.n());
    let dl_x = truncated_hausdorff(input.x_cloud, input.x_nu_cloud, rho, &norm_x)?;
    let ExtReal::Finite(dl_x) = dl_x else {
        return Ok(BoundReport::inapplicable(
            theorem,
            "constraint-set distance is infinite",
            radii,
        ));
    };

    let rho_prime = rho + dl_x + 1e-6;
    radii.rho_prime = Some(rho_prime);
    let mut kappa = 0.0f64;
    for (a, b) in &input.g_pairs {
        kappa = kappa
            .max(a.lipschitz_modulus(rho_prime)?)
            .max(b.lipschitz_modulus(rho_prime)?);
    }

    let mut sup_g = 0.0f64;
    for (a, b) in &input.g_pairs {
        sup_g = sup_g.max(a.sup_abs_diff(b, rho)?);
    }

    let rho_bar = rho + sup_ball_composite(&input.g_pairs, rho)?;
    radii.rho_bar = Some(rho_bar);
    let h_norm = with_alpha(&NormSpec::l2(input.h.grid().dim()));
    let h_params = alpha_window(rho_bar, input.alpha_step);
    let epi_h = input.h.epi_cloud(h_params, Orientation::Epi)?;
    let epi_h_nu = input.h_nu.epi_cloud(h_params, Orientation::Epi)?;
    let dl_h = truncated_hausdorff(&epi_h, &epi_h_nu, rho_bar, &h_norm)?;

    let norm = NormSpec::epi_bivariate(m, input.f.n());
    let params = alpha_window(rho, input.alpha_step);
    let epi_f = input.f.epi_cloud(input.u_grid, input.x_grid, params);
    let epi_f_nu = input.f_nu.epi_cloud(input.u_grid, input.x_grid, params);
    let lhs = truncated_hausdorff(&epi_f, &epi_f_nu, rho, &norm)?;

    let sqrt_m = (m as f64).sqrt();
    let coeff = 1.0f64.max(sqrt_m * kappa);
    let rhs = ExtReal::new(coeff * dl_x) + dl_h + ExtReal::new(sqrt_m * sup_g);
    let ingredients = vec![
        ("dl(X, X')".into(), dl_x),
        ("kappa(rho')".into(), kappa),
        ("max{1, sqrt(m) kappa}".into(), coeff),
        ("dl_rhobar(epi h, epi h')".into(), dl_h.to_f64()),
        ("sqrt(m) sup|g_i - g_i'|".into(), sqrt_m * sup_g),
    ];
    Ok(BoundReport::decide(
        theorem,
        lhs,
        rhs,
        input.tol,
        radii,
        ingredients,
    ))
}

/// `sup over the rho-ball of max{|g_0|, |g_0'|, |G|_2, |G'|_2}` from shared
/// component tables (`g_pairs[0]` is the pair of objectives, the rest are
/// the mapping components).
fn sup_ball_composite(
    g_pairs: &[(&GriddedFunction, &GriddedFunction)],
    rho: f64,
) -> Result<f64, BoundError> {
    let grid = g_pairs[0].0.grid();
    for (a, b) in g_pairs {
        if a.grid() != grid || b.grid() != grid {
            return Err(BoundError::TableGridMismatch);
        }
    }
    let dim = grid.dim();
    let mut p = vec![0.0; dim];
    let mut sup = 0.0f64;
    for idx in 0..grid.point_count() {
        grid.point_of(idx, &mut p);
        if l2(&p) > rho {
            continue;
        }
        let g0 = g_pairs[0].0.value(idx).to_f64().abs();
        let g0_nu = g_pairs[0].1.value(idx).to_f64().abs();
        let mut norm_g = 0.0;
        let mut norm_g_nu = 0.0;
        for (a, b) in &g_pairs[1..] {
            let va = a.value(idx).to_f64();
            let vb = b.value(idx).to_f64();
            norm_g += va * va;
            norm_g_nu += vb * vb;
        }
        sup = sup
            .max(g0)
            .max(g0_nu)
            .max(norm_g.sqrt())
            .max(norm_g_nu.sqrt());
    }
    Ok(sup)
}

// ---------------------------------------------------------------------------
// Constraint families.
// ---------------------------------------------------------------------------

pub struct InequalityInput<'a> {
    pub f: &'a RockafellianModel,
    pub f_nu: &'a RockafellianModel,
    /// Pairs `(g_i, g_i_nu)` for `i = 0, .., m` on one shared grid.
    pub g_pairs: Vec<(&'a GriddedFunction, &'a GriddedFunction)>,
    pub u_grid: &'a GridSpec,
    pub x_grid: &'a GridSpec,
    pub alpha_step: f64,
    pub component_alpha_step: f64,
    pub tol: f64,
}

/// Inequality-system embeddings: the epigraph distance at radius `rho` is
/// bounded by the worst component epigraph distance at radius `2 rho`.
pub fn bound_inequality(input: &InequalityInput, rho: f64) -> Result<BoundReport, BoundError> {
    let theorem = TheoremId::InequalityFamily;
    let mut radii = RadiusBudget::new(rho);
    radii.rho_bar = Some(2.0 * rho);
    let n = input.f.n();
    let constraints = input.g_pairs.len() - 1;

    let comp_norm = with_alpha(&NormSpec::l2(n));
    let comp_params = alpha_window(2.0 * rho, input.component_alpha_step);
    let mut worst = ExtReal::ZERO;
    let mut ingredients = Vec::new();
    for (i, (a, b)) in input.g_pairs.iter().enumerate() {
        let epi_a = a.epi_cloud(comp_params, Orientation::Epi)?;
        let epi_b = b.epi_cloud(comp_params, Orientation::Epi)?;
        if epi_a.is_empty() || epi_b.is_empty() {
            return Ok(BoundReport::inapplicable(
                theorem,
                format!("component {i} has an empty epigraph cloud"),
                radii,
            ));
        }
        let d = truncated_hausdorff(&epi_a, &epi_b, 2.0 * rho, &comp_norm)?;
        ingredients.push((format!("dl_2rho(epi g_{i}, epi g_{i}')"), d.to_f64()));
        worst = worst.max(d);
    }

    let norm = inequality_epi_norm(n, constraints);
    let params = alpha_window(rho, input.alpha_step);
    let epi_f = input.f.epi_cloud(input.u_grid, input.x_grid, params);
    let epi_f_nu = input.f_nu.epi_cloud(input.u_grid, input.x_grid, params);
    let lhs = truncated_hausdorff(&epi_f, &epi_f_nu, rho, &norm)?;

    Ok(BoundReport::decide(
        theorem,
        lhs,
        worst,
        input.tol,
        radii,
        ingredients,
    ))
}

pub struct ConstraintCompositeInput<'a> {
    pub f: &'a RockafellianModel,
    pub f_nu: &'a RockafellianModel,
    pub g0: &'a GriddedFunction,
    pub g0_nu: &'a GriddedFunction,
    /// Component pairs of the inner mapping on one shared grid.
    pub g_pairs: Vec<(&'a GriddedFunction, &'a GriddedFunction)>,
    pub h: &'a GriddedFunction,
    pub h_nu: &'a GriddedFunction,
    pub u_grid: &'a GridSpec,
    pub x_grid: &'a GridSpec,
    pub alpha_step: f64,
    pub tol: f64,
}

/// Composite-in-constraint embeddings: objective epigraph distance scaled
/// by the mapping's modulus, plus the outer-function epigraph distance and
/// the sup gap of the mapping.
pub fn bound_constraint_composite(
    input: &ConstraintCompositeInput,
    rho: f64,
) -> Result<BoundReport, BoundError> {
    let theorem = TheoremId::ConstraintCompositeFamily;
    let mut radii = RadiusBudget::new(rho);
    let n = input.f.n();
    let m_inner = input.g_pairs.len();

    let g0_norm = with_alpha(&NormSpec::l2(n));
    let g0_params = alpha_window(rho, input.alpha_step);
    let epi_g0 = input.g0.epi_cloud(g0_params, Orientation::Epi)?;
    let epi_g0_nu = input.g0_nu.epi_cloud(g0_params, Orientation::Epi)?;
    let dl_g0 = truncated_hausdorff(&epi_g0, &epi_g0_nu, rho, &g0_norm)?;
    let ExtReal::Finite(dl_g0) = dl_g0 else {
        return Ok(BoundReport::inapplicable(
            theorem,
            "objective epigraph distance is infinite",
            radii,
        ));
    };

    let rho_prime = rho + dl_g0 + 1e-6;
    radii.rho_prime = Some(rho_prime);
    let mut kappa = 0.0f64;
    let mut sup_ball_g = 0.0f64;
    let mut sup_gap = 0.0f64;
    {
        let grid = input.g_pairs[0].0.grid();
        let dim = grid.dim();
        let mut p = vec![0.0; dim];
        for (a, b) in &input.g_pairs {
            if a.grid() != grid || b.grid() != grid {
                return Err(BoundError::TableGridMismatch);
            }
            kappa = kappa
                .max(a.lipschitz_modulus(rho_prime)?)
                .max(b.lipschitz_modulus(rho_prime)?);
        }
        for idx in 0..grid.point_count() {
            grid.point_of(idx, &mut p);
            let r = l2(&p);
            let mut na = 0.0;
            let mut nb = 0.0;
            let mut gap = 0.0;
            for (a, b) in &input.g_pairs {
                let va = a.value(idx).to_f64();
                let vb = b.value(idx).to_f64();
                na += va * va;
                nb += vb * vb;
                gap += (va - vb) * (va - vb);
            }
            if r <= rho {
                sup_ball_g = sup_ball_g.max(na.sqrt()).max(nb.sqrt());
            }
            if r <= rho_prime {
                sup_gap = sup_gap.max(gap.sqrt());
            }
        }
    }
    let rho_bar = rho + sup_ball_g;
    radii.rho_bar = Some(rho_bar);

    let h_norm = with_alpha(&NormSpec::l2(m_inner));
    let h_params = alpha_window(rho_bar, input.alpha_step);
    let epi_h = input.h.epi_cloud(h_params, Orientation::Epi)?;
    let epi_h_nu = input.h_nu.epi_cloud(h_params, Orientation::Epi)?;
    let dl_h = truncated_hausdorff(&epi_h, &epi_h_nu, rho_bar, &h_norm)?;

    let norm = constraint_composite_epi_norm(m_inner, n);
    let params = alpha_window(rho, input.alpha_step);
    let epi_f = input.f.epi_cloud(input.u_grid, input.x_grid, params);
    let epi_f_nu = input.f_nu.epi_cloud(input.u_grid, input.x_grid, params);
    let lhs = truncated_hausdorff(&epi_f, &epi_f_nu, rho, &norm)?;

    let coeff = 1.0f64.max((m_inner as f64).sqrt() * kappa);
    let rhs = ExtReal::new(coeff * dl_g0) + dl_h + ExtReal::new(sup_gap);
    let ingredients = vec![
        ("dl_rho(epi g0, epi g0')".into(), dl_g0),
        ("kappa(rho')".into(), kappa),
        ("max{1, sqrt(m) kappa}".into(), coeff),
        ("dl_rhobar(epi h, epi h')".into(), dl_h.to_f64()),
        ("sup|G - G'|_2".into(), sup_gap),
    ];
    Ok(BoundReport::decide(
        theorem,
        lhs,
        rhs,
        input.tol,
        radii,
        ingredients,
    ))
}

// ---------------------------------------------------------------------------
// Reweighting / splitting families.
// ---------------------------------------------------------------------------

pub struct AmbiguityInput<'a> {
    pub f: &'a RockafellianModel,
    pub f_nu: &'a RockafellianModel,
    pub eta: f64,
    pub u_grid: &'a GridSpec,
    pub x_grid: &'a GridSpec,
    pub alpha_step: f64,
    pub tol: f64,
}

/// Reweighting family: the epigraph distance is controlled by the weight
/// shift in the 1-norm and the proximal-weight gap.
pub fn bound_ambiguity(input: &AmbiguityInput, rho: f64) -> Result<BoundReport, BoundError> {
    let theorem = TheoremId::AmbiguityDistance;
    let radii = RadiusBudget::new(rho);
    let Family::Ambiguity(parts) = input.f.family() else {
        return Err(BoundError::WrongFamily("ambiguity"));
    };
    let Family::Ambiguity(parts_nu) = input.f_nu.family() else {
        return Err(BoundError::WrongFamily("ambiguity"));
    };

    // Verify the lower-bound floor on the components over the probe grid.
    let mut x = vec![0.0; input.f.n()];
    for (i, gi) in parts.gs.iter().enumerate() {
        let mut min = ExtReal::PosInf;
        for idx in 0..input.x_grid.point_count() {
            input.x_grid.point_of(idx, &mut x);
            let v = gi(&x);
            if v < min {
                min = v;
            }
        }
        if min < ExtReal::new(-input.eta) {
            return Ok(BoundReport::inapplicable(
                theorem,
                format!("component {i} dips below -eta on the probe grid"),
                radii,
            ));
        }
    }

    let p_gap_1 = l1_diff(&parts.p, &parts_nu.p);
    let p_gap_2 = l2_diff(&parts.p, &parts_nu.p);
    let theta_gap = (parts.theta - parts_nu.theta).abs();
    let rhs = 1.0f64.max(input.eta + parts_nu.theta) * p_gap_1
        + 0.5 * parts_nu.theta * p_gap_2 * p_gap_2
        + 0.5 * theta_gap;

    let norm = ambiguity_epi_norm(input.f.m(), input.f.n());
    let params = alpha_window(rho, input.alpha_step);
    let epi_f = input.f.epi_cloud(input.u_grid, input.x_grid, params);
    let epi_f_nu = input.f_nu.epi_cloud(input.u_grid, input.x_grid, params);
    let lhs = truncated_hausdorff(&epi_f, &epi_f_nu, rho, &norm)?;

    let ingredients = vec![
        ("|p - p'|_1".into(), p_gap_1),
        (
            "max{1, eta + theta'}".into(),
            1.0f64.max(input.eta + parts_nu.theta),
        ),
        (
            "theta'/2 |p - p'|_2^2".into(),
            0.5 * parts_nu.theta * p_gap_2 * p_gap_2,
        ),
        ("|theta - theta'|/2".into(), 0.5 * theta_gap),
    ];
    Ok(BoundReport::decide(
        theorem,
        lhs,
        ExtReal::new(rhs),
        input.tol,
        radii,
        ingredients,
    ))
}

pub struct SplittingInput<'a> {
    pub f: &'a RockafellianModel,
    pub f_nu: &'a RockafellianModel,
    pub eta: f64,
    /// Pairs `(g_i, g_i_nu)` on one shared grid wide enough for the
    /// enlarged radius.
    pub g_pairs: Vec<(&'a GriddedFunction, &'a GriddedFunction)>,
    pub u_grid: &'a GridSpec,
    pub x_grid: &'a GridSpec,
    pub alpha_step: f64,
    pub component_alpha_step: f64,
    pub tol: f64,
}

/// Splitting family: weight shift scaled by the component magnitude plus
/// the worst component epigraph distance at the enlarged radius.
pub fn bound_splitting(input: &SplittingInput, rho: f64) -> Result<BoundReport, BoundError> {
    let theorem = TheoremId::SplittingDistance;
    let mut radii = RadiusBudget::new(rho);
    let Family::Splitting(parts) = input.f.family() else {
        return Err(BoundError::WrongFamily("splitting"));
    };
    let Family::Splitting(parts_nu) = input.f_nu.family() else {
        return Err(BoundError::WrongFamily("splitting"));
    };
    let n = input.f.n();
    let m = parts.gs.len();

    // Floors on the components.
    for (i, (a, b)) in input.g_pairs.iter().enumerate() {
        for table in [a, b] {
            let min = table
                .values()
                .iter()
                .copied()
                .min()
                .unwrap_or(ExtReal::PosInf);
            if min < ExtReal::new(-input.eta) {
                return Ok(BoundReport::inapplicable(
                    theorem,
                    format!("component {i} dips below -eta"),
                    radii,
                ));
            }
        }
    }

    let beta = parts
        .p
        .iter()
        .chain(&parts_nu.p)
        .copied()
        .filter(|&w| w > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !beta.is_finite() || beta <= 0.0 {
        return Ok(BoundReport::inapplicable(
            theorem,
            "all weights vanish",
            radii,
        ));
    }

    // Sup of zero-weight components over the 2 rho ball.
    let mut zero_weight_sup = f64::NEG_INFINITY;
    {
        let grid = input.g_pairs[0].0.grid();
        let mut p = vec![0.0; grid.dim()];
        for idx in 0..grid.point_count() {
            grid.point_of(idx, &mut p);
            if l2(&p) > 2.0 * rho {
                continue;
            }
            for (i, (a, b)) in input.g_pairs.iter().enumerate() {
                if parts.p[i] == 0.0 {
                    zero_weight_sup = zero_weight_sup.max(a.value(idx).to_f64());
                }
                if parts_nu.p[i] == 0.0 {
                    zero_weight_sup = zero_weight_sup.max(b.value(idx).to_f64());
                }
            }
        }
    }
    let mut rho_bar = (2.0 * rho).max((rho + input.eta) / beta);
    if zero_weight_sup.is_finite() {
        rho_bar = rho_bar.max(zero_weight_sup);
    } else if zero_weight_sup == f64::INFINITY {
        return Ok(BoundReport::inapplicable(
            theorem,
            "a zero-weight component is unbounded on the doubled ball",
            radii,
        ));
    }
    radii.rho_bar = Some(rho_bar);

    let comp_norm = with_alpha(&NormSpec::l2(n));
    let comp_params = alpha_window(rho_bar, input.component_alpha_step);
    let mut worst = ExtReal::ZERO;
    let mut lambda_sq = 0.0f64;
    let mut ingredients = Vec::new();
    for (i, (a, b)) in input.g_pairs.iter().enumerate() {
        let epi_a = a.epi_cloud(comp_params, Orientation::Epi)?;
        let epi_b = b.epi_cloud(comp_params, Orientation::Epi)?;
        let d = truncated_hausdorff(&epi_a, &epi_b, rho_bar, &comp_norm)?;
        let ExtReal::Finite(d) = d else {
            return Ok(BoundReport::inapplicable(
                theorem,
                format!("component {i} epigraph distance is infinite"),
                radii,
            ));
        };
        ingredients.push((format!("dl_rhobar(epi g_{i}, epi g_{i}')"), d));
        worst = worst.max(ExtReal::new(d));
        lambda_sq += (rho_bar + d) * (rho_bar + d);
    }
    let lambda = lambda_sq.sqrt();
    let p_gap = l2_diff(&parts.p, &parts_nu.p);

    let norm = splitting_epi_norm(n, m);
    let params = alpha_window(rho, input.alpha_step);
    let epi_f = input.f.epi_cloud(input.u_grid, input.x_grid, params);
    let epi_f_nu = input.f_nu.epi_cloud(input.u_grid, input.x_grid, params);
    let lhs = truncated_hausdorff(&epi_f, &epi_f_nu, rho, &norm)?;

    let rhs = ExtReal::new(lambda * p_gap) + worst;
    ingredients.push(("lambda".into(), lambda));
    ingredients.push(("|p' - p|_2".into(), p_gap));
    Ok(BoundReport::decide(
        theorem,
        lhs,
        rhs,
        input.tol,
        radii,
        ingredients,
    ))
}

// ---------------------------------------------------------------------------
// Augmentation.
// ---------------------------------------------------------------------------

pub struct AugmentationInput<'a> {
    pub f: &'a RockafellianModel,
    pub f_nu: &'a RockafellianModel,
    pub aug: Augmentation,
    pub aug_nu: Augmentation,
    pub eta: f64,
    pub u_grid: &'a GridSpec,
    pub x_grid: &'a GridSpec,
    pub alpha_step: f64,
    /// Modulus of the augmenting functions at the enlarged radius; when
    /// absent it is derived for proximal pairs (`2 max{theta, theta'} rho'`).
    pub kappa: Option<f64>,
    pub tol: f64,
}

/// Augmented embeddings: the augmented epigraph distance is controlled by
/// the base distance scaled by one plus the augmentation modulus, plus the
/// sup gap of the augmenting functions.
pub fn bound_augmentation(input: &AugmentationInput, rho: f64) -> Result<BoundReport, BoundError> {
    let theorem = TheoremId::AugmentationDistance;
    let mut radii = RadiusBudget::new(rho);
    if matches!(input.aug, Augmentation::IndicatorZero)
        || matches!(input.aug_nu, Augmentation::IndicatorZero)
    {
        return Ok(BoundReport::inapplicable(
            theorem,
            "augmenting functions must be real-valued; no rate is available for the indicator",
            radii,
        ));
    }

    // Floor on f and f_nu over the joint rho-ball under max{|u|_2, |x|_2}.
    let m = input.f.m();
    let mut u = vec![0.0; m];
    let mut x = vec![0.0; input.f.n()];
    for ui in 0..input.u_grid.point_count() {
        input.u_grid.point_of(ui, &mut u);
        if l2(&u) > rho {
            continue;
        }
        for xi in 0..input.x_grid.point_count() {
            input.x_grid.point_of(xi, &mut x);
            if l2(&x) > rho {
                continue;
            }
            for f in [input.f, input.f_nu] {
                if f.eval(&u, &x) < ExtReal::new(-input.eta) {
                    return Ok(BoundReport::inapplicable(
                        theorem,
                        "embedding dips below -eta on the rho ball",
                        radii,
                    ));
                }
            }
        }
    }

    let rho_bar = rho.max(input.eta);
    radii.rho_bar = Some(rho_bar);
    let norm = NormSpec::epi_bivariate(m, input.f.n());
    let base_params = alpha_window(rho_bar, input.alpha_step);
    let epi_f = input.f.epi_cloud(input.u_grid, input.x_grid, base_params);
    let epi_f_nu = input
        .f_nu
        .epi_cloud(input.u_grid, input.x_grid, base_params);
    let dl_base = truncated_hausdorff(&epi_f, &epi_f_nu, rho_bar, &norm)?;
    let ExtReal::Finite(dl_base) = dl_base else {
        return Ok(BoundReport::inapplicable(
            theorem,
            "base epigraph distance is infinite",
            radii,
        ));
    };
    let rho_prime = rho + dl_base + 1e-6;
    radii.rho_prime = Some(rho_prime);

    let kappa = match input.kappa {
        Some(k) => k,
        None => match (&input.aug, &input.aug_nu) {
            (Augmentation::Prox { theta }, Augmentation::Prox { theta: theta_nu }) => {
                2.0 * theta.max(*theta_nu) * rho_prime
            }
            _ => {
                return Ok(BoundReport::inapplicable(
                    theorem,
                    "no modulus available for this augmentation pair",
                    radii,
                ))
            }
        },
    };

    // Sup gap of the augmenting functions over the rho'-ball of u probes.
    let mut sup_a = 0.0f64;
    for ui in 0..input.u_grid.point_count() {
        input.u_grid.point_of(ui, &mut u);
        if l2(&u) > rho_prime {
            continue;
        }
        let gap = (input.aug_nu.eval(&u).to_f64() - input.aug.eval(&u).to_f64()).abs();
        if !gap.is_finite() {
            return Ok(BoundReport::inapplicable(
                theorem,
                "augmenting functions are not finite on the ball",
                radii,
            ));
        }
        sup_a = sup_a.max(gap);
    }

    let f_bar = input.f.augment(input.aug.clone())?;
    let f_bar_nu = input.f_nu.augment(input.aug_nu.clone())?;
    let params = alpha_window(rho, input.alpha_step);
    let epi_bar = f_bar.epi_cloud(input.u_grid, input.x_grid, params);
    let epi_bar_nu = f_bar_nu.epi_cloud(input.u_grid, input.x_grid, params);
    let lhs = truncated_hausdorff(&epi_bar, &epi_bar_nu, rho, &norm)?;

    let rhs = ExtReal::new((1.0 + kappa) * dl_base + sup_a);
    let ingredients = vec![
        ("dl_rhobar(epi f, epi f')".into(), dl_base),
        ("kappa(rho')".into(), kappa),
        ("sup|a' - a|".into(), sup_a),
    ];
    Ok(BoundReport::decide(
        theorem,
        lhs,
        rhs,
        input.tol,
        radii,
        ingredients,
    ))
}

// ---------------------------------------------------------------------------
// Lagrangian error bound.
// ---------------------------------------------------------------------------

pub struct LagrangianBoundInput<'a> {
    pub f: &'a RockafellianModel,
    pub f_nu: &'a RockafellianModel,
    pub y: Vec<f64>,
    pub y_nu: Vec<f64>,
    /// Scan box for the per-x minimization defining the Lagrangians.
    pub u_grid: &'a GridSpec,
    /// Tabulation grid for the Lagrangians (spans the rho + 1 build box).
    pub x_grid: &'a GridSpec,
    /// Probe grids for the embedding epigraphs at the enlarged radius.
    pub f_u_grid: &'a GridSpec,
    pub f_x_grid: &'a GridSpec,
    pub alpha_step: f64,
    pub tol: f64,
}

/// Lagrangian epigraph distance against the embedding distance at radius
/// `rho' = (1 + max norm y) rhohat` plus the multiplier gap scaled by
/// `rhohat`, where `rhohat` is the smallest radius within which every
/// probed sublevel slice attains its tilted minimization target.
pub fn bound_lagrangian(input: &LagrangianBoundInput, rho: f64) -> Result<BoundReport, BoundError> {
    let theorem = TheoremId::LagrangianErrorBound;
    let mut radii = RadiusBudget::new(rho);

    let l_table = tabulate_lagrangian(input.f, &input.y, input.u_grid, input.x_grid)?;
    let l_nu_table = tabulate_lagrangian(input.f_nu, &input.y_nu, input.u_grid, input.x_grid)?;

    // Minimal rho_hat: for probed x in B(rho) with l <= rho, the smallest
    // |u|_2 reaching max{-rho, l(x, y)}.
    let mut rho_hat = rho;
    for (f, y, table) in [
        (input.f, &input.y, &l_table),
        (input.f_nu, &input.y_nu, &l_nu_table),
    ] {
        match attainment_radius(f, y, table, input.u_grid, rho)? {
            Attainment::Within(r) => rho_hat = rho_hat.max(r),
            Attainment::EdgeWitness(x) => {
                return Ok(BoundReport::inapplicable(
                    theorem,
                    format!("tilted minimization escapes the probe box at x = {x:?}"),
                    radii,
                ));
            }
        }
    }
    radii.rho_hat = Some(rho_hat);
    let y_max = l2(&input.y).max(l2(&input.y_nu));
    let rho_prime = (1.0 + y_max) * rho_hat;
    radii.rho_prime = Some(rho_prime);

    let norm = NormSpec::epi_bivariate(input.f.m(), input.f.n());
    let f_params = alpha_window(rho_prime, input.alpha_step);
    let epi_f = input.f.epi_cloud(input.f_u_grid, input.f_x_grid, f_params);
    let epi_f_nu = input
        .f_nu
        .epi_cloud(input.f_u_grid, input.f_x_grid, f_params);
    if epi_f.is_empty() || epi_f_nu.is_empty() {
        return Ok(BoundReport::inapplicable(
            theorem,
            "an embedding epigraph cloud is empty",
            radii,
        ));
    }
    let dl_f = truncated_hausdorff(&epi_f, &epi_f_nu, rho_prime, &norm)?;

    let l_norm = with_alpha(&NormSpec::l2(input.f.n()));
    let l_params = alpha_window(rho, input.alpha_step);
    let epi_l = l_table.epi_cloud(l_params, Orientation::Epi)?;
    let epi_l_nu = l_nu_table.epi_cloud(l_params, Orientation::Epi)?;
    let lhs = truncated_hausdorff(&epi_l, &epi_l_nu, rho, &l_norm)?;

    let y_gap = l2_diff(&input.y, &input.y_nu);
    let rhs = ExtReal::new(1.0 + y_max) * dl_f + ExtReal::new(rho_hat * y_gap);
    let ingredients = vec![
        ("dl_rho'(epi f, epi f')".into(), dl_f.to_f64()),
        ("1 + max|y|".into(), 1.0 + y_max),
        ("rho_hat |y - y'|".into(), rho_hat * y_gap),
    ];
    Ok(BoundReport::decide(
        theorem,
        lhs,
        rhs,
        input.tol,
        radii,
        ingredients,
    ))
}

/// Tabulates `x -> inf_u f(u, x) - <y, u>` on the grid, boundary-suspect
/// minima recorded as `-inf`.
pub fn tabulate_lagrangian(
    f: &RockafellianModel,
    y: &[f64],
    u_grid: &GridSpec,
    x_grid: &GridSpec,
) -> Result<GriddedFunction, BoundError> {
    use rayon::prelude::*;
    let values: Vec<ExtReal> = (0..x_grid.point_count())
        .into_par_iter()
        .map(|xi| {
            let x = x_grid.point_vec(xi);
            let inf: NumericInf = crate::lagrangian::lagrangian_numeric(f, &x, y, u_grid)
                .expect("dimensions validated");
            inf.effective()
        })
        .collect();
    Ok(GriddedFunction::from_values(x_grid.clone(), values)?)
}

enum Attainment {
    Within(f64),
    EdgeWitness(Vec<f64>),
}

/// For every probed `x` in the rho-ball with `l(x, y) <= rho`, the smallest
/// `|u|_2` whose tilted value reaches `max{-rho, l(x, y)}`.
fn attainment_radius(
    f: &RockafellianModel,
    y: &[f64],
    l_table: &GriddedFunction,
    u_grid: &GridSpec,
    rho: f64,
) -> Result<Attainment, BoundError> {
    let x_grid = l_table.grid();
    let m = f.m();
    let mut worst = 0.0f64;
    let mut x = vec![0.0; x_grid.dim()];
    let mut u = vec![0.0; m];
    for xi in 0..x_grid.point_count() {
        x_grid.point_of(xi, &mut x);
        if l2(&x) > rho {
            continue;
        }
        let l_val = l_table.value(xi);
        if l_val > ExtReal::new(rho) {
            continue;
        }
        let target = match l_val {
            ExtReal::Finite(v) => ExtReal::new(v.max(-rho) + 1e-9),
            // Boundary-suspect or unbounded slices only need to reach -rho.
            _ => ExtReal::new(-rho + 1e-9),
        };
        let mut best: Option<(f64, bool)> = None;
        for ui in 0..u_grid.point_count() {
            u_grid.point_of(ui, &mut u);
            let val = f.eval(&u, &x) - ExtReal::new(u.iter().zip(y).map(|(a, b)| a * b).sum());
            if val <= target {
                let r = l2(&u);
                let edge = u_index_on_edge(u_grid, ui);
                match best {
                    Some((br, _)) if br <= r => {}
                    _ => best = Some((r, edge)),
                }
            }
        }
        match best {
            Some((r, false)) => worst = worst.max(r),
            Some((_, true)) | None => return Ok(Attainment::EdgeWitness(x.clone())),
        }
    }
    Ok(Attainment::Within(worst))
}

fn u_index_on_edge(grid: &GridSpec, mut idx: usize) -> bool {
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

// ---------------------------------------------------------------------------
// Dual error bounds.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualBoundMode {
    /// Hypograph distance, paying for the domain mismatch.
    A,
    /// Sup gap over the common domain.
    B,
}

pub struct DualBoundInput<'a> {
    pub f: &'a RockafellianModel,
    pub f_nu: &'a RockafellianModel,
    pub y_grid: GridSpec,
    /// Joint probes defining the tabulated duals.
    pub u_grid: &'a GridSpec,
    pub x_grid: &'a GridSpec,
    /// Probe grids for the embedding epigraphs at the enlarged radius.
    pub f_u_grid: &'a GridSpec,
    pub f_x_grid: &'a GridSpec,
    pub alpha_step: f64,
    pub mode: DualBoundMode,
    pub tol: f64,
}

/// Dual-function stability against the embedding epigraph distance.
pub fn bound_dual(input: &DualBoundInput, rho: f64) -> Result<BoundReport, BoundError> {
    let theorem = match input.mode {
        DualBoundMode::A => TheoremId::DualErrorBoundA,
        DualBoundMode::B => TheoremId::DualErrorBoundB,
    };
    let mut radii = RadiusBudget::new(rho);

    let psi = dual_numeric(input.f, input.y_grid.clone(), input.u_grid, input.x_grid)?;
    let psi_nu = dual_numeric(input.f_nu, input.y_grid.clone(), input.u_grid, input.x_grid)?;
    let m = input.f.m();
    let norm_y = NormSpec::l2(m);
    let dom = psi.dom_cloud(HUGE);
    let dom_nu = psi_nu.dom_cloud(HUGE);
    if dom.is_empty() || dom_nu.is_empty() {
        return Ok(BoundReport::inapplicable(
            theorem,
            "a dual effective domain is empty on the probed multipliers",
            radii,
        ));
    }

    let f_norm = NormSpec::epi_bivariate(m, input.f.n());

    match input.mode {
        DualBoundMode::A => {
            let dom_dist = truncated_hausdorff(&dom, &dom_nu, rho, &norm_y)?;
            let ExtReal::Finite(dom_dist) = dom_dist else {
                return Ok(BoundReport::inapplicable(
                    theorem,
                    "domain distance is infinite",
                    radii,
                ));
            };
            let rho_hat = rho + dom_dist + 1e-6;
            radii.rho_hat = Some(rho_hat);

            // Minimal rho' covering value ranges and minimizer radii over
            // the sampled domains within the rho_hat ball, floored at 1.
            let mut rho_prime = 1.0f64;
            for (dual, grid_tag) in [(&psi, "psi"), (&psi_nu, "psi'")] {
                match dual_range_and_radii(dual, &norm_y, rho_hat) {
                    Some(r) => rho_prime = rho_prime.max(r),
                    None => {
                        return Ok(BoundReport::inapplicable(
                            theorem,
                            format!("{grid_tag}: a minimizer escapes the joint probe box"),
                            radii,
                        ))
                    }
                }
            }
            radii.rho_prime = Some(rho_prime);
            let rho_bar = rho_prime * (1.0 + rho_hat);
            radii.rho_bar = Some(rho_bar);

            let f_params = alpha_window(rho_bar, input.alpha_step);
            let epi_f = input.f.epi_cloud(input.f_u_grid, input.f_x_grid, f_params);
            let epi_f_nu = input
                .f_nu
                .epi_cloud(input.f_u_grid, input.f_x_grid, f_params);
            let dl_f = truncated_hausdorff(&epi_f, &epi_f_nu, rho_bar, &f_norm)?;

            let hypo_norm = with_alpha(&norm_y);
            let hypo_params = alpha_window(rho, input.alpha_step);
            let hypo = psi.table.epi_cloud(hypo_params, Orientation::Hypo)?;
            let hypo_nu = psi_nu.table.epi_cloud(hypo_params, Orientation::Hypo)?;
            let lhs = truncated_hausdorff(&hypo_nu, &hypo, rho, &hypo_norm)?;

            let rhs = ExtReal::new(1.0 + rho_hat) * dl_f + ExtReal::new(rho_prime * dom_dist);
            let ingredients = vec![
                ("dl_rhobar(epi f, epi f')".into(), dl_f.to_f64()),
                ("1 + rho_hat".into(), 1.0 + rho_hat),
                ("dl(dom(-psi), dom(-psi'))".into(), dom_dist),
                ("rho'".into(), rho_prime),
            ];
            Ok(BoundReport::decide(
                theorem,
                lhs,
                rhs,
                input.tol,
                radii,
                ingredients,
            ))
        }
        DualBoundMode::B => {
            // Common domain within the rho ball.
            let grid = psi.table.grid().clone();
            let mut y = vec![0.0; m];
            let mut sup_gap = 0.0f64;
            let mut rho_prime = 0.0f64;
            let mut nonempty = false;
            for idx in 0..grid.point_count() {
                grid.point_of(idx, &mut y);
                if norm_y.eval_unchecked(&y) > rho {
                    continue;
                }
                let a = psi.table.value(idx);
                let b = psi_nu.table.value(idx);
                if a <= ExtReal::new(-HUGE) || b <= ExtReal::new(-HUGE) {
                    continue;
                }
                let (ExtReal::Finite(av), ExtReal::Finite(bv)) = (a, b) else {
                    continue;
                };
                nonempty = true;
                sup_gap = sup_gap.max((av - bv).abs());
                if psi.argmin_on_edge[idx] || psi_nu.argmin_on_edge[idx] {
                    return Ok(BoundReport::inapplicable(
                        theorem,
                        "a minimizer escapes the joint probe box on the common domain",
                        radii,
                    ));
                }
                rho_prime = rho_prime
                    .max(av.abs())
                    .max(bv.abs())
                    .max(psi.argmin_radius[idx])
                    .max(psi_nu.argmin_radius[idx]);
            }
            if !nonempty {
                return Ok(BoundReport::inapplicable(
                    theorem,
                    "common dual domain misses the rho ball",
                    radii,
                ));
            }
            radii.rho_prime = Some(rho_prime);
            let rho_bar = rho_prime * (1.0 + rho);
            radii.rho_bar = Some(rho_bar);

            let f_params = alpha_window(rho_bar, input.alpha_step);
            let epi_f = input.f.epi_cloud(input.f_u_grid, input.f_x_grid, f_params);
            let epi_f_nu = input
                .f_nu
                .epi_cloud(input.f_u_grid, input.f_x_grid, f_params);
            let dl_f = truncated_hausdorff(&epi_f, &epi_f_nu, rho_bar, &f_norm)?;

            let rhs = ExtReal::new(1.0 + rho) * dl_f;
            let ingredients = vec![
                ("dl_rhobar(epi f, epi f')".into(), dl_f.to_f64()),
                ("1 + rho".into(), 1.0 + rho),
                ("sup|psi - psi'| on Y(rho)".into(), sup_gap),
            ];
            Ok(BoundReport::decide(
                theorem,
                ExtReal::new(sup_gap),
                rhs,
                input.tol,
                radii,
                ingredients,
            ))
        }
    }
}

/// Largest of `|psi(y)|` and the joint minimizer radius over sampled domain
/// points inside the ball, or `None` when a minimizer sits on the probe
/// edge.
fn dual_range_and_radii(dual: &DualFunction, norm_y: &NormSpec, ball: f64) -> Option<f64> {
    let grid = dual.table.grid();
    let mut y = vec![0.0; grid.dim()];
    let mut out = 0.0f64;
    for idx in 0..grid.point_count() {
        grid.point_of(idx, &mut y);
        if norm_y.eval_unchecked(&y) > ball {
            continue;
        }
        let v = dual.table.value(idx);
        if v <= ExtReal::new(-HUGE) {
            continue;
        }
        let ExtReal::Finite(value) = v else {
            continue;
        };
        if dual.argmin_on_edge[idx] {
            return None;
        }
        out = out.max(value.abs()).max(dual.argmin_radius[idx]);
    }
    Some(out)
}
