//! Lagrangians and dual functions of a parametric embedding.
//!
//! The Lagrangian at `(x, y)` is the infimum over the perturbation of the
//! tilted evaluator, `inf_u f(u, x) - <y, u>`; the dual function drops the
//! infimum over `x` as well. Numeric values come from grid scans over probe
//! boxes; the recurring families also have closed forms, which are checked
//! against the numeric route rather than trusted.
//!
//! A grid infimum attained on the probe-box edge may be a truncation
//! artifact of a genuinely unattained infimum, so such values are flagged
//! and treated as `-inf` by the tabulated dual.

use rayon::prelude::*;
use thiserror::Error;

use crate::extreal::ExtReal;
use crate::grid::{GridError, GridSpec, GriddedFunction};
use crate::rockafellian::{scan_tilted_u, Family, ModelError, RockafellianModel};

#[derive(Debug, Error)]
pub enum LagrangianError {
    #[error("operation requires the {0} family")]
    WrongFamily(&'static str),
    #[error("splitting closed form needs strictly positive weights (weight {0} is zero)")]
    ZeroWeight(usize),
    #[error("multiplier blocks have length {got}, expected {expected}")]
    MultiplierLength { expected: usize, got: usize },
    #[error("conjugate tables: got {got}, expected {expected}")]
    ConjugateCount { expected: usize, got: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A grid infimum together with the truncation-artifact flag.
#[derive(Clone, Debug)]
pub struct NumericInf {
    /// Raw minimum over the probe grid.
    pub raw: ExtReal,
    /// The innermost minimizer, when the minimum is attained.
    pub argmin: Option<Vec<f64>>,
    /// True when even the innermost minimizer sits on the probe-box edge,
    /// so the true infimum may be unattained below the raw value.
    pub boundary_suspect: bool,
}

impl NumericInf {
    /// The value to report: `-inf` for boundary-suspect minima.
    pub fn effective(&self) -> ExtReal {
        if self.boundary_suspect {
            ExtReal::NegInf
        } else {
            self.raw
        }
    }
}

/// `l(x, y) = min over the u grid of f(u, x) - <y, u>`.
pub fn lagrangian_numeric(
    f: &RockafellianModel,
    x: &[f64],
    y: &[f64],
    u_grid: &GridSpec,
) -> Result<NumericInf, LagrangianError> {
    if y.len() != f.m() {
        return Err(ModelError::MultiplierDimension {
            expected: f.m(),
            got: y.len(),
        }
        .into());
    }
    let scan = scan_tilted_u(f, x, y, u_grid);
    Ok(NumericInf {
        raw: scan.value,
        boundary_suspect: scan.argmin.is_some() && scan.on_boundary,
        argmin: scan.argmin,
    })
}

/// Closed form of the composite-family Lagrangian:
/// `i_X(x) + g0(x) + <G(x), y> - h*(y)`, with `h*` read from a conjugate
/// table at a grid node.
pub fn lagrangian_composite_closed(
    model: &RockafellianModel,
    h_conj: &GriddedFunction,
    x: &[f64],
    y: &[f64],
) -> Result<ExtReal, LagrangianError> {
    let Family::Composite(parts) = model.family() else {
        return Err(LagrangianError::WrongFamily("composite"));
    };
    let h_star = h_conj.value_at(y)?;
    if !(parts.x_set)(x) {
        return Ok(ExtReal::PosInf);
    }
    let dot: f64 = parts.g.iter().zip(y).map(|(gi, yi)| gi(x) * yi).sum();
    Ok(ExtReal::new((parts.g0)(x) + dot) - h_star)
}

/// Closed form of the reweighted-simplex Lagrangian: `g0(x) + sum_i h_i(x)`
/// with a per-component piecewise formula.
///
/// For `theta = 0`, `h_i = p_i min{g_i(x), y_i}`. For `theta > 0` the
/// per-component infimum over `u_i` in `[-p_i, 0]` is piecewise in where
/// `g_i(x)` falls relative to `[y_i, y_i + theta p_i]`: at or above the top
/// the minimizer is clamped at `-p_i`, inside the interval it is interior
/// with value `p_i g_i(x) - (y_i - g_i(x))^2 / (2 theta)`, and below, the
/// minimizer is `0`.
pub fn lagrangian_ambiguity_closed(
    model: &RockafellianModel,
    x: &[f64],
    y: &[f64],
) -> Result<ExtReal, LagrangianError> {
    let Family::Ambiguity(parts) = model.family() else {
        return Err(LagrangianError::WrongFamily("ambiguity"));
    };
    if y.len() != model.m() {
        return Err(ModelError::MultiplierDimension {
            expected: model.m(),
            got: y.len(),
        }
        .into());
    }
    let theta = parts.theta;
    let mut total = (parts.g0)(x);
    for (i, gi) in parts.gs.iter().enumerate() {
        let p = parts.p[i];
        let g = gi(x);
        let h_i = if theta == 0.0 {
            scale_ext(p, g.min(ExtReal::new(y[i])))
        } else {
            match g {
                ExtReal::PosInf => ExtReal::new(0.5 * theta * p * p + y[i] * p),
                ExtReal::NegInf => {
                    if p > 0.0 {
                        ExtReal::NegInf
                    } else {
                        ExtReal::ZERO
                    }
                }
                ExtReal::Finite(gv) => {
                    if gv > y[i] + theta * p {
                        ExtReal::new(0.5 * theta * p * p + y[i] * p)
                    } else if gv >= y[i] {
                        let d = y[i] - gv;
                        ExtReal::new(p * gv - d * d / (2.0 * theta))
                    } else {
                        ExtReal::new(p * gv)
                    }
                }
            }
        };
        total = total + h_i;
    }
    Ok(total)
}

fn scale_ext(c: f64, v: ExtReal) -> ExtReal {
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

/// Closed form of the splitting Lagrangian for strictly positive weights:
/// `- sum_i p_i g_i*(y_i / p_i) + <x, sum_i y_i>`, the scaled conjugates
/// interpolated from per-component tables.
pub fn lagrangian_splitting_closed(
    model: &RockafellianModel,
    x: &[f64],
    y: &[f64],
    conj_tables: &[GriddedFunction],
) -> Result<ExtReal, LagrangianError> {
    let Family::Splitting(parts) = model.family() else {
        return Err(LagrangianError::WrongFamily("splitting"));
    };
    if y.len() != model.m() {
        return Err(ModelError::MultiplierDimension {
            expected: model.m(),
            got: y.len(),
        }
        .into());
    }
    if conj_tables.len() != parts.gs.len() {
        return Err(LagrangianError::ConjugateCount {
            expected: parts.gs.len(),
            got: conj_tables.len(),
        });
    }
    let n = model.n();
    let mut total = ExtReal::ZERO;
    let mut y_sum = vec![0.0; n];
    for (i, table) in conj_tables.iter().enumerate() {
        let p = parts.p[i];
        if p <= 0.0 {
            return Err(LagrangianError::ZeroWeight(i));
        }
        let block = &y[i * n..(i + 1) * n];
        for (k, yk) in block.iter().enumerate() {
            y_sum[k] += yk;
        }
        let scaled: Vec<f64> = block.iter().map(|yk| yk / p).collect();
        total = total - scale_ext(p, table.interpolate(&scaled)?);
    }
    let dot: f64 = x.iter().zip(&y_sum).map(|(a, b)| a * b).sum();
    Ok(total + ExtReal::new(dot))
}

/// A dual function tabulated on a multiplier grid.
#[derive(Clone, Debug)]
pub struct DualFunction {
    /// Effective values: boundary-suspect entries are already `-inf`.
    pub table: GriddedFunction,
    /// Which entries were boundary-suspect.
    pub flags: Vec<bool>,
    /// Per entry, `max{|u|_2, |x|_2}` of the innermost joint minimizer
    /// (zero when the slice had no finite value).
    pub argmin_radius: Vec<f64>,
    /// Per entry, whether that minimizer sat on the edge of a probe grid.
    pub argmin_on_edge: Vec<bool>,
}

impl DualFunction {
    pub fn y_grid(&self) -> &GridSpec {
        self.table.grid()
    }

    /// Supremum of the tabulated values.
    pub fn sup(&self) -> ExtReal {
        self.table
            .values()
            .iter()
            .copied()
            .max()
            .unwrap_or(ExtReal::NegInf)
    }

    /// Grid points where the tabulated value exceeds `-huge`; the finite
    /// surrogate for the effective domain of `-psi`.
    pub fn dom_cloud(&self, huge: f64) -> crate::cloud::PointCloud {
        let grid = self.table.grid();
        let dim = grid.dim();
        let mut data = Vec::new();
        let mut p = vec![0.0; dim];
        for (idx, v) in self.table.values().iter().enumerate() {
            if *v > ExtReal::new(-huge) {
                grid.point_of(idx, &mut p);
                data.extend_from_slice(&p);
            }
        }
        crate::cloud::PointCloud::from_flat(dim, data, "dom(-psi)").expect("finite grid points")
    }
}

/// Tabulates `psi(y) = min over (u, x) probes of f(u, x) - <y, u>` on the
/// multiplier grid.
///
/// Evaluations of `f` are cached once over the joint probe grid and reused
/// across all `y`.
pub fn dual_numeric(
    f: &RockafellianModel,
    y_grid: GridSpec,
    u_grid: &GridSpec,
    x_grid: &GridSpec,
) -> Result<DualFunction, LagrangianError> {
    let m = f.m();
    let n = f.n();
    let nx = x_grid.point_count();
    let mu = u_grid.point_count();
    // Cache f over the joint grid; +inf entries are dropped since they never
    // attain the minimum (unless everything is +inf).
    let mut cached: Vec<(u32, u32, f64)> = Vec::new();
    {
        let mut u = vec![0.0; m];
        let mut x = vec![0.0; n];
        for ui in 0..mu {
            u_grid.point_of(ui, &mut u);
            for xi in 0..nx {
                x_grid.point_of(xi, &mut x);
                match f.eval(&u, &x) {
                    ExtReal::PosInf => {}
                    ExtReal::NegInf => cached.push((ui as u32, xi as u32, f64::NEG_INFINITY)),
                    ExtReal::Finite(v) => cached.push((ui as u32, xi as u32, v)),
                }
            }
        }
    }
    let u_flat = u_grid.flat_points();
    let x_flat = x_grid.flat_points();
    let joint_radius = |ui: usize, xi: usize| -> f64 {
        let u = &u_flat[ui * m..(ui + 1) * m];
        let x = &x_flat[xi * n..(xi + 1) * n];
        let ru: f64 = u.iter().map(|c| c * c).sum::<f64>().sqrt();
        let rx: f64 = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        ru.max(rx)
    };

    struct Entry {
        value: ExtReal,
        suspect: bool,
        radius: f64,
        on_edge: bool,
    }
    let entries: Vec<Entry> = (0..y_grid.point_count())
        .into_par_iter()
        .map(|yi| {
            let y = y_grid.point_vec(yi);
            let mut best = f64::INFINITY;
            let mut best_pair = None;
            let mut best_radius = f64::INFINITY;
            for &(ui, xi, v) in &cached {
                let u = &u_flat[ui as usize * m..(ui as usize + 1) * m];
                let tilted = v - y.iter().zip(u).map(|(a, b)| a * b).sum::<f64>();
                if tilted < best {
                    best = tilted;
                    best_pair = Some((ui as usize, xi as usize));
                    best_radius = joint_radius(ui as usize, xi as usize);
                } else if tilted == best && best_pair.is_some() {
                    let r = joint_radius(ui as usize, xi as usize);
                    if r < best_radius {
                        best_radius = r;
                        best_pair = Some((ui as usize, xi as usize));
                    }
                }
            }
            let Some((ui, _xi)) = best_pair else {
                return Entry {
                    value: ExtReal::PosInf,
                    suspect: false,
                    radius: 0.0,
                    on_edge: false,
                };
            };
            let suspect = u_index_on_edge(u_grid, ui);
            Entry {
                value: if suspect {
                    ExtReal::NegInf
                } else {
                    ExtReal::new(best)
                },
                suspect,
                radius: best_radius,
                on_edge: suspect,
            }
        })
        .collect();
    let values: Vec<ExtReal> = entries.iter().map(|e| e.value).collect();
    let flags: Vec<bool> = entries.iter().map(|e| e.suspect).collect();
    let argmin_radius: Vec<f64> = entries.iter().map(|e| e.radius).collect();
    let argmin_on_edge: Vec<bool> = entries.iter().map(|e| e.on_edge).collect();
    Ok(DualFunction {
        table: GriddedFunction::from_values(y_grid, values)?,
        flags,
        argmin_radius,
        argmin_on_edge,
    })
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

/// Closed-form dual for the affine-equality family (`X = R^n`,
/// `G(x) = Ax - b`, `h` the indicator of the origin):
/// `psi(y) = -<b, y> - g0*(-A^T y)` with `g0*` interpolated from a table.
pub fn dual_affine_closed(
    g0_conj: &GriddedFunction,
    a_matrix: &[Vec<f64>],
    b: &[f64],
    y: &[f64],
) -> Result<ExtReal, LagrangianError> {
    let n = g0_conj.grid().dim();
    debug_assert!(a_matrix.iter().all(|row| row.len() == n));
    debug_assert_eq!(a_matrix.len(), y.len());
    let mut arg = vec![0.0; n];
    for (row, yi) in a_matrix.iter().zip(y) {
        for (k, a) in row.iter().enumerate() {
            arg[k] -= a * yi;
        }
    }
    let by: f64 = b.iter().zip(y).map(|(a, c)| a * c).sum();
    Ok(ExtReal::new(-by) - g0_conj.interpolate(&arg)?)
}

/// Outcome of a weak-duality audit of a tabulated dual function.
#[derive(Clone, Debug)]
pub struct WeakDualityReport {
    pub pass: bool,
    /// `sup psi - inf phi`, or 0 when nothing is comparable.
    pub max_violation: f64,
    pub sup_psi: ExtReal,
    pub inf_phi: ExtReal,
    /// Set when the comparison was vacuous (`inf phi = +inf`).
    pub degenerate: bool,
}

/// Verifies `psi(y) <= inf phi + tol` over the tabulated multipliers.
pub fn weak_duality_check(psi: &DualFunction, inf_phi: ExtReal, tol: f64) -> WeakDualityReport {
    let sup_psi = psi.sup();
    if inf_phi == ExtReal::PosInf {
        return WeakDualityReport {
            pass: true,
            max_violation: 0.0,
            sup_psi,
            inf_phi,
            degenerate: true,
        };
    }
    let violation = match (sup_psi, inf_phi) {
        (ExtReal::Finite(s), ExtReal::Finite(p)) => s - p,
        (ExtReal::NegInf, _) => f64::NEG_INFINITY,
        (ExtReal::PosInf, _) => f64::INFINITY,
        (ExtReal::Finite(_), ExtReal::NegInf) => f64::INFINITY,
        (_, ExtReal::PosInf) => unreachable!("handled above"),
    };
    WeakDualityReport {
        pass: violation <= tol,
        max_violation: violation,
        sup_psi,
        inf_phi,
        degenerate: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::ExtReal;
    use crate::grid::Axis;
    use crate::rockafellian::indicator_nonpositive;
    use std::sync::Arc;

    fn cubic_inner(x: f64) -> f64 {
        x * x * x - x * x - x + 1.0
    }

    fn cubic_composite() -> RockafellianModel {
        RockafellianModel::composite(
            1,
            Arc::new(|x: &[f64]| x[0].abs() <= 2.0),
            Arc::new(|x: &[f64]| -x[0]),
            vec![Arc::new(|x: &[f64]| cubic_inner(x[0]))],
            Arc::new(indicator_nonpositive),
        )
    }

    /// The analytic conjugate of the nonpositive-orthant indicator.
    fn h_conj_table() -> GriddedFunction {
        GriddedFunction::sample(GridSpec::line(-3.0, 3.0, 0.05).unwrap(), |y| {
            if y[0] >= 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .unwrap()
    }

    #[test]
    fn composite_closed_form_matches_numeric_at_feasible_point() {
        let f = cubic_composite();
        let table = h_conj_table();
        let u_grid = GridSpec::line(-4.0, 4.0, 0.001).unwrap();
        for y in [0.0, 0.5, 1.0, 2.0] {
            let closed = lagrangian_composite_closed(&f, &table, &[1.0], &[y]).unwrap();
            let numeric = lagrangian_numeric(&f, &[1.0], &[y], &u_grid).unwrap();
            // l(1, y) = -1 + y * G(1) = -1 for every y >= 0.
            assert_eq!(closed, ExtReal::Finite(-1.0));
            let nv = numeric.effective().finite().unwrap();
            assert!((nv + 1.0).abs() < 1e-9, "numeric {nv} at y {y}");
        }
    }

    #[test]
    fn negative_multiplier_drives_the_tilt_unbounded() {
        let f = cubic_composite();
        let u_grid = GridSpec::line(-4.0, 4.0, 0.01).unwrap();
        let numeric = lagrangian_numeric(&f, &[1.0], &[-0.5], &u_grid).unwrap();
        assert!(numeric.boundary_suspect);
        assert_eq!(numeric.effective(), ExtReal::NegInf);
        let closed = lagrangian_composite_closed(&f, &h_conj_table(), &[1.0], &[-0.5]).unwrap();
        assert_eq!(closed, ExtReal::NegInf);
    }

    #[test]
    fn indicator_zero_augmentation_pins_the_lagrangian_to_the_objective() {
        let f = cubic_composite()
            .augment(crate::rockafellian::Augmentation::IndicatorZero)
            .unwrap();
        let u_grid = GridSpec::line(-2.0, 2.0, 0.25).unwrap();
        for (x, y) in [(1.0, 0.0), (1.0, 3.0), (-1.5, -2.0)] {
            let numeric = lagrangian_numeric(&f, &[x], &[y], &u_grid).unwrap();
            assert_eq!(numeric.effective(), f.eval(&[0.0], &[x]));
        }
    }

    #[test]
    fn ambiguity_closed_form_theta_zero() {
        let model = RockafellianModel::ambiguity(
            1,
            Arc::new(|_: &[f64]| ExtReal::ZERO),
            vec![
                Arc::new(|x: &[f64]| ExtReal::new(x[0] * x[0])),
                Arc::new(|x: &[f64]| ExtReal::new((x[0] - 1.0) * (x[0] - 1.0))),
            ],
            vec![0.5, 0.5],
            0.0,
        )
        .unwrap();
        let v = lagrangian_ambiguity_closed(&model, &[0.0], &[1.0, 1.0]).unwrap();
        // 0.5 * min(0, 1) + 0.5 * min(1, 1) = 0.5
        assert_eq!(v, ExtReal::Finite(0.5));
    }

    #[test]
    fn ambiguity_closed_form_low_branch_is_plain_weighting() {
        let model = RockafellianModel::ambiguity(
            1,
            Arc::new(|_: &[f64]| ExtReal::ZERO),
            vec![Arc::new(|x: &[f64]| ExtReal::new(x[0]))],
            vec![1.0],
            2.0,
        )
        .unwrap();
        // g(x) = 0.3 < y = 1: h = p * g.
        let v = lagrangian_ambiguity_closed(&model, &[0.3], &[1.0]).unwrap();
        assert_eq!(v, ExtReal::Finite(0.3));
    }

    #[test]
    fn ambiguity_closed_form_branches_join_continuously() {
        let theta = 0.8;
        let model = RockafellianModel::ambiguity(
            1,
            Arc::new(|_: &[f64]| ExtReal::ZERO),
            vec![Arc::new(|x: &[f64]| ExtReal::new(x[0]))],
            vec![1.0],
            theta,
        )
        .unwrap();
        let y = [0.4];
        let at = |g: f64| {
            lagrangian_ambiguity_closed(&model, &[g], &y)
                .unwrap()
                .finite()
                .unwrap()
        };
        // Join at g = y and at g = y + theta * p (p = 1 here).
        let eps = 1e-9;
        assert!((at(0.4 - eps) - at(0.4 + eps)).abs() < 1e-7);
        let top = 0.4 + theta;
        assert!((at(top - eps) - at(top + eps)).abs() < 1e-7);
    }

    #[test]
    fn ambiguity_closed_form_handles_zero_weight_components() {
        let model = RockafellianModel::ambiguity(
            1,
            Arc::new(|_: &[f64]| ExtReal::ZERO),
            vec![
                Arc::new(|x: &[f64]| ExtReal::new(x[0])),
                Arc::new(|_: &[f64]| ExtReal::Finite(100.0)),
            ],
            vec![1.0, 0.0],
            1.0,
        )
        .unwrap();
        // The zero-weight component contributes nothing on either branch.
        for g_probe in [-2.0, 0.0, 3.0] {
            let v = lagrangian_ambiguity_closed(&model, &[g_probe], &[5.0, 0.1]).unwrap();
            let v = v.finite().unwrap();
            let direct = if g_probe < 5.0 { g_probe } else { 0.5 + 5.0 };
            assert!((v - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn splitting_closed_form_half_square() {
        let model = RockafellianModel::splitting(
            1,
            vec![Arc::new(|z: &[f64]| ExtReal::new(0.5 * z[0] * z[0]))],
            vec![1.0],
        )
        .unwrap();
        let conj = GriddedFunction::sample(GridSpec::line(-3.0, 3.0, 0.01).unwrap(), |y| {
            0.5 * y[0] * y[0]
        })
        .unwrap();
        let v = lagrangian_splitting_closed(&model, &[0.0], &[1.0], std::slice::from_ref(&conj))
            .unwrap()
            .finite()
            .unwrap();
        assert!((v + 0.5).abs() < 1e-9);

        // y = 0: -sum p_i g_i*(0) = sum p_i inf g_i = 0 here.
        let v0 = lagrangian_splitting_closed(&model, &[0.7], &[0.0], &[conj])
            .unwrap()
            .finite()
            .unwrap();
        assert!(v0.abs() < 1e-12);
    }

    #[test]
    fn splitting_closed_form_rejects_zero_weights() {
        let model = RockafellianModel::splitting(
            1,
            vec![
                Arc::new(|z: &[f64]| ExtReal::new(z[0] * z[0])),
                Arc::new(|z: &[f64]| ExtReal::new(z[0] * z[0])),
            ],
            vec![1.0, 0.0],
        )
        .unwrap();
        let conj = GriddedFunction::sample(GridSpec::line(-1.0, 1.0, 0.1).unwrap(), |y| {
            0.25 * y[0] * y[0]
        })
        .unwrap();
        let err = lagrangian_splitting_closed(&model, &[0.0], &[0.0, 0.0], &[conj.clone(), conj]);
        assert!(matches!(err, Err(LagrangianError::ZeroWeight(1))));
    }

    #[test]
    fn dual_of_cubic_composite() {
        let f = cubic_composite();
        let y_grid = GridSpec::new(vec![Axis {
            lo: 0.0,
            hi: 2.0,
            steps: 21,
        }])
        .unwrap();
        let u_grid = GridSpec::line(-10.0, 10.0, 0.05).unwrap();
        let x_grid = GridSpec::line(-2.0, 2.0, 0.01).unwrap();
        let psi = dual_numeric(&f, y_grid, &u_grid, &x_grid).unwrap();
        // psi(0) = min over x of -x = -2.
        let psi0 = psi.table.value_at(&[0.0]).unwrap().finite().unwrap();
        assert!((psi0 + 2.0).abs() < 1e-9);
        // Weak duality against inf phi = -1.
        let report = weak_duality_check(&psi, ExtReal::Finite(-1.0), 1e-9);
        assert!(report.pass, "violation {}", report.max_violation);
    }

    #[test]
    fn dual_of_indicator_zero_augmentation_is_constant() {
        let f = cubic_composite()
            .augment(crate::rockafellian::Augmentation::IndicatorZero)
            .unwrap();
        let y_grid = GridSpec::line(-2.0, 2.0, 0.5).unwrap();
        let u_grid = GridSpec::line(-1.0, 1.0, 0.25).unwrap();
        let x_grid = GridSpec::line(-2.0, 2.0, 0.01).unwrap();
        let psi = dual_numeric(&f, y_grid, &u_grid, &x_grid).unwrap();
        for v in psi.table.values() {
            assert_eq!(*v, ExtReal::Finite(-1.0));
        }
    }

    #[test]
    fn affine_dual_closed_form() {
        let g0_conj = GriddedFunction::sample(GridSpec::line(-3.0, 3.0, 0.001).unwrap(), |y| {
            0.5 * y[0] * y[0]
        })
        .unwrap();
        let a = vec![vec![1.0]];
        // g0 = half square: psi(1) = -g0*(-1) = -1/2.
        let v = dual_affine_closed(&g0_conj, &a, &[0.0], &[1.0])
            .unwrap()
            .finite()
            .unwrap();
        assert!((v + 0.5).abs() < 1e-9);
        // b = 1, y = 0: psi(0) = -g0*(0) = 0.
        let v0 = dual_affine_closed(&g0_conj, &a, &[1.0], &[0.0])
            .unwrap()
            .finite()
            .unwrap();
        assert!(v0.abs() < 1e-12);
    }

    #[test]
    fn weak_duality_vacuous_for_everywhere_infinite_objective() {
        let f = RockafellianModel::custom(1, 1, Arc::new(|_: &[f64], _: &[f64]| ExtReal::PosInf));
        let y_grid = GridSpec::line(-1.0, 1.0, 0.5).unwrap();
        let u_grid = GridSpec::line(-1.0, 1.0, 0.5).unwrap();
        let x_grid = GridSpec::line(-1.0, 1.0, 0.5).unwrap();
        let psi = dual_numeric(&f, y_grid, &u_grid, &x_grid).unwrap();
        assert_eq!(psi.sup(), ExtReal::PosInf);
        let report = weak_duality_check(&psi, ExtReal::PosInf, 1e-9);
        assert!(report.pass && report.degenerate);
    }
}
