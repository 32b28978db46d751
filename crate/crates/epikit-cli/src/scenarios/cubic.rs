//! The cubic program: a one-variable objective under a cubic inequality
//! constraint whose feasible set collapses under an upward shift of the
//! constraint. Minimum values and epigraphs of the objectives drift apart
//! while the inequality-family embeddings stay within 1/nu of each other.

use epikit::bounds::{bound_inequality, inequality_epi_norm, InequalityInput};
use epikit::cloud::{excess_truncated_into, truncated_hausdorff, SpatialIndex};
use epikit::extreal::ExtReal;
use epikit::grid::{fit_rate, Axis, EpiCloudParams, GridSpec, GriddedFunction, Orientation};
use epikit::norm::NormSpec;
use epikit::rockafellian::RockafellianModel;

use crate::config::{ConfigError, Resolved};
use crate::emit::SweepResult;
use crate::scenarios::common::shifted;

pub const ID: &str = "cubic-nlp";
pub const DESCRIPTION: &str = "cubic inequality program: objective epigraphs stay far apart under \
     a 1/nu constraint shift while the embedding epigraphs converge at rate 1/nu";
pub const CHECKS: &[&str] = &["infima", "profiles", "bounds"];
pub const FUNCTIONS: &[(&str, &str)] = &[("g0", "poly:0,-1"), ("g1", "poly:1,-1,-1,1")];

/// Objective table `g0 + i_(-inf,0](g1 + shift)` on the box grid.
fn objective_table(
    cfg: &Resolved,
    shift: f64,
    grid: GridSpec,
) -> Result<GriddedFunction, ConfigError> {
    let g0 = cfg.function("g0")?;
    let g1 = cfg.function("g1")?;
    let g0 = g0.func();
    let g1s = shifted(&g1, shift);
    Ok(GriddedFunction::sample_ext(grid, move |x| {
        let feasible = g1s(x) <= ExtReal::ZERO;
        if feasible {
            g0(x)
        } else {
            ExtReal::PosInf
        }
    }))
}

fn embedding(cfg: &Resolved, shift: f64) -> Result<RockafellianModel, ConfigError> {
    let g0 = cfg.function("g0")?;
    let g1 = cfg.function("g1")?;
    Ok(RockafellianModel::inequality(
        1,
        g0.func(),
        vec![shifted(&g1, shift)],
    ))
}

pub fn run(cfg: &Resolved) -> Result<SweepResult, ConfigError> {
    let mut out = SweepResult::new(ID);
    let h = cfg.grid_step;
    let rho = cfg.rho;
    let x_table_grid = GridSpec::line(-2.0, 2.0, h)?;

    if cfg.check_enabled("infima") {
        let phi = objective_table(cfg, 0.0, x_table_grid.clone())?;
        let (inf, argmin) = phi.infimum_argmin(0.0);
        out.push_check(
            None,
            "inf.phi",
            ExtReal::new((inf.to_f64() + 1.0).abs()),
            ExtReal::ZERO,
            0.01,
        );
        let argmin_spread = argmin
            .iter_points()
            .map(|p| (p[0] - 1.0).abs())
            .fold(0.0f64, f64::max);
        out.push_verdict(
            None,
            "argmin.phi",
            argmin_spread,
            0.0,
            0.01,
            !argmin.is_empty() && argmin_spread <= 0.01,
        );
        for &nu in &cfg.nu_list {
            let phi_nu = objective_table(cfg, 1.0 / nu as f64, x_table_grid.clone())?;
            let (inf_nu, _) = phi_nu.infimum_argmin(0.0);
            // Pass when the perturbed minimum sits at or above 1.
            out.push_check(
                Some(nu),
                "inf.phi_nu.above_one",
                ExtReal::Finite(1.0),
                inf_nu,
                1e-9,
            );
        }
    }

    let mut profile_entries: Vec<(u32, ExtReal)> = Vec::new();
    let mut bound_rows: Vec<(u32, epikit::bounds::BoundReport)> = Vec::new();

    if cfg.check_enabled("profiles") || cfg.check_enabled("bounds") {
        // Probe grids for the embedding epigraphs. The shift axes are
        // deliberately coarse (matched columns share them exactly); the
        // constraint-offset axis is fine since the distance lives there.
        let w_step = 0.625 * h;
        let u_grid = GridSpec::new(vec![
            Axis {
                lo: -1.0,
                hi: 1.0,
                steps: 3,
            },
            Axis {
                lo: -1.0,
                hi: 1.0,
                steps: 3,
            },
            Axis {
                lo: -(rho + 0.2),
                hi: rho + 0.2,
                steps: (2.0 * (rho + 0.2) / w_step).round() as usize + 1,
            },
        ])?;
        let x_grid = GridSpec::line(-(rho + 0.2), rho + 0.2, 10.0 * h)?;
        let alpha_step = 0.5;
        let params = EpiCloudParams {
            alpha_lo: -(rho + 1.0),
            alpha_hi: rho + 1.0,
            alpha_step,
        };
        let norm = inequality_epi_norm(1, 1);

        let phi_params = EpiCloudParams {
            alpha_lo: -(rho + 1.0),
            alpha_hi: rho + 1.0,
            alpha_step: 5.0 * h,
        };
        let phi = objective_table(cfg, 0.0, x_table_grid.clone())?;
        let phi_cloud = phi.epi_cloud(phi_params, Orientation::Epi)?;
        let phi_norm = NormSpec::epi(1);

        let f = embedding(cfg, 0.0)?;
        let f_cloud = f.epi_cloud(&u_grid, &x_grid, params);
        let f_index = SpatialIndex::build(&f_cloud);

        // Component tables for the inequality bound, wide enough for the
        // doubled radius plus the build margin.
        let comp_grid = GridSpec::line(-(2.0 * rho + 1.2), 2.0 * rho + 1.2, h)?;
        let g0_fn = cfg.function("g0")?;
        let g1_fn = cfg.function("g1")?;
        let g0_table = {
            let f0 = g0_fn.func();
            GriddedFunction::sample_ext(comp_grid.clone(), move |x| f0(x))
        };
        let g1_table = {
            let f1 = g1_fn.func();
            GriddedFunction::sample_ext(comp_grid.clone(), move |x| f1(x))
        };

        for &nu in &cfg.nu_list {
            let shift = 1.0 / nu as f64;
            let f_nu = embedding(cfg, shift)?;

            if cfg.check_enabled("profiles") {
                let phi_nu = objective_table(cfg, shift, x_table_grid.clone())?;
                let phi_nu_cloud = phi_nu.epi_cloud(phi_params, Orientation::Epi)?;
                let d_phi = truncated_hausdorff(&phi_cloud, &phi_nu_cloud, rho, &phi_norm)
                    .expect("matching dims");
                // The objectives must stay far apart: 0.5 <= d_phi.
                out.push_check(
                    Some(nu),
                    "profile.phi.stays_large",
                    ExtReal::new(0.5),
                    d_phi,
                    0.0,
                );

                let f_nu_cloud = f_nu.epi_cloud(&u_grid, &x_grid, params);
                let f_nu_index = SpatialIndex::build(&f_nu_cloud);
                let d_f = excess_truncated_into(&f_cloud, rho, &f_nu_index, &norm)
                    .expect("matching dims")
                    .max(
                        excess_truncated_into(&f_nu_cloud, rho, &f_index, &norm)
                            .expect("matching dims"),
                    );
                out.push_check(
                    Some(nu),
                    "profile.f",
                    d_f,
                    ExtReal::new(1.0 / nu as f64),
                    0.02,
                );
                profile_entries.push((nu, d_f));
            }

            if cfg.check_enabled("bounds") {
                let g1_nu_table = {
                    let f1 = shifted(&g1_fn, shift);
                    GriddedFunction::sample_ext(comp_grid.clone(), move |x| f1(x))
                };
                let report = bound_inequality(
                    &InequalityInput {
                        f: &f,
                        f_nu: &f_nu,
                        g_pairs: vec![(&g0_table, &g0_table), (&g1_table, &g1_nu_table)],
                        u_grid: &u_grid,
                        x_grid: &x_grid,
                        alpha_step,
                        component_alpha_step: 5.0 * h,
                        // Vertical sampling dominates the cloud error on the
                        // left; the component distance enters with weight 1.
                        tol: 2.0 * alpha_step + 2.0 * 5.0 * h,
                    },
                    rho,
                )
                .expect("consistent instance");
                bound_rows.push((nu, report));
            }
        }
    }

    if cfg.check_enabled("profiles") && !profile_entries.is_empty() {
        let rate_tol = 2.0 * 0.625 * h;
        match fit_rate(&profile_entries, rate_tol) {
            Some(rate) => {
                out.push_verdict(
                    None,
                    "profile.f.rate",
                    rate,
                    -1.0,
                    0.15,
                    (rate + 1.0).abs() <= 0.15,
                );
            }
            None => out.push_error(None, "profile.f.rate", "no usable entries for the rate fit"),
        }
    }
    for (nu, report) in &bound_rows {
        out.push_bound(Some(*nu), report);
    }
    Ok(out)
}
