//! Composite embedding of the cubic program: the constraint shift moves
//! into the perturbation argument, and the whole chain of substitute
//! objects — tilted embeddings, Lagrangians, dual functions — converges at
//! the 1/nu rate even though the objectives themselves do not.

use epikit::bounds::{
    bound_composite, bound_lagrangian, bound_tilted, tabulate_lagrangian, with_alpha,
    CompositeInput, LagrangianBoundInput, TiltedInput,
};
use epikit::cloud::{truncated_hausdorff, PointCloud};
use epikit::grid::{EpiCloudParams, GridSpec, GriddedFunction, Orientation};
use epikit::lagrangian::{dual_numeric, weak_duality_check};
use epikit::norm::NormSpec;
use epikit::rockafellian::{
    check_exactness, tightness_diagnostic, ExactnessParams, RockafellianModel, TightnessMode,
};

use crate::config::{ConfigError, Resolved};
use crate::emit::SweepResult;
use crate::scenarios::common::{composite_1d, composite_objective_table, grid_cloud};

pub const ID: &str = "cubic-composite";
pub const DESCRIPTION: &str = "composite embedding of the cubic program: component discrepancies \
     control tilted, Lagrangian, and dual approximations";
pub const CHECKS: &[&str] = &["bounds", "exactness", "duality", "tightness", "surrogates"];
pub const FUNCTIONS: &[(&str, &str)] = &[
    ("g0", "poly:0,-1"),
    ("g1", "poly:1,-1,-1,1"),
    ("h", "ind_nonpos"),
];

const HALF_WIDTH: f64 = 2.0;

fn model(cfg: &Resolved, shift: f64) -> Result<RockafellianModel, ConfigError> {
    Ok(composite_1d(
        HALF_WIDTH,
        &cfg.function("g0")?,
        &cfg.function("g1")?,
        &cfg.function("h")?,
        shift,
    ))
}

pub fn run(cfg: &Resolved) -> Result<SweepResult, ConfigError> {
    let mut out = SweepResult::new(ID);
    let h = cfg.grid_step;
    let rho = cfg.rho;
    let f = model(cfg, 0.0)?;

    if cfg.check_enabled("bounds") {
        run_bounds(cfg, &mut out, &f)?;
    }
    if cfg.check_enabled("exactness") {
        run_exactness(&mut out, &f)?;
    }
    if cfg.check_enabled("duality") {
        run_duality(cfg, &mut out)?;
    }
    if cfg.check_enabled("tightness") || cfg.check_enabled("surrogates") {
        run_tightness_and_surrogates(cfg, &mut out, &f, h, rho)?;
    }
    Ok(out)
}

fn run_bounds(
    cfg: &Resolved,
    out: &mut SweepResult,
    f: &RockafellianModel,
) -> Result<(), ConfigError> {
    let h2 = (4.0 * cfg.grid_step).min(0.04);
    let rho = cfg.rho;
    let g0 = cfg.function("g0")?;
    let g1 = cfg.function("g1")?;
    let h_fn = cfg.function("h")?;

    // Constraint set, component tables, outer-function tables.
    let x_set_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, cfg.grid_step)?;
    let x_cloud = grid_cloud(&x_set_grid, "X");
    let table_grid = GridSpec::line(-(rho + 0.2), rho + 0.2, cfg.grid_step)?;
    let g0_table = {
        let f0 = g0.func();
        GriddedFunction::sample_ext(table_grid.clone(), move |x| f0(x))
    };
    let g1_table = {
        let f1 = g1.func();
        GriddedFunction::sample_ext(table_grid.clone(), move |x| f1(x))
    };

    // The outer function's tables live on the mapping's range, which the
    // enlarged radius must cover.
    let range_bound = 12.2;
    let h_grid = GridSpec::line(-range_bound, range_bound, 0.02)?;
    let h_table = {
        let hf = h_fn.func();
        GriddedFunction::sample_ext(h_grid.clone(), move |z| hf(z))
    };

    let u_grid = GridSpec::line(-(rho + 1.2), rho + 1.2, h2)?;
    let x_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, h2)?;

    // Tilted-embedding probe grids must reach the enlarged radius.
    let y = vec![1.0];
    let rho_bar = rho * 2.0;
    let tilt_u_grid = GridSpec::line(-(rho_bar + 1.3), rho_bar + 1.3, 0.08)?;
    let tilt_x_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, 0.08)?;

    // Lagrangian bound at a smaller radius keeps the attainment radius (and
    // with it the enlarged probe ball) modest.
    let lag_rho = 1.0;
    let lag_u_grid = GridSpec::line(-3.0, 3.0, cfg.grid_step)?;
    let lag_x_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, cfg.grid_step)?;
    let lag_f_u_grid = GridSpec::line(-3.8, 3.8, h2)?;
    let lag_f_x_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, h2)?;

    for &nu in &cfg.nu_list {
        let shift = 1.0 / nu as f64;
        let f_nu = model(cfg, shift)?;
        let g1_nu_table = {
            let f1 = crate::scenarios::common::shifted(&g1, shift);
            GriddedFunction::sample_ext(table_grid.clone(), move |x| f1(x))
        };

        let report = bound_composite(
            &CompositeInput {
                f,
                f_nu: &f_nu,
                x_cloud: &x_cloud,
                x_nu_cloud: &x_cloud,
                g_pairs: vec![(&g0_table, &g0_table), (&g1_table, &g1_nu_table)],
                h: &h_table,
                h_nu: &h_table,
                u_grid: &u_grid,
                x_grid: &x_grid,
                alpha_step: 0.2,
                tol: 2.0 * 0.2 + 2.0 * cfg.grid_step + 2.0 * 0.25,
            },
            rho,
        )
        .expect("consistent instance");
        out.push_bound(Some(nu), &report);

        let report = bound_tilted(&TiltedInput {
            f,
            f_nu: &f_nu,
            y: y.clone(),
            y_nu: vec![1.0 + 0.2 * shift],
            rho,
            u_grid: &tilt_u_grid,
            x_grid: &tilt_x_grid,
            alpha_step: 0.25,
            tol: 2.0 * 0.25 + 2.0 * (1.0 + 1.2) * 0.25,
        })
        .expect("consistent instance");
        out.push_bound(Some(nu), &report);

        let report = bound_lagrangian(
            &LagrangianBoundInput {
                f,
                f_nu: &f_nu,
                y: y.clone(),
                y_nu: vec![1.0 + 0.2 * shift],
                u_grid: &lag_u_grid,
                x_grid: &lag_x_grid,
                f_u_grid: &lag_f_u_grid,
                f_x_grid: &lag_f_x_grid,
                alpha_step: 0.2,
                tol: 2.0 * 0.2 + 2.0 * (1.0 + 1.2) * 0.2,
            },
            lag_rho,
        )
        .expect("consistent instance");
        out.push_bound(Some(nu), &report);
    }
    Ok(())
}

/// The plain composite embedding is not exact for any multiplier in the
/// probed range: near zero perturbation its min-value function drops like
/// the square root, faster than any linear minorant.
fn run_exactness(out: &mut SweepResult, f: &RockafellianModel) -> Result<(), ConfigError> {
    let x_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, 5e-4)?;
    let x_probe = grid_cloud(&x_grid, "x");
    let mut u_values: Vec<[f64; 1]> = (0..=400).map(|k| [-1e-4 * k as f64]).collect();
    let mut u = -0.05;
    while u >= -0.5 {
        u_values.push([u]);
        u -= 0.05;
    }
    let u_probe = PointCloud::from_points(1, u_values.iter(), "u").expect("finite");
    let params = ExactnessParams::from_grid_error(5e-4);

    // One min-value profile serves the whole multiplier grid: the slack at
    // (u, y) is delta(u) - delta(0) - <y, u>.
    let deltas = f.min_value_function(&u_probe, &x_probe);
    let baseline = f
        .inf_over_x(&[0.0], &x_probe)
        .finite()
        .expect("finite baseline");
    let mut y = 0.0;
    while y <= 50.0 + 1e-9 {
        let min_slack = (0..u_probe.len())
            .map(|i| deltas[i] - epikit::extreal::ExtReal::new(baseline + y * u_probe.point(i)[0]))
            .min()
            .expect("nonempty probe");
        // The scenario expects refutation: negative slack beyond tolerance.
        out.push_verdict(
            None,
            &format!("exactness.refuted[y={y}]"),
            min_slack.to_f64(),
            -params.tol,
            0.0,
            min_slack < epikit::extreal::ExtReal::new(-params.tol),
        );
        y += 2.5;
    }

    // Restoring exactness by augmentation with the indicator of the origin.
    let f_aug = f
        .augment(epikit::rockafellian::Augmentation::IndicatorZero)
        .expect("valid augmentation");
    let u_grid = crate::scenarios::common::dyadic_zero_grid(-0.5, 0.5, 1.0 / 16.0);
    let report = check_exactness(&f_aug, &[1.0], &grid_cloud(&u_grid, "u"), &x_probe, params)
        .expect("valid probes");
    out.push_verdict(
        None,
        "exactness.strict[indicator-zero]",
        report.min_slack.to_f64(),
        0.0,
        params.tol,
        report.exact && report.strict,
    );
    Ok(())
}

fn run_duality(cfg: &Resolved, out: &mut SweepResult) -> Result<(), ConfigError> {
    let y_grid = GridSpec::line(0.0, 2.0, 0.05)?;
    let u_grid = GridSpec::line(-10.0, 10.0, 0.05)?;
    let x_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, cfg.grid_step)?;
    let phi_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, cfg.grid_step)?;
    let g0 = cfg.function("g0")?;
    let g1 = cfg.function("g1")?;
    let h_fn = cfg.function("h")?;

    for &nu in &cfg.nu_list {
        let shift = 1.0 / nu as f64;
        let f_nu = model(cfg, shift)?;
        let psi = dual_numeric(&f_nu, y_grid.clone(), &u_grid, &x_grid).expect("valid grids");
        let phi_nu =
            composite_objective_table(HALF_WIDTH, &g0, &g1, &h_fn, shift, phi_grid.clone());
        let (inf_phi, _) = phi_nu.infimum_argmin(0.0);
        let report = weak_duality_check(&psi, inf_phi, 1e-9 + 2.0 * cfg.grid_step);
        out.push_verdict(
            Some(nu),
            "weakdual",
            report.sup_psi.to_f64(),
            report.inf_phi.to_f64(),
            1e-9 + 2.0 * cfg.grid_step,
            report.pass,
        );
    }
    Ok(())
}

fn run_tightness_and_surrogates(
    cfg: &Resolved,
    out: &mut SweepResult,
    f: &RockafellianModel,
    h: f64,
    rho: f64,
) -> Result<(), ConfigError> {
    let nu_list = &cfg.nu_list;
    let models: Vec<RockafellianModel> = nu_list
        .iter()
        .map(|&nu| model(cfg, 1.0 / nu as f64))
        .collect::<Result<_, _>>()?;
    let y_seq: Vec<Vec<f64>> = nu_list
        .iter()
        .map(|&nu| vec![1.0 + 0.2 / nu as f64])
        .collect();
    let x_seq: Vec<Vec<f64>> = nu_list
        .iter()
        .map(|&nu| vec![1.0 + 1.0 / nu as f64])
        .collect();
    let u_box = GridSpec::line(-10.5, 10.5, 0.05)?;

    let tight = tightness_diagnostic(
        &models,
        &y_seq,
        &x_seq,
        &u_box,
        &TightnessMode::Empirical { margin: 0.5 },
    )
    .expect("consistent sequences");
    if cfg.check_enabled("tightness") {
        let worst = tight
            .entries
            .iter()
            .filter_map(|e| e.argmin_radius)
            .fold(0.0f64, f64::max);
        out.push_verdict(
            None,
            "tightness.empirical",
            worst,
            tight.box_radius - 0.5,
            0.0,
            tight.pass,
        );
    }

    if cfg.check_enabled("surrogates") {
        if !tight.pass {
            out.push_error(None, "surrogate", "tightness diagnostic failed");
            return Ok(());
        }
        let x_grid = GridSpec::line(-(rho + 1.0), rho + 1.0, h)?;
        let alpha_step = 5.0 * h;
        let params = EpiCloudParams {
            alpha_lo: -(rho + 1.0),
            alpha_hi: rho + 1.0,
            alpha_step,
        };
        let surr_tol = 2.0 * alpha_step;
        let norm = with_alpha(&NormSpec::l2(1));
        let l_base = tabulate_lagrangian(f, &[1.0], &u_box, &x_grid).expect("valid grids");
        let epi_l = l_base
            .epi_cloud(params, Orientation::Epi)
            .expect("valid params");

        let y_grid = GridSpec::line(0.0, 2.0, 0.05)?;
        let dual_u_grid = GridSpec::line(-10.0, 10.0, 0.05)?;
        let dual_x_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, h)?;
        let psi_base =
            dual_numeric(f, y_grid.clone(), &dual_u_grid, &dual_x_grid).expect("valid grids");
        let hypo_psi = psi_base
            .table
            .epi_cloud(params, Orientation::Hypo)
            .expect("valid params");

        let mut prev_l = f64::INFINITY;
        let mut prev_psi = f64::INFINITY;
        let mut last_l = f64::NAN;
        let mut last_psi = f64::NAN;
        for (k, &nu) in nu_list.iter().enumerate() {
            let l_nu =
                tabulate_lagrangian(&models[k], &y_seq[k], &u_box, &x_grid).expect("valid grids");
            let epi_l_nu = l_nu
                .epi_cloud(params, Orientation::Epi)
                .expect("valid params");
            let d_l = truncated_hausdorff(&epi_l_nu, &epi_l, rho, &norm)
                .expect("matching dims")
                .to_f64();
            out.push_verdict(
                Some(nu),
                "surrogate.lagrangian",
                d_l,
                prev_l.min(1e300),
                surr_tol,
                d_l <= prev_l + surr_tol,
            );
            prev_l = d_l;
            last_l = d_l;

            let psi_nu = dual_numeric(&models[k], y_grid.clone(), &dual_u_grid, &dual_x_grid)
                .expect("valid grids");
            let hypo_nu = psi_nu
                .table
                .epi_cloud(params, Orientation::Hypo)
                .expect("valid params");
            let d_psi = truncated_hausdorff(&hypo_nu, &hypo_psi, rho, &norm)
                .expect("matching dims")
                .to_f64();
            out.push_verdict(
                Some(nu),
                "surrogate.dual",
                d_psi,
                prev_psi.min(1e300),
                surr_tol,
                d_psi <= prev_psi + surr_tol,
            );
            prev_psi = d_psi;
            last_psi = d_psi;
        }
        out.push_verdict(
            None,
            "surrogate.lagrangian.final",
            last_l,
            0.0,
            3.0 * surr_tol,
            last_l <= 3.0 * surr_tol,
        );
        out.push_verdict(
            None,
            "surrogate.dual.final",
            last_psi,
            0.0,
            3.0 * surr_tol,
            last_psi <= 3.0 * surr_tol,
        );
    }
    Ok(())
}
