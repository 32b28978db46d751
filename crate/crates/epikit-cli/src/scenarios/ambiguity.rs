//! Reweighted two-component objective over the probability simplex: weight
//! drift is tamed by the reweighting embedding, which is strictly exact
//! under the constructive support vector, has a piecewise closed-form
//! Lagrangian, and keeps its duals within the epigraph-distance budget.

use epikit::bounds::{
    bound_ambiguity, bound_dual, bound_lagrangian, with_alpha, AmbiguityInput, DualBoundInput,
    DualBoundMode, LagrangianBoundInput,
};
use epikit::cloud::truncated_hausdorff;
use epikit::grid::{Axis, EpiCloudParams, GridSpec, Orientation};
use epikit::lagrangian::{
    dual_numeric, lagrangian_ambiguity_closed, lagrangian_numeric, weak_duality_check,
};
use epikit::norm::NormSpec;
use epikit::rockafellian::{
    ambiguity_support_vector, check_exactness, tightness_diagnostic, ExactnessParams, ExtFn,
    RockafellianModel, TightnessMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, Resolved};
use crate::emit::SweepResult;
use crate::scenarios::common::{dyadic_zero_grid, grid_cloud, product_grid};

pub const ID: &str = "ambiguity";
pub const DESCRIPTION: &str = "simplex-reweighted pair of quadratics: weight drift, exact support \
     vector, closed-form Lagrangian, and dual stability";
pub const CHECKS: &[&str] = &[
    "bounds",
    "exactness",
    "closed-forms",
    "duality",
    "tightness",
    "surrogates",
];
pub const FUNCTIONS: &[(&str, &str)] = &[
    ("g0", "const:0"),
    ("g1", "poly:0,0,1"),
    ("g2", "poly:1,-2,1"),
];

fn weights(nu: Option<u32>) -> Vec<f64> {
    match nu {
        None => vec![0.5, 0.5],
        Some(nu) => vec![0.5 + 0.5 / nu as f64, 0.5 - 0.5 / nu as f64],
    }
}

fn build(cfg: &Resolved, p: Vec<f64>, theta: f64) -> Result<RockafellianModel, ConfigError> {
    let components: Vec<ExtFn> = vec![cfg.function("g1")?.func(), cfg.function("g2")?.func()];
    Ok(
        RockafellianModel::ambiguity(1, cfg.function("g0")?.func(), components, p, theta)
            .expect("weights lie in the simplex"),
    )
}

pub fn run(cfg: &Resolved) -> Result<SweepResult, ConfigError> {
    let mut out = SweepResult::new(ID);
    let rho = cfg.rho;
    let f = build(cfg, weights(None), 0.0)?;

    // Shared probe grids: the perturbation is confined to [-p, 0].
    let u_cloud_grid = product_grid(&dyadic_zero_grid(-1.25, 0.25, 1.0 / 16.0), 2);
    let u_scan_grid = product_grid(&dyadic_zero_grid(-1.25, 0.25, 1.0 / 32.0), 2);
    let x_grid = GridSpec::line(-2.2, 2.2, 2.0 * cfg.grid_step)?;

    if cfg.check_enabled("closed-forms") {
        if let Err(message) = validate_closed_form(cfg, &f) {
            out.push_error(None, "closedform.ambiguity", &message);
            return Ok(out);
        }
        out.push_verdict(None, "closedform.ambiguity", 0.0, 0.0, 5e-3, true);
    }

    if cfg.check_enabled("bounds") {
        for &nu in &cfg.nu_list {
            let f_nu = build(cfg, weights(Some(nu)), 0.0)?;
            let report = bound_ambiguity(
                &AmbiguityInput {
                    f: &f,
                    f_nu: &f_nu,
                    eta: 0.0,
                    u_grid: &u_cloud_grid,
                    x_grid: &x_grid,
                    alpha_step: 0.2,
                    tol: 2.0 * 0.2,
                },
                rho,
            )
            .expect("ambiguity instance");
            out.push_bound(Some(nu), &report);

            // Proximal-weight drift with fixed weights.
            let f_theta = build(cfg, weights(None), 0.5)?;
            let f_theta_nu = build(cfg, weights(None), 0.5 + 1.0 / nu as f64)?;
            let report = bound_ambiguity(
                &AmbiguityInput {
                    f: &f_theta,
                    f_nu: &f_theta_nu,
                    eta: 0.0,
                    u_grid: &u_cloud_grid,
                    x_grid: &x_grid,
                    alpha_step: 0.2,
                    tol: 2.0 * 0.2,
                },
                rho,
            )
            .expect("ambiguity instance");
            out.push_bound_as(Some(nu), "bound.ambiguity.theta", &report);

            let report = bound_lagrangian(
                &LagrangianBoundInput {
                    f: &f,
                    f_nu: &f_nu,
                    y: vec![0.8, 0.6],
                    y_nu: vec![0.8 + 0.2 / nu as f64, 0.6 - 0.2 / nu as f64],
                    u_grid: &u_scan_grid,
                    x_grid: &GridSpec::line(-(rho + 1.0), rho + 1.0, 2.0 * cfg.grid_step)?,
                    f_u_grid: &u_cloud_grid,
                    f_x_grid: &GridSpec::line(-5.0, 5.0, 0.05)?,
                    alpha_step: 0.25,
                    tol: 2.0 * 0.25 + 2.0 * (1.0 + 1.2) * 0.25,
                },
                rho,
            )
            .expect("ambiguity instance");
            out.push_bound(Some(nu), &report);

            let report = bound_dual(
                &DualBoundInput {
                    f: &f,
                    f_nu: &f_nu,
                    y_grid: GridSpec::uniform_box(&[(-0.5, 1.5), (-0.5, 1.5)], 0.1)?,
                    u_grid: &u_scan_grid,
                    x_grid: &GridSpec::line(-4.0, 4.0, 0.04)?,
                    f_u_grid: &u_cloud_grid,
                    f_x_grid: &GridSpec::line(-5.0, 5.0, 0.05)?,
                    alpha_step: 0.4,
                    mode: DualBoundMode::B,
                    tol: 2.0 * 0.4 + 2.0 * (1.0 + rho) * 0.4,
                },
                rho,
            )
            .expect("ambiguity instance");
            out.push_bound(Some(nu), &report);
        }
    }

    let x_probe_grid = GridSpec::line(-2.0, 2.0, cfg.grid_step)?;
    let x_probe = grid_cloud(&x_probe_grid, "x");
    if cfg.check_enabled("exactness") {
        let support = ambiguity_support_vector(&f, 0.0, &x_probe).expect("finite baseline");
        let u_exact = GridSpec::new(vec![
            Axis {
                lo: -0.75,
                hi: 0.25,
                steps: 65,
            },
            Axis {
                lo: -0.75,
                hi: 0.25,
                steps: 65,
            },
        ])?;
        let report = check_exactness(
            &f,
            &support,
            &grid_cloud(&u_exact, "u"),
            &x_probe,
            ExactnessParams {
                tol: 1e-6,
                strict_margin: 1e-9,
            },
        )
        .expect("valid probes");
        out.push_verdict(
            None,
            "exactness.support",
            -report.min_slack.to_f64(),
            0.0,
            1e-6,
            report.exact,
        );

        // The support vector also closes the duality gap: the dual value it
        // attains equals the minimum value.
        let (inf_phi, _) = epikit::grid::GriddedFunction::sample_ext(x_probe_grid.clone(), {
            let f = f.clone();
            move |x| f.objective(x)
        })
        .infimum_argmin(0.0);
        let psi_at_support = crate::scenarios::common::dual_value_at(
            &f,
            &support,
            &product_grid(&dyadic_zero_grid(-1.25, 0.25, 1.0 / 64.0), 2),
            &x_probe_grid,
        );
        out.push_verdict(
            None,
            "weakdual.exact",
            (psi_at_support.to_f64() - inf_phi.to_f64()).abs(),
            0.0,
            1e-9,
            (psi_at_support.to_f64() - inf_phi.to_f64()).abs() <= 1e-9,
        );
    }

    if cfg.check_enabled("duality") {
        let y_grid = GridSpec::uniform_box(&[(-0.5, 1.5), (-0.5, 1.5)], 0.1)?;
        let dual_u = product_grid(&dyadic_zero_grid(-1.25, 0.25, 1.0 / 32.0), 2);
        for &nu in &cfg.nu_list {
            let f_nu = build(cfg, weights(Some(nu)), 0.0)?;
            let psi =
                dual_numeric(&f_nu, y_grid.clone(), &dual_u, &x_probe_grid).expect("valid grids");
            let (inf_phi_nu, _) =
                epikit::grid::GriddedFunction::sample_ext(x_probe_grid.clone(), {
                    let f_nu = f_nu.clone();
                    move |x| f_nu.objective(x)
                })
                .infimum_argmin(0.0);
            let report = weak_duality_check(&psi, inf_phi_nu, 1e-9);
            out.push_verdict(
                Some(nu),
                "weakdual",
                report.sup_psi.to_f64(),
                report.inf_phi.to_f64(),
                1e-9,
                report.pass,
            );
        }
    }

    if cfg.check_enabled("tightness") || cfg.check_enabled("surrogates") {
        let models: Vec<RockafellianModel> = cfg
            .nu_list
            .iter()
            .map(|&nu| build(cfg, weights(Some(nu)), 0.0))
            .collect::<Result<_, _>>()?;
        let y_seq: Vec<Vec<f64>> = cfg
            .nu_list
            .iter()
            .map(|&nu| vec![0.8 + 0.2 / nu as f64, 0.6 - 0.2 / nu as f64])
            .collect();
        let x_seq: Vec<Vec<f64>> = cfg.nu_list.iter().map(|_| vec![0.5]).collect();
        let tight = tightness_diagnostic(
            &models,
            &y_seq,
            &x_seq,
            &u_scan_grid,
            &TightnessMode::Empirical { margin: 0.1 },
        )
        .expect("consistent sequences");
        if cfg.check_enabled("tightness") {
            out.push_verdict(
                None,
                "tightness.empirical",
                tight
                    .entries
                    .iter()
                    .filter_map(|e| e.argmin_radius)
                    .fold(0.0f64, f64::max),
                tight.box_radius - 0.1,
                0.0,
                tight.pass,
            );
        }
        if cfg.check_enabled("surrogates") {
            if !tight.pass {
                out.push_error(None, "surrogate", "tightness diagnostic failed");
                return Ok(out);
            }
            run_surrogates(cfg, &mut out, &f, &models, &y_seq)?;
        }
    }
    Ok(out)
}

/// Validates the piecewise closed form against the brute-force scan on
/// seeded probes; a failure aborts the scenario.
fn validate_closed_form(cfg: &Resolved, f_theta0: &RockafellianModel) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let u_scan = GridSpec::uniform_box(&[(-0.55, 0.01), (-0.55, 0.01)], 0.002).expect("valid box");
    for theta in [0.0, 0.5] {
        let model = if theta == 0.0 {
            f_theta0.clone()
        } else {
            build(cfg, weights(None), theta).map_err(|e| e.to_string())?
        };
        for _ in 0..20 {
            let x = [rng.gen_range(-1.5..1.5)];
            let y = [rng.gen_range(-0.5..1.5), rng.gen_range(-0.5..1.5)];
            let closed = lagrangian_ambiguity_closed(&model, &x, &y)
                .map_err(|e| e.to_string())?
                .to_f64();
            let numeric = lagrangian_numeric(&model, &x, &y, &u_scan)
                .map_err(|e| e.to_string())?
                .raw
                .to_f64();
            if (closed - numeric).abs() > 5e-3 {
                return Err(format!(
                    "closed form {closed} vs numeric {numeric} at x={:?} y={:?} theta={theta}",
                    x, y
                ));
            }
        }
    }
    Ok(())
}

fn run_surrogates(
    cfg: &Resolved,
    out: &mut SweepResult,
    f: &RockafellianModel,
    models: &[RockafellianModel],
    y_seq: &[Vec<f64>],
) -> Result<(), ConfigError> {
    let rho = cfg.rho;
    let x_grid = GridSpec::line(-(rho + 1.0), rho + 1.0, cfg.grid_step)?;
    let alpha_step = 5.0 * cfg.grid_step;
    let params = EpiCloudParams {
        alpha_lo: -(rho + 1.0),
        alpha_hi: rho + 1.0,
        alpha_step,
    };
    let surr_tol = 2.0 * alpha_step;
    let norm = with_alpha(&NormSpec::l2(1));
    let y_base = vec![0.8, 0.6];
    // The closed form (validated against the scan above) tabulates the
    // Lagrangians exactly at weights that no scan grid node can hit.
    let closed_table = |model: &RockafellianModel, y: &[f64]| {
        let model = model.clone();
        let y = y.to_vec();
        epikit::grid::GriddedFunction::sample_ext(x_grid.clone(), move |x| {
            lagrangian_ambiguity_closed(&model, x, &y).expect("ambiguity family")
        })
    };
    let l_base = closed_table(f, &y_base);
    let epi_l = l_base
        .epi_cloud(params, Orientation::Epi)
        .expect("valid params");

    let y_grid = GridSpec::uniform_box(&[(-0.5, 1.5), (-0.5, 1.5)], 0.05)?;
    let dual_u = product_grid(&dyadic_zero_grid(-1.25, 0.25, 1.0 / 32.0), 2);
    let dual_x = GridSpec::line(-4.0, 4.0, 0.02)?;
    let psi_base = dual_numeric(f, y_grid.clone(), &dual_u, &dual_x).expect("valid grids");
    let hypo_psi = psi_base
        .table
        .epi_cloud(params, Orientation::Hypo)
        .expect("valid params");
    let hypo_norm = with_alpha(&NormSpec::l2(2));

    let mut prev_l = f64::INFINITY;
    let mut prev_psi = f64::INFINITY;
    let mut last_l = f64::NAN;
    let mut last_psi = f64::NAN;
    for (k, &nu) in cfg.nu_list.iter().enumerate() {
        let l_nu = closed_table(&models[k], &y_seq[k]);
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

        let psi_nu =
            dual_numeric(&models[k], y_grid.clone(), &dual_u, &dual_x).expect("valid grids");
        let hypo_nu = psi_nu
            .table
            .epi_cloud(params, Orientation::Hypo)
            .expect("valid params");
        let d_psi = truncated_hausdorff(&hypo_nu, &hypo_psi, rho, &hypo_norm)
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
    Ok(())
}
