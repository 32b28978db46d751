//! Argument-splitting embedding of a weighted pair of quadratics: per-block
//! shifts absorb both weight drift and component perturbations, with a
//! conjugate-table closed form for the Lagrangian.

use epikit::bounds::{bound_splitting, SplittingInput};
use epikit::grid::{GridSpec, GriddedFunction};
use epikit::lagrangian::{lagrangian_numeric, lagrangian_splitting_closed};
use epikit::rockafellian::{ExtFn, RockafellianModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, Resolved};
use crate::emit::SweepResult;
use crate::scenarios::common::shifted;

pub const ID: &str = "splitting";
pub const DESCRIPTION: &str = "argument-splitting embedding of a weighted pair of quadratics: \
     weight and component drift against per-block shifts";
pub const CHECKS: &[&str] = &["bounds", "closed-forms"];
pub const FUNCTIONS: &[(&str, &str)] = &[("g1", "poly:0,0,0.5"), ("g2", "poly:0.5,-1,0.5")];

fn weights(nu: Option<u32>) -> Vec<f64> {
    match nu {
        None => vec![0.3, 0.7],
        Some(nu) => vec![0.3 + 0.1 / nu as f64, 0.7 - 0.1 / nu as f64],
    }
}

fn build(cfg: &Resolved, p: Vec<f64>, shifts: [f64; 2]) -> Result<RockafellianModel, ConfigError> {
    let gs: Vec<ExtFn> = vec![
        shifted(&cfg.function("g1")?, shifts[0]),
        shifted(&cfg.function("g2")?, shifts[1]),
    ];
    Ok(RockafellianModel::splitting(1, gs, p).expect("weights lie in the simplex"))
}

pub fn run(cfg: &Resolved) -> Result<SweepResult, ConfigError> {
    let mut out = SweepResult::new(ID);
    let rho = cfg.rho.min(1.0);
    let f = build(cfg, weights(None), [0.0, 0.0])?;

    if cfg.check_enabled("closed-forms") {
        if let Err(message) = validate_closed_form(cfg, &f) {
            out.push_error(None, "closedform.splitting", &message);
            return Ok(out);
        }
        out.push_verdict(None, "closedform.splitting", 0.0, 0.0, 2e-2, true);
    }

    if cfg.check_enabled("bounds") {
        // Tables must span the enlarged radius (rho + eta) / beta plus the
        // build margin.
        let table_grid = GridSpec::line(-4.8, 4.8, cfg.grid_step)?;
        let g1_table = {
            let g = cfg.function("g1")?.func();
            GriddedFunction::sample_ext(table_grid.clone(), move |x| g(x))
        };
        let g2_table = {
            let g = cfg.function("g2")?.func();
            GriddedFunction::sample_ext(table_grid.clone(), move |x| g(x))
        };
        let u_grid = GridSpec::uniform_box(&[(-2.2, 2.2), (-2.2, 2.2)], 0.11)?;
        let x_grid = GridSpec::line(-2.2, 2.2, 0.05)?;
        for &nu in &cfg.nu_list {
            let shifts = [1.0 / nu as f64, 0.5 / nu as f64];
            let f_nu = build(cfg, weights(Some(nu)), shifts)?;
            let g1_nu = {
                let g = shifted(&cfg.function("g1")?, shifts[0]);
                GriddedFunction::sample_ext(table_grid.clone(), move |x| g(x))
            };
            let g2_nu = {
                let g = shifted(&cfg.function("g2")?, shifts[1]);
                GriddedFunction::sample_ext(table_grid.clone(), move |x| g(x))
            };
            let report = bound_splitting(
                &SplittingInput {
                    f: &f,
                    f_nu: &f_nu,
                    eta: 0.0,
                    g_pairs: vec![(&g1_table, &g1_nu), (&g2_table, &g2_nu)],
                    u_grid: &u_grid,
                    x_grid: &x_grid,
                    alpha_step: 0.2,
                    component_alpha_step: 2.0 * cfg.grid_step,
                    tol: 2.0 * 0.2 + 2.0 * (5.0 + 1.0) * 2.0 * cfg.grid_step,
                },
                rho,
            )
            .expect("splitting instance");
            out.push_bound(Some(nu), &report);
        }
    }
    Ok(out)
}

fn validate_closed_form(cfg: &Resolved, f: &RockafellianModel) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0005_1177);
    let dual_grid = GridSpec::line(-8.0, 8.0, 0.002).map_err(|e| e.to_string())?;
    let conj1 = {
        let g = cfg.function("g1").map_err(|e| e.to_string())?;
        GriddedFunction::sample_ext(
            GridSpec::line(-9.0, 9.0, 0.005).map_err(|e| e.to_string())?,
            {
                let g = g.func();
                move |x| g(x)
            },
        )
        .conjugate(dual_grid.clone())
        .map_err(|e| e.to_string())?
    };
    let conj2 = {
        let g = cfg.function("g2").map_err(|e| e.to_string())?;
        GriddedFunction::sample_ext(
            GridSpec::line(-9.0, 9.0, 0.005).map_err(|e| e.to_string())?,
            {
                let g = g.func();
                move |x| g(x)
            },
        )
        .conjugate(dual_grid)
        .map_err(|e| e.to_string())?
    };
    let u_scan =
        GridSpec::uniform_box(&[(-4.0, 4.0), (-4.0, 4.0)], 0.02).map_err(|e| e.to_string())?;
    for _ in 0..20 {
        let x = [rng.gen_range(-1.0..1.0)];
        let y = [rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6)];
        let closed = lagrangian_splitting_closed(f, &x, &y, &[conj1.clone(), conj2.clone()])
            .map_err(|e| e.to_string())?
            .to_f64();
        let numeric = lagrangian_numeric(f, &x, &y, &u_scan).map_err(|e| e.to_string())?;
        if numeric.boundary_suspect {
            return Err("scan box too small for the splitting Lagrangian".to_string());
        }
        let numeric = numeric.raw.to_f64();
        if (closed - numeric).abs() > 2e-2 {
            return Err(format!(
                "closed {closed} vs numeric {numeric} at x={x:?} y={y:?}"
            ));
        }
    }
    Ok(())
}
