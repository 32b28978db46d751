//! Penalization of an inequality constraint: the outer indicator is
//! replaced by a growing linear penalty, so the dual domains genuinely
//! differ and the hypograph bound has to pay for the mismatch.

use epikit::bounds::{bound_dual, DualBoundInput, DualBoundMode};
use epikit::grid::GridSpec;
use epikit::rockafellian::RockafellianModel;
use std::sync::Arc;

use crate::catalog;
use crate::config::{ConfigError, Resolved};
use crate::emit::SweepResult;

pub const ID: &str = "dual-penalty";
pub const DESCRIPTION: &str = "linear penalization of an inequality: dual domains shrink to \
     [0, theta_nu] and the hypograph bound pays the domain distance";
pub const CHECKS: &[&str] = &["bounds"];
pub const FUNCTIONS: &[(&str, &str)] = &[("g0", "poly:0,0,1"), ("h", "ind_nonpos")];

const HALF_WIDTH: f64 = 2.0;

fn actual(cfg: &Resolved) -> Result<RockafellianModel, ConfigError> {
    Ok(RockafellianModel::composite(
        1,
        Arc::new(|x: &[f64]| x[0].abs() <= HALF_WIDTH),
        cfg.function("g0")?.scalar_fn(),
        vec![Arc::new(|x: &[f64]| x[0])],
        cfg.function("h")?.func(),
    ))
}

fn penalized(cfg: &Resolved, theta: f64) -> Result<RockafellianModel, ConfigError> {
    let h_nu = catalog::parse(&format!("maxzero:{theta}"))?;
    Ok(RockafellianModel::composite(
        1,
        Arc::new(|x: &[f64]| x[0].abs() <= HALF_WIDTH),
        cfg.function("g0")?.scalar_fn(),
        vec![Arc::new(|x: &[f64]| x[0])],
        h_nu.func(),
    ))
}

pub fn run(cfg: &Resolved) -> Result<SweepResult, ConfigError> {
    let mut out = SweepResult::new(ID);
    let rho = cfg.rho.min(1.5);
    let f = actual(cfg)?;
    let u_grid = GridSpec::line(-6.6, 6.6, 0.05)?;
    let x_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, 0.04)?;
    let y_grid = GridSpec::line(-1.0, 4.0, 0.1)?;

    for &nu in &cfg.nu_list {
        let theta_nu = 0.5 * nu as f64;
        let f_nu = penalized(cfg, theta_nu)?;
        let report = bound_dual(
            &DualBoundInput {
                f: &f,
                f_nu: &f_nu,
                y_grid: y_grid.clone(),
                u_grid: &u_grid,
                x_grid: &x_grid,
                f_u_grid: &u_grid,
                f_x_grid: &x_grid,
                alpha_step: 0.4,
                mode: DualBoundMode::A,
                tol: 2.0 * 0.4 + 2.0 * 5.0 * 0.4,
            },
            rho,
        )
        .expect("penalty instance");
        out.push_bound(Some(nu), &report);
    }
    Ok(out)
}
