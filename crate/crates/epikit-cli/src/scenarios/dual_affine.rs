//! Affine-equality instance with a closed-form dual: the conjugate-table
//! dual must match the joint brute-force scan, and strong duality holds at
//! the zero multiplier.

use epikit::extreal::ExtReal;
use epikit::grid::{GridSpec, GriddedFunction};
use epikit::lagrangian::{dual_affine_closed, dual_numeric, weak_duality_check};
use epikit::rockafellian::RockafellianModel;
use std::sync::Arc;

use crate::config::{ConfigError, Resolved};
use crate::emit::SweepResult;

pub const ID: &str = "dual-affine";
pub const DESCRIPTION: &str = "affine-equality instance: conjugate-table dual against the joint \
     scan, with a zero duality gap";
pub const CHECKS: &[&str] = &["closed-forms", "duality"];
pub const FUNCTIONS: &[(&str, &str)] = &[("g0", "poly:0,0,0.5"), ("h", "ind_zero")];

fn build(cfg: &Resolved) -> Result<RockafellianModel, ConfigError> {
    // X = R^n (within the probe box), G(x) = x - b with b = 0.
    let g0 = cfg.function("g0")?.scalar_fn();
    let h = cfg.function("h")?.func();
    Ok(RockafellianModel::composite(
        1,
        Arc::new(|_: &[f64]| true),
        g0,
        vec![Arc::new(|x: &[f64]| x[0])],
        h,
    ))
}

pub fn run(cfg: &Resolved) -> Result<SweepResult, ConfigError> {
    let mut out = SweepResult::new(ID);
    let f = build(cfg)?;
    let g0_conj = {
        let g0 = cfg.function("g0")?.func();
        GriddedFunction::sample_ext(GridSpec::line(-3.0, 3.0, 0.001)?, move |y| g0(y))
            .conjugate(GridSpec::line(-2.5, 2.5, 0.001)?)
            .expect("proper objective")
    };

    // Joint probe grids aligned so that u = -x is always on the u grid.
    let u_grid = GridSpec::line(-2.2, 2.2, 0.001)?;
    let x_grid = GridSpec::line(-2.0, 2.0, 0.002)?;
    let y_grid = GridSpec::line(-1.5, 1.5, 0.05)?;
    let psi = dual_numeric(&f, y_grid.clone(), &u_grid, &x_grid).expect("valid grids");

    if cfg.check_enabled("closed-forms") {
        let a_matrix = vec![vec![1.0]];
        let b = vec![0.0];
        let mut worst = 0.0f64;
        for yi in 0..y_grid.point_count() {
            let y = y_grid.point_vec(yi);
            let closed = dual_affine_closed(&g0_conj, &a_matrix, &b, &y)
                .expect("within the dual grid")
                .to_f64();
            let numeric = psi.table.value(yi).to_f64();
            worst = worst.max((closed - numeric).abs());
        }
        out.push_verdict(
            None,
            "closedform.dual-affine",
            worst,
            0.0,
            1e-3,
            worst <= 1e-3,
        );
    }

    if cfg.check_enabled("duality") {
        // phi is the indicator-constrained objective: only x = 0 feasible.
        let inf_phi = ExtReal::ZERO;
        let report = weak_duality_check(&psi, inf_phi, 1e-9);
        out.push_verdict(
            None,
            "weakdual",
            report.sup_psi.to_f64(),
            report.inf_phi.to_f64(),
            1e-9,
            report.pass,
        );
        // Strong duality: the supremum is attained at y = 0 with value 0.
        out.push_verdict(
            None,
            "weakdual.exact",
            (report.sup_psi.to_f64() - inf_phi.to_f64()).abs(),
            0.0,
            1e-9,
            (report.sup_psi.to_f64() - inf_phi.to_f64()).abs() <= 1e-9,
        );
    }
    Ok(out)
}
