//! Composite structure inside the constraint: a quadratic objective under
//! `h(G(x)) <= 0`, perturbed in the objective and the inner mapping, with
//! the two-argument perturbation `(v, w)` entering the constraint.

use epikit::bounds::{bound_constraint_composite, ConstraintCompositeInput};
use epikit::grid::{GridSpec, GriddedFunction};
use epikit::rockafellian::RockafellianModel;

use crate::config::{ConfigError, Resolved};
use crate::emit::SweepResult;
use crate::scenarios::common::{shifted, shifted_scalar};

pub const ID: &str = "constraint-composite";
pub const DESCRIPTION: &str = "quadratic objective under a composed inequality constraint, \
     perturbed in objective and inner mapping";
pub const CHECKS: &[&str] = &["bounds"];
pub const FUNCTIONS: &[(&str, &str)] = &[
    ("g0", "poly:0,0,0.5"),
    ("g_inner", "poly:0,1"),
    ("h", "ind_nonpos"),
];

fn build(cfg: &Resolved, g0_shift: f64, g_shift: f64) -> Result<RockafellianModel, ConfigError> {
    Ok(RockafellianModel::constraint_composite(
        1,
        shifted(&cfg.function("g0")?, g0_shift),
        vec![shifted_scalar(&cfg.function("g_inner")?, g_shift)],
        cfg.function("h")?.func(),
    ))
}

pub fn run(cfg: &Resolved) -> Result<SweepResult, ConfigError> {
    let mut out = SweepResult::new(ID);
    let rho = cfg.rho.min(1.5);
    let f = build(cfg, 0.0, 0.0)?;

    let table_grid = GridSpec::line(-2.7, 2.7, cfg.grid_step)?;
    let g0_table = {
        let g = cfg.function("g0")?.func();
        GriddedFunction::sample_ext(table_grid.clone(), move |x| g(x))
    };
    let g_inner_table = {
        let g = cfg.function("g_inner")?.func();
        GriddedFunction::sample_ext(table_grid.clone(), move |x| g(x))
    };
    let h_grid = GridSpec::line(-6.0, 6.0, 0.02)?;
    let h_table = {
        let h = cfg.function("h")?.func();
        GriddedFunction::sample_ext(h_grid.clone(), move |z| h(z))
    };
    let u_grid = GridSpec::uniform_box(&[(-2.7, 2.7), (-2.7, 2.7)], 0.09)?;
    let x_grid = GridSpec::line(-2.7, 2.7, 0.09)?;

    for &nu in &cfg.nu_list {
        let g0_shift = 0.5 / nu as f64;
        let g_shift = 0.3 / nu as f64;
        let f_nu = build(cfg, g0_shift, g_shift)?;
        let g0_nu = {
            let g = shifted(&cfg.function("g0")?, g0_shift);
            GriddedFunction::sample_ext(table_grid.clone(), move |x| g(x))
        };
        let g_inner_nu = {
            let g = shifted(&cfg.function("g_inner")?, g_shift);
            GriddedFunction::sample_ext(table_grid.clone(), move |x| g(x))
        };
        let report = bound_constraint_composite(
            &ConstraintCompositeInput {
                f: &f,
                f_nu: &f_nu,
                g0: &g0_table,
                g0_nu: &g0_nu,
                g_pairs: vec![(&g_inner_table, &g_inner_nu)],
                h: &h_table,
                h_nu: &h_table,
                u_grid: &u_grid,
                x_grid: &x_grid,
                alpha_step: 0.25,
                tol: 2.0 * 0.25 + 2.0 * cfg.grid_step + 2.0 * 0.25,
            },
            rho,
        )
        .expect("constraint-composite instance");
        out.push_bound(Some(nu), &report);
    }
    Ok(out)
}
