//! Proximal augmentation of the composite cubic embedding: the augmented
//! epigraph distance tracks the base distance scaled by the augmentation
//! modulus plus the drift of the augmenting weight, and the certificate
//! form of the tightness diagnostic verifies the concave floor.

use epikit::bounds::{bound_augmentation, AugmentationInput};
use epikit::grid::GridSpec;
use epikit::rockafellian::{tightness_diagnostic, Augmentation, RockafellianModel, TightnessMode};

use crate::config::{ConfigError, Resolved};
use crate::emit::SweepResult;
use crate::scenarios::common::composite_1d;

pub const ID: &str = "augmentation";
pub const DESCRIPTION: &str = "proximal augmentation of the composite cubic embedding: modulus-scaled \
     base distance plus the augmenting-weight drift";
pub const CHECKS: &[&str] = &["bounds", "tightness"];
pub const FUNCTIONS: &[(&str, &str)] = &[
    ("g0", "poly:0,-1"),
    ("g1", "poly:1,-1,-1,1"),
    ("h", "ind_nonpos"),
];

const HALF_WIDTH: f64 = 2.0;
const THETA: f64 = 1.0;

fn base_model(cfg: &Resolved, shift: f64) -> Result<RockafellianModel, ConfigError> {
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
    let rho = cfg.rho;
    let f = base_model(cfg, 0.0)?;
    // On the rho-ball the objective is bounded below by -rho.
    let eta = rho;

    if cfg.check_enabled("bounds") {
        let u_grid = GridSpec::line(-(rho + 1.2), rho + 1.2, 0.02)?;
        let x_grid = GridSpec::line(-HALF_WIDTH, HALF_WIDTH, 0.02)?;
        for &nu in &cfg.nu_list {
            let shift = 1.0 / nu as f64;
            let f_nu = base_model(cfg, shift)?;
            let theta_nu = THETA + 0.5 / nu as f64;
            let report = bound_augmentation(
                &AugmentationInput {
                    f: &f,
                    f_nu: &f_nu,
                    aug: Augmentation::Prox { theta: THETA },
                    aug_nu: Augmentation::Prox { theta: theta_nu },
                    eta,
                    u_grid: &u_grid,
                    x_grid: &x_grid,
                    alpha_step: 0.2,
                    kappa: None,
                    tol: 2.0 * 0.2 + 2.0 * 8.0 * 0.2,
                },
                rho,
            )
            .expect("augmentation instance");
            out.push_bound(Some(nu), &report);
        }
    }

    if cfg.check_enabled("tightness") {
        // Certificate for the augmented sequence: the base embeddings are
        // bounded below by gamma = -2 on the anchor slices with beta
        // strictly inside (0, theta), and u near the feasibility boundary
        // witnesses a small value.
        let models: Vec<RockafellianModel> = cfg
            .nu_list
            .iter()
            .map(|&nu| base_model(cfg, 1.0 / nu as f64))
            .collect::<Result<_, _>>()?;
        let y_seq: Vec<Vec<f64>> = cfg.nu_list.iter().map(|_| vec![1.0]).collect();
        let x_seq: Vec<Vec<f64>> = cfg.nu_list.iter().map(|_| vec![1.0]).collect();
        let u_box = GridSpec::line(-3.0, 3.0, 0.01)?;
        let report = tightness_diagnostic(
            &models,
            &y_seq,
            &x_seq,
            &u_box,
            &TightnessMode::Certificate {
                gamma: -2.0,
                beta: 0.5,
                tau: 1.5,
                theta: THETA,
            },
        )
        .expect("consistent sequences");
        out.push_verdict(
            None,
            "tightness.certificate",
            if report.pass { 0.0 } else { 1.0 },
            0.0,
            0.0,
            report.pass,
        );
    }
    Ok(out)
}
