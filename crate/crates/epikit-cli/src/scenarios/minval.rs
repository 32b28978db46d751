//! Minimum-value / near-minimizer / level-set estimates: two deterministic
//! instances plus a seeded sweep of random piecewise-linear pairs, every
//! one of which must come out PASS or INAPPLICABLE.

use epikit::bounds::{bound_minval, BoundStatus, MinValInput};
use epikit::grid::{GridSpec, GriddedFunction};
use epikit::norm::NormSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog;
use crate::config::{ConfigError, Resolved};
use crate::emit::SweepResult;

pub const ID: &str = "minval";
pub const DESCRIPTION: &str = "minimum-value and level-set estimates from the epigraph distance, \
     on fixed pairs and a 200-trial randomized sweep";
pub const CHECKS: &[&str] = &["bounds", "sweep"];
pub const FUNCTIONS: &[(&str, &str)] = &[("g", "poly:0,0,1")];

const TRIALS: usize = 200;

pub fn run(cfg: &Resolved) -> Result<SweepResult, ConfigError> {
    let mut out = SweepResult::new(ID);
    let h = cfg.grid_step;
    let grid = GridSpec::line(-2.0, 2.0, h)?;
    let g_fn = cfg.function("g")?;
    let g = {
        let f = g_fn.func();
        GriddedFunction::sample_ext(grid.clone(), move |x| f(x))
    };

    if cfg.check_enabled("bounds") {
        // Identical pair: everything is zero.
        let report = bound_minval(&MinValInput {
            g: &g,
            h: &g,
            rho: 1.0,
            eps: 0.0,
            norm_x: NormSpec::l2(1),
            alpha_step: 5.0 * h,
            tol: 2.0 * 5.0 * h,
        })
        .expect("valid tables");
        out.push_bound_as(None, "bound.minval.identity", &report);

        // Vertical shift: the minimum-value gap saturates the distance.
        let g_shift = {
            let f = g_fn.func();
            GriddedFunction::sample_ext(grid.clone(), move |x| {
                f(x) + epikit::extreal::ExtReal::new(0.1)
            })
        };
        let report = bound_minval(&MinValInput {
            g: &g,
            h: &g_shift,
            rho: 1.0,
            eps: 0.05,
            norm_x: NormSpec::l2(1),
            alpha_step: 5.0 * h,
            tol: 2.0 * 5.0 * h,
        })
        .expect("valid tables");
        out.push_bound_as(None, "bound.minval.shift", &report);
    }

    if cfg.check_enabled("sweep") {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut failures = 0usize;
        let mut applicable = 0usize;
        for _ in 0..TRIALS {
            let (g_tok, h_tok) = random_pair_tokens(&mut rng);
            let g_t = table_from_token(&g_tok, &grid)?;
            let h_t = table_from_token(&h_tok, &grid)?;
            let report = bound_minval(&MinValInput {
                g: &g_t,
                h: &h_t,
                rho: 1.0,
                eps: 0.05,
                norm_x: NormSpec::l2(1),
                alpha_step: 5.0 * h,
                tol: 2.0 * 5.0 * h,
            })
            .expect("valid tables");
            match report.status {
                BoundStatus::Pass => applicable += 1,
                BoundStatus::Fail => failures += 1,
                BoundStatus::Inapplicable(_) => {}
            }
        }
        out.push_verdict(
            None,
            "bound.minval.sweep",
            failures as f64,
            0.0,
            0.0,
            failures == 0 && applicable > TRIALS / 2,
        );
    }
    Ok(out)
}

fn table_from_token(token: &str, grid: &GridSpec) -> Result<GriddedFunction, ConfigError> {
    let f = catalog::parse(token)?.func();
    Ok(GriddedFunction::sample_ext(grid.clone(), move |x| f(x)))
}

/// A random piecewise-linear pair with interior minimizers and values well
/// inside the admissibility windows, plus a small perturbation of the knot
/// heights. Everything goes through catalog tokens so the sweep is exactly
/// reproducible from the seed.
fn random_pair_tokens(rng: &mut ChaCha8Rng) -> (String, String) {
    let center: f64 = rng.gen_range(-0.4..0.4);
    let depth: f64 = rng.gen_range(-0.3..0.3);
    let knots: Vec<f64> = vec![-2.0, -1.0, -0.3, 0.3, 1.0, 2.0];
    let mut g_knots = Vec::new();
    let mut h_knots = Vec::new();
    for &x in &knots {
        let base = 0.4 * (x - center) * (x - center) + depth;
        let wiggle: f64 = rng.gen_range(-0.05..0.05);
        let noise: f64 = rng.gen_range(-0.08..0.08);
        g_knots.push((x, base + wiggle));
        h_knots.push((x, base + wiggle + noise));
    }
    let fmt = |knots: &[(f64, f64)]| {
        knots
            .iter()
            .map(|(x, y)| format!("{x},{y}"))
            .collect::<Vec<_>>()
            .join(";")
    };
    (
        format!("pwl:{}", fmt(&g_knots)),
        format!("pwl:{}", fmt(&h_knots)),
    )
}
