//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test -p epikit-cli --test acceptance --
//! --nocapture`). Tolerances are pinned here, not configurable.

use std::sync::Arc;
use std::time::Instant;

use epikit::cloud::{
    truncated_hausdorff, truncated_hausdorff_with_strategy, NnStrategy, PointCloud,
};
use epikit::extreal::ExtReal;
use epikit::grid::{GridSpec, GriddedFunction};
use epikit::lagrangian::{
    dual_affine_closed, dual_numeric, lagrangian_ambiguity_closed, lagrangian_composite_closed,
    lagrangian_numeric, lagrangian_splitting_closed,
};
use epikit::norm::NormSpec;
use epikit::rockafellian::{
    ambiguity_support_vector, check_exactness, indicator_nonpositive, Augmentation,
    ExactnessParams, ExtFn, RockafellianModel,
};
use epikit_cli::config::ScenarioConfig;
use epikit_cli::emit::SweepResult;
use epikit_cli::{registry, run_scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn run_with(id: &str, checks: &[&str], nu: Option<Vec<u32>>) -> SweepResult {
    let mut cfg = ScenarioConfig::bare(id);
    cfg.checks = Some(checks.iter().map(|c| c.to_string()).collect());
    cfg.nu_list = nu;
    run_scenario(&cfg).expect("scenario must resolve and run")
}

fn rows_with_prefix<'a>(res: &'a SweepResult, prefix: &str) -> Vec<&'a epikit_cli::emit::Row> {
    res.rows
        .iter()
        .filter(|r| r.quantity.starts_with(prefix))
        .collect()
}

fn assert_no_fail(res: &SweepResult, context: &str) {
    for row in &res.rows {
        assert_ne!(
            row.status, "FAIL",
            "{context}: {} nu {:?} failed (lhs {}, rhs {}, tol {})",
            row.quantity, row.nu, row.lhs, row.rhs, row.tol
        );
        assert_ne!(row.status, "ERROR", "{context}: {} errored", row.quantity);
    }
}

#[test]
fn criterion_1_cubic_counterexample() {
    let start = Instant::now();
    let res = run_with("cubic-nlp", &["infima", "profiles"], None);
    let elapsed = start.elapsed().as_secs_f64();
    assert_no_fail(&res, "criterion 1");

    // inf phi = -1 +- 0.01 and argmin = {1} +- 0.01.
    let inf_row = rows_with_prefix(&res, "inf.phi")
        .into_iter()
        .find(|r| r.quantity == "inf.phi")
        .expect("inf row");
    assert!(inf_row.lhs <= 0.01);
    let argmin_row = rows_with_prefix(&res, "argmin.phi");
    assert_eq!(argmin_row.len(), 1);
    assert!(argmin_row[0].lhs <= 0.01);

    // inf phi_nu >= 1 for nu >= 2.
    for row in rows_with_prefix(&res, "inf.phi_nu.above_one") {
        if row.nu.unwrap_or(0) >= 2 {
            assert!(row.rhs >= 1.0, "nu {:?}: inf {}", row.nu, row.rhs);
        }
    }

    // The objective epigraphs stay at least 0.5 apart for every nu <= 64.
    let stays = rows_with_prefix(&res, "profile.phi.stays_large");
    assert_eq!(stays.len(), 7);
    for row in &stays {
        assert!(row.rhs >= 0.5, "nu {:?}: distance {}", row.nu, row.rhs);
    }

    // The embedding epigraphs converge at 1/nu within 0.02, rate -1 +- 0.15.
    let profile = rows_with_prefix(&res, "profile.f");
    let mut checked = 0;
    for row in &profile {
        if row.quantity == "profile.f" {
            let nu = row.nu.expect("per-nu row") as f64;
            assert!(row.lhs <= 1.0 / nu + 0.02, "nu {nu}: distance {}", row.lhs);
            checked += 1;
        }
    }
    assert_eq!(checked, 7);
    let rate = profile
        .iter()
        .find(|r| r.quantity == "profile.f.rate")
        .expect("rate row");
    assert!(
        (rate.lhs + 1.0).abs() <= 0.15,
        "fitted rate {} outside -1 +- 0.15",
        rate.lhs
    );

    assert!(elapsed <= 30.0, "criterion 1 took {elapsed:.1}s (> 30s)");
    println!(
        "[criterion 1] PASS - cubic counterexample: inf -1, argmin 1, objectives stay >= 0.5 \
         apart, embeddings decay at rate {:.3} in {elapsed:.1}s",
        rate.lhs
    );
}

#[test]
fn criterion_2_bound_harness() {
    let start = Instant::now();
    let mut bound_rows = 0usize;
    let mut seen = std::collections::BTreeSet::new();
    for def in registry() {
        if !def.checks.contains(&"bounds") {
            continue;
        }
        let res = run_with(def.id, &["bounds"], None);
        assert_no_fail(&res, &format!("criterion 2 [{}]", def.id));
        for row in rows_with_prefix(&res, "bound.") {
            assert!(
                row.status == "PASS" || row.status == "INAPPLICABLE",
                "{}: {} has status {}",
                def.id,
                row.quantity,
                row.status
            );
            bound_rows += 1;
            seen.insert(row.quantity.clone());
        }
        // Admissibility flags are true exactly on the reports that ran.
        for detail in &res.radius_detail {
            let row = res
                .rows
                .iter()
                .find(|r| r.quantity == detail.quantity && r.nu == detail.nu)
                .expect("detail has a row");
            assert_eq!(
                detail.admissible,
                row.status != "INAPPLICABLE",
                "{}: {} admissibility flag disagrees with status",
                def.id,
                detail.quantity
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();

    // Coverage closure: every inequality the bounds module can evaluate is
    // exercised by at least one registered scenario.
    for theorem in epikit::bounds::TheoremId::ALL {
        let name = theorem.as_str();
        assert!(
            seen.iter().any(|q| q.starts_with(name)),
            "no registered scenario exercises {name}"
        );
    }
    assert!(bound_rows >= 60, "only {bound_rows} bound rows produced");
    assert!(elapsed <= 300.0, "criterion 2 took {elapsed:.1}s (> 5min)");
    println!(
        "[criterion 2] PASS - {bound_rows} bound reports across all scenarios, zero FAIL, \
         all 11 inequalities covered, in {elapsed:.1}s"
    );
}

#[test]
fn criterion_3_closed_form_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc3);

    // Reweighting Lagrangian, both branches of the proximal weight.
    let mut worst_ambiguity = 0.0f64;
    for theta in [0.0, 1.3] {
        let model = RockafellianModel::ambiguity(
            1,
            Arc::new(|x: &[f64]| ExtReal::new(0.2 * x[0])),
            vec![
                Arc::new(|x: &[f64]| ExtReal::new(x[0] * x[0])) as ExtFn,
                Arc::new(|x: &[f64]| ExtReal::new((x[0] - 1.0) * (x[0] - 1.0))) as ExtFn,
            ],
            vec![0.4, 0.6],
            theta,
        )
        .unwrap();
        let u_grid = GridSpec::uniform_box(&[(-0.4, 0.0), (-0.6, 0.0)], 1e-3).unwrap();
        for _ in 0..50 {
            let x = [rng.gen_range(-1.5..1.5)];
            let y = [rng.gen_range(-0.5..1.5), rng.gen_range(-0.5..1.5)];
            let closed = lagrangian_ambiguity_closed(&model, &x, &y)
                .unwrap()
                .finite()
                .unwrap();
            let numeric = lagrangian_numeric(&model, &x, &y, &u_grid)
                .unwrap()
                .raw
                .finite()
                .unwrap();
            worst_ambiguity = worst_ambiguity.max((closed - numeric).abs());
        }
    }
    assert!(
        worst_ambiguity <= 1e-3,
        "ambiguity closed form error {worst_ambiguity}"
    );

    // Composite Lagrangian with the analytic conjugate of the orthant
    // indicator; multipliers drawn from the dual grid nodes.
    let composite = RockafellianModel::composite(
        1,
        Arc::new(|x: &[f64]| x[0].abs() <= 2.0),
        Arc::new(|x: &[f64]| -x[0]),
        vec![Arc::new(|x: &[f64]| {
            let x = x[0];
            x * x * x - x * x - x + 1.0
        })],
        Arc::new(indicator_nonpositive),
    );
    let h_conj = GriddedFunction::sample(GridSpec::line(-1.0, 1.0, 0.01).unwrap(), |y| {
        if y[0] >= 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    })
    .unwrap();
    // The minimizer sits at u = -G(x), which ranges over [-3, 9] on the box.
    let u_scan = GridSpec::line(-10.0, 10.0, 1e-3).unwrap();
    let mut worst_composite = 0.0f64;
    for _ in 0..100 {
        let x = [rng.gen_range(-2.0..2.0)];
        let y_node = rng.gen_range(0..=95);
        let y = [y_node as f64 * 0.01];
        let closed = lagrangian_composite_closed(&composite, &h_conj, &x, &y)
            .unwrap()
            .finite()
            .unwrap();
        let numeric = lagrangian_numeric(&composite, &x, &y, &u_scan)
            .unwrap()
            .raw
            .finite()
            .unwrap();
        worst_composite = worst_composite.max((closed - numeric).abs());
    }
    assert!(
        worst_composite <= 1e-3,
        "composite closed form error {worst_composite}"
    );

    // Splitting Lagrangian with positive weights; the scan exploits the
    // blockwise separability of the tilted sum, which is exact.
    let splitting = RockafellianModel::splitting(
        1,
        vec![
            Arc::new(|z: &[f64]| ExtReal::new(0.5 * z[0] * z[0])) as ExtFn,
            Arc::new(|z: &[f64]| ExtReal::new(0.5 * (z[0] - 1.0) * (z[0] - 1.0))) as ExtFn,
        ],
        vec![0.3, 0.7],
    )
    .unwrap();
    let conj1 = GriddedFunction::sample(GridSpec::line(-6.0, 6.0, 1e-3).unwrap(), |y| {
        0.5 * y[0] * y[0]
    })
    .unwrap();
    let conj2 = GriddedFunction::sample(GridSpec::line(-6.0, 6.0, 1e-3).unwrap(), |y| {
        y[0] + 0.5 * y[0] * y[0]
    })
    .unwrap();
    let block_scan = GridSpec::line(-3.0, 3.0, 1e-3).unwrap();
    let mut worst_splitting = 0.0f64;
    for _ in 0..100 {
        let x = [rng.gen_range(-1.0..1.0)];
        let y = [rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6)];
        let closed =
            lagrangian_splitting_closed(&splitting, &x, &y, &[conj1.clone(), conj2.clone()])
                .unwrap()
                .finite()
                .unwrap();
        // min over u of sum_i [p_i g_i(x + u_i) - y_i u_i] splits by block.
        let mut numeric = 0.0;
        let mut z = [0.0f64];
        for (i, p) in [0.3, 0.7].iter().enumerate() {
            let mut best = f64::INFINITY;
            for k in 0..block_scan.point_count() {
                block_scan.point_of(k, &mut z);
                let shifted = x[0] + z[0];
                let gi = if i == 0 {
                    0.5 * shifted * shifted
                } else {
                    0.5 * (shifted - 1.0) * (shifted - 1.0)
                };
                let val = p * gi - y[i] * z[0];
                if val < best {
                    best = val;
                }
            }
            numeric += best;
        }
        worst_splitting = worst_splitting.max((closed - numeric).abs());
    }
    assert!(
        worst_splitting <= 1e-3,
        "splitting closed form error {worst_splitting}"
    );

    // Affine-equality dual against the joint scan on aligned grids.
    let affine = RockafellianModel::composite(
        1,
        Arc::new(|_: &[f64]| true),
        Arc::new(|x: &[f64]| 0.5 * x[0] * x[0]),
        vec![Arc::new(|x: &[f64]| x[0])],
        Arc::new(|z: &[f64]| {
            if z.iter().all(|&c| c.abs() <= 1e-8) {
                ExtReal::ZERO
            } else {
                ExtReal::PosInf
            }
        }),
    );
    let g0_conj = GriddedFunction::sample(GridSpec::line(-2.5, 2.5, 1e-3).unwrap(), |y| {
        0.5 * y[0] * y[0]
    })
    .unwrap();
    let y_grid = GridSpec::line(-1.4, 1.4, 0.02).unwrap();
    let u_grid = GridSpec::line(-2.2, 2.2, 1e-3).unwrap();
    let x_grid = GridSpec::line(-2.0, 2.0, 2e-3).unwrap();
    let psi = dual_numeric(&affine, y_grid.clone(), &u_grid, &x_grid).unwrap();
    let mut worst_affine = 0.0f64;
    let a_matrix = vec![vec![1.0]];
    for yi in 0..y_grid.point_count() {
        let y = y_grid.point_vec(yi);
        let closed = dual_affine_closed(&g0_conj, &a_matrix, &[0.0], &y)
            .unwrap()
            .finite()
            .unwrap();
        let numeric = psi.table.value(yi).finite().expect("finite dual");
        worst_affine = worst_affine.max((closed - numeric).abs());
    }
    assert!(worst_affine <= 1e-3, "affine dual error {worst_affine}");

    println!(
        "[criterion 3] PASS - closed forms track brute-force scans: ambiguity {worst_ambiguity:.2e}, \
         composite {worst_composite:.2e}, splitting {worst_splitting:.2e}, affine dual {worst_affine:.2e}"
    );
}

#[test]
fn criterion_4_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc4);

    // Five random composite models, augmented with the indicator of the
    // origin: strictly exact every time.
    let u_grid = {
        // Dyadic grid so u = 0 is a node bit-exactly.
        GridSpec::new(vec![epikit::grid::Axis {
            lo: -0.5,
            hi: 0.5,
            steps: 17,
        }])
        .unwrap()
    };
    let u_probe = PointCloud::from_flat(1, u_grid.flat_points(), "u").unwrap();
    for trial in 0..5 {
        let a = rng.gen_range(0.5..2.0);
        let b = rng.gen_range(-1.0..1.0);
        let r = rng.gen_range(-0.5..0.5);
        let f = RockafellianModel::composite(
            1,
            Arc::new(|x: &[f64]| x[0].abs() <= 2.0),
            Arc::new(move |x: &[f64]| a * x[0] * x[0] + b * x[0]),
            vec![Arc::new(move |x: &[f64]| x[0] - r)],
            Arc::new(indicator_nonpositive),
        )
        .augment(Augmentation::IndicatorZero)
        .unwrap();
        let x_grid = GridSpec::line(-2.0, 2.0, 0.005).unwrap();
        let x_probe = PointCloud::from_flat(1, x_grid.flat_points(), "x").unwrap();
        let y = vec![rng.gen_range(-3.0..3.0)];
        let report = check_exactness(
            &f,
            &y,
            &u_probe,
            &x_probe,
            ExactnessParams::from_grid_error(0.005),
        )
        .unwrap();
        assert!(
            report.exact && report.strict,
            "random model {trial} not strictly exact: {report:?}"
        );
    }

    // The plain cubic composite fails exactness across the multiplier grid.
    let cubic = RockafellianModel::composite(
        1,
        Arc::new(|x: &[f64]| x[0].abs() <= 2.0),
        Arc::new(|x: &[f64]| -x[0]),
        vec![Arc::new(|x: &[f64]| {
            let x = x[0];
            x * x * x - x * x - x + 1.0
        })],
        Arc::new(indicator_nonpositive),
    );
    let x_grid = GridSpec::line(-2.0, 2.0, 5e-4).unwrap();
    let x_probe = PointCloud::from_flat(1, x_grid.flat_points(), "x").unwrap();
    let mut u_values: Vec<[f64; 1]> = (0..=400).map(|k| [-1e-4 * k as f64]).collect();
    for k in 1..=10 {
        u_values.push([-0.05 * k as f64]);
    }
    let u_probe_fine = PointCloud::from_points(1, u_values.iter(), "u").unwrap();
    let params = ExactnessParams::from_grid_error(5e-4);
    let mut y = 0.0;
    while y <= 50.0 + 1e-9 {
        let report = check_exactness(&cubic, &[y], &u_probe_fine, &x_probe, params).unwrap();
        assert!(!report.exact, "y = {y} was not refuted: {report:?}");
        y += 2.5;
    }

    // The reweighting family's constructive support vector is exact with
    // slack no worse than -1e-6.
    let model = RockafellianModel::ambiguity(
        1,
        Arc::new(|_: &[f64]| ExtReal::ZERO),
        vec![
            Arc::new(|x: &[f64]| ExtReal::new(x[0] * x[0])) as ExtFn,
            Arc::new(|x: &[f64]| ExtReal::new((x[0] - 1.0) * (x[0] - 1.0))) as ExtFn,
        ],
        vec![0.5, 0.5],
        0.0,
    )
    .unwrap();
    let x_grid = GridSpec::line(-2.0, 2.0, 0.01).unwrap();
    let x_probe = PointCloud::from_flat(1, x_grid.flat_points(), "x").unwrap();
    let support = ambiguity_support_vector(&model, 0.0, &x_probe).unwrap();
    let u2 = GridSpec::new(vec![
        epikit::grid::Axis {
            lo: -0.75,
            hi: 0.25,
            steps: 65,
        };
        2
    ])
    .unwrap();
    let report = check_exactness(
        &model,
        &support,
        &PointCloud::from_flat(2, u2.flat_points(), "u").unwrap(),
        &x_probe,
        ExactnessParams {
            tol: 1e-6,
            strict_margin: 1e-9,
        },
    )
    .unwrap();
    assert!(report.exact, "support vector not exact: {report:?}");
    assert!(
        report.min_slack >= ExtReal::new(-1e-6),
        "min slack {:?}",
        report.min_slack
    );

    println!(
        "[criterion 4] PASS - indicator augmentation strictly exact on 5 random models, plain \
         cubic refuted on the [0, 50] multiplier grid, support vector slack {:?}",
        report.min_slack
    );
}

#[test]
fn criterion_5_weak_duality() {
    let mut weakdual_rows = 0usize;
    let mut exact_rows = 0usize;
    for (id, checks) in [
        ("cubic-composite", vec!["duality"]),
        ("ambiguity", vec!["duality", "exactness"]),
        ("dual-affine", vec!["duality"]),
    ] {
        let res = run_with(id, &checks, None);
        assert_no_fail(&res, &format!("criterion 5 [{id}]"));
        for row in &res.rows {
            if row.quantity == "weakdual" {
                assert_eq!(row.status, "PASS", "{id}: weak duality violated");
                weakdual_rows += 1;
            }
            if row.quantity == "weakdual.exact" {
                assert_eq!(row.status, "PASS", "{id}: exact case gap {}", row.lhs);
                exact_rows += 1;
            }
        }
    }
    assert!(weakdual_rows >= 9);
    assert!(exact_rows >= 2);
    println!(
        "[criterion 5] PASS - {weakdual_rows} weak-duality checks hold; {exact_rows} exact \
         instances close the gap to machine precision"
    );
}

#[test]
fn criterion_6_conjugate_suite() {
    // Indicator of the nonpositive axis maps to the indicator of the
    // nonnegative axis, up to the primal-box truncation cap.
    let primal_hi = 4.0;
    let ind = GriddedFunction::sample(GridSpec::line(-primal_hi, primal_hi, 0.01).unwrap(), |x| {
        if x[0] <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    })
    .unwrap();
    let conj = ind
        .conjugate(GridSpec::line(-2.0, 2.0, 0.05).unwrap())
        .unwrap();
    for idx in 0..conj.grid().point_count() {
        let y = conj.grid().point_vec(idx)[0];
        let v = conj.value(idx).to_f64();
        if y >= 0.0 {
            assert!(v.abs() <= 1e-12);
        } else {
            assert!((v - primal_hi * y.abs()).abs() <= 1e-9);
        }
    }

    // Scaled positive part maps to the indicator of [0, theta].
    let theta = 5.0;
    let pos = GriddedFunction::sample(GridSpec::line(-4.0, 4.0, 0.01).unwrap(), move |x| {
        theta * x[0].max(0.0)
    })
    .unwrap();
    let pos_conj = pos
        .conjugate(GridSpec::line(-1.0, 6.0, 0.05).unwrap())
        .unwrap();
    for idx in 0..pos_conj.grid().point_count() {
        let y = pos_conj.grid().point_vec(idx)[0];
        let v = pos_conj.value(idx).to_f64();
        if (0.0..=theta).contains(&y) {
            assert!(v.abs() <= 1e-12, "g*({y}) = {v}");
        }
    }

    // Half-square is self-conjugate within grid-step squared.
    let step = 0.01;
    let half_sq = GriddedFunction::sample(GridSpec::line(-4.0, 4.0, step).unwrap(), |x| {
        0.5 * x[0] * x[0]
    })
    .unwrap();
    let sq_conj = half_sq
        .conjugate(GridSpec::line(-2.0, 2.0, 0.05).unwrap())
        .unwrap();
    for idx in 0..sq_conj.grid().point_count() {
        let y = sq_conj.grid().point_vec(idx)[0];
        let v = sq_conj.value(idx).to_f64();
        assert!((v - 0.5 * y * y).abs() <= step * step, "g*({y}) = {v}");
    }

    // Fenchel-Young at every grid pair, and the double conjugate never
    // exceeds the function by more than 1e-9.
    for f in [
        GriddedFunction::sample(GridSpec::line(-2.0, 2.0, 0.01).unwrap(), |x| {
            0.5 * x[0] * x[0]
        })
        .unwrap(),
        GriddedFunction::sample(GridSpec::line(-2.0, 2.0, 0.01).unwrap(), |x| x[0].abs()).unwrap(),
        GriddedFunction::sample(GridSpec::line(-2.0, 2.0, 0.01).unwrap(), |x| x[0].max(0.0))
            .unwrap(),
    ] {
        let dual = GridSpec::line(-3.0, 3.0, 0.02).unwrap();
        let conj = f.conjugate(dual.clone()).unwrap();
        for xi in 0..f.grid().point_count() {
            let x = f.grid().point_vec(xi)[0];
            let gx = f.value(xi);
            for yi in 0..conj.grid().point_count() {
                let y = conj.grid().point_vec(yi)[0];
                if let (ExtReal::Finite(a), ExtReal::Finite(b)) = (gx, conj.value(yi)) {
                    assert!(a + b >= x * y, "Fenchel-Young fails at ({x}, {y})");
                }
            }
        }
        let bi = conj.conjugate(f.grid().clone()).unwrap();
        for idx in 0..f.grid().point_count() {
            assert!(
                bi.value(idx).to_f64() <= f.value(idx).to_f64() + 1e-9,
                "double conjugate exceeds the function"
            );
        }
    }

    println!(
        "[criterion 6] PASS - indicator pairs, interval indicator, self-conjugate half-square, \
         Fenchel-Young at every grid pair, double conjugate below g + 1e-9"
    );
}

#[test]
fn criterion_7_distance_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc7);
    let norm = NormSpec::l2(3);
    let random_cloud = |rng: &mut ChaCha8Rng, max: usize| {
        let n = rng.gen_range(1..max);
        let mut data = Vec::with_capacity(3 * n);
        for _ in 0..3 * n {
            data.push(rng.gen_range(-3.0..3.0));
        }
        PointCloud::from_flat(3, data, "rand").unwrap()
    };

    for _ in 0..200 {
        let c = random_cloud(&mut rng, 60);
        let d = random_cloud(&mut rng, 60);
        let rho1 = rng.gen_range(0.0..3.0);
        let rho2 = rho1 + rng.gen_range(0.0..2.0);
        let ab = truncated_hausdorff(&c, &d, rho1, &norm).unwrap();
        let ba = truncated_hausdorff(&d, &c, rho1, &norm).unwrap();
        assert_eq!(ab, ba, "symmetry");
        assert_eq!(
            truncated_hausdorff(&c, &c, rho2, &norm).unwrap(),
            ExtReal::ZERO,
            "self distance"
        );
        let wider = truncated_hausdorff(&c, &d, rho2, &norm).unwrap();
        assert!(ab <= wider, "monotonicity in the radius");
    }

    let mut worst_gap = 0.0f64;
    for _ in 0..100 {
        let c = random_cloud(&mut rng, 900);
        let d = random_cloud(&mut rng, 900);
        let rho = rng.gen_range(0.5..4.0);
        let brute = truncated_hausdorff_with_strategy(&c, &d, rho, &norm, NnStrategy::Quadratic)
            .unwrap()
            .to_f64();
        let fast = truncated_hausdorff_with_strategy(&c, &d, rho, &norm, NnStrategy::Indexed)
            .unwrap()
            .to_f64();
        worst_gap = worst_gap.max((brute - fast).abs());
    }
    assert!(worst_gap <= 1e-12, "indexed vs brute gap {worst_gap}");

    // Large-cloud smoke test: 1e5 points per side within five seconds.
    let big = |rng: &mut ChaCha8Rng| {
        let mut data = Vec::with_capacity(300_000);
        for _ in 0..300_000 {
            data.push(rng.gen_range(-2.0..2.0));
        }
        PointCloud::from_flat(3, data, "big").unwrap()
    };
    let c = big(&mut rng);
    let d = big(&mut rng);
    let start = Instant::now();
    let dl = truncated_hausdorff(&c, &d, 1.5, &norm).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(dl > ExtReal::ZERO);
    assert!(elapsed <= 5.0, "1e5-point distance took {elapsed:.2}s");

    println!(
        "[criterion 7] PASS - symmetry/self/monotonicity on 200 pairs, indexed = brute within \
         {worst_gap:.1e}, 1e5-point clouds in {elapsed:.2}s"
    );
}

#[test]
fn criterion_8_convergence_surrogates() {
    for (id, checks) in [
        ("ambiguity", vec!["closed-forms", "tightness", "surrogates"]),
        ("cubic-composite", vec!["tightness", "surrogates"]),
    ] {
        let res = run_with(id, &checks, None);
        assert_no_fail(&res, &format!("criterion 8 [{id}]"));
        let tight = res
            .rows
            .iter()
            .find(|r| r.quantity.starts_with("tightness."))
            .expect("tightness row");
        assert_eq!(tight.status, "PASS", "{id}: tightness diagnostic");
        for quantity in ["surrogate.lagrangian", "surrogate.dual"] {
            let per_nu: Vec<_> = res.rows.iter().filter(|r| r.quantity == quantity).collect();
            assert_eq!(per_nu.len(), 7, "{id}: {quantity} rows");
            for row in &per_nu {
                assert_eq!(row.status, "PASS", "{id}: {quantity} not nonincreasing");
            }
            let final_row = res
                .rows
                .iter()
                .find(|r| r.quantity == format!("{quantity}.final"))
                .expect("final row");
            assert_eq!(
                final_row.status, "PASS",
                "{id}: {quantity} final value {} above 3 tol {}",
                final_row.lhs, final_row.tol
            );
        }
    }
    println!(
        "[criterion 8] PASS - Lagrangian and dual surrogate distances nonincreasing within tol \
         and below 3 tol by nu = 64 in both scenarios"
    );
}
