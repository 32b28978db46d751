//! Discrete Legendre-Fenchel transform: the standard conjugate pairs and
//! the inequalities every conjugate table must satisfy.

use epikit::extreal::ExtReal;
use epikit::grid::{GridSpec, GriddedFunction};

fn line(lo: f64, hi: f64, step: f64) -> GridSpec {
    GridSpec::line(lo, hi, step).unwrap()
}

fn sample(grid: GridSpec, f: impl Fn(f64) -> f64 + Sync) -> GriddedFunction {
    GriddedFunction::sample(grid, |x| f(x[0])).unwrap()
}

#[test]
fn conjugate_of_nonpositive_indicator_is_nonnegative_indicator() {
    let primal_hi = 4.0;
    let g = sample(line(-primal_hi, primal_hi, 0.01), |x| {
        if x <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    });
    let conj = g.conjugate(line(-2.0, 2.0, 0.05)).unwrap();
    let grid = conj.grid().clone();
    for idx in 0..grid.point_count() {
        let y = grid.point_vec(idx)[0];
        let v = conj.value(idx).to_f64();
        if y >= 0.0 {
            assert!(v.abs() <= 1e-12, "g*({y}) = {v}");
        } else {
            // Off the true domain the grid truncation caps the blow-up at
            // the primal box edge; the value must realize that cap.
            assert!((v - primal_hi * y.abs()).abs() <= 1e-9, "g*({y}) = {v}");
        }
    }
}

#[test]
fn conjugate_of_scaled_positive_part_is_interval_indicator() {
    let theta = 5.0;
    let primal_hi = 4.0;
    let g = sample(line(-primal_hi, primal_hi, 0.01), move |x| {
        theta * x.max(0.0)
    });
    let conj = g.conjugate(line(-2.0, 8.0, 0.05)).unwrap();
    let grid = conj.grid().clone();
    for idx in 0..grid.point_count() {
        let y = grid.point_vec(idx)[0];
        let v = conj.value(idx).to_f64();
        if (0.0..=theta).contains(&y) {
            assert!(v.abs() <= 1e-12, "g*({y}) = {v}");
        } else if y < 0.0 {
            assert!((v - primal_hi * y.abs()).abs() <= 1e-9);
        } else {
            assert!((v - primal_hi * (y - theta)).abs() <= 1e-9);
        }
    }
}

#[test]
fn conjugate_of_half_square_is_half_square_at_interior_points() {
    let step = 0.01;
    let g = sample(line(-4.0, 4.0, step), |x| 0.5 * x * x);
    let conj = g.conjugate(line(-2.0, 2.0, 0.05)).unwrap();
    let grid = conj.grid().clone();
    for idx in 0..grid.point_count() {
        let y = grid.point_vec(idx)[0];
        let v = conj.value(idx).to_f64();
        assert!(
            (v - 0.5 * y * y).abs() <= step * step,
            "g*({y}) = {v}, expected {}",
            0.5 * y * y
        );
    }
}

#[test]
fn fenchel_young_holds_at_every_grid_pair() {
    for f in [
        sample(line(-2.0, 2.0, 0.02), |x| 0.5 * x * x),
        sample(line(-2.0, 2.0, 0.02), |x| x.abs()),
        sample(line(-2.0, 2.0, 0.02), |x| x.max(0.0)),
        sample(line(-2.0, 2.0, 0.02), |x| {
            if x <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        }),
    ] {
        let conj = f.conjugate(line(-3.0, 3.0, 0.04)).unwrap();
        let pgrid = f.grid().clone();
        let dgrid = conj.grid().clone();
        for xi in 0..pgrid.point_count() {
            let x = pgrid.point_vec(xi)[0];
            let gx = f.value(xi);
            for yi in 0..dgrid.point_count() {
                let y = dgrid.point_vec(yi)[0];
                let gy = conj.value(yi);
                if let (ExtReal::Finite(a), ExtReal::Finite(b)) = (gx, gy) {
                    assert!(
                        a + b >= x * y,
                        "Fenchel-Young violated at x={x}, y={y}: {a} + {b} < {}",
                        x * y
                    );
                }
            }
        }
    }
}

#[test]
fn double_conjugate_minorizes_and_matches_convex_samples() {
    let primal = line(-2.0, 2.0, 0.01);
    let dual = line(-4.0, 4.0, 0.01);
    type Sample = (&'static str, fn(f64) -> f64);
    let convex: Vec<Sample> = vec![
        ("half-square", |x| 0.5 * x * x),
        ("abs", |x| x.abs()),
        ("positive-part", |x| x.max(0.0)),
    ];
    for (name, f) in convex {
        let g = sample(primal.clone(), f);
        let bi = g
            .conjugate(dual.clone())
            .unwrap()
            .conjugate(primal.clone())
            .unwrap();
        let grid = g.grid().clone();
        let tol = 0.01 * 0.01; // dual-step-squared envelope error
        for idx in 0..grid.point_count() {
            let orig = g.value(idx).to_f64();
            let double = bi.value(idx).to_f64();
            assert!(
                double <= orig + 1e-9,
                "{name}: g**({}) = {double} exceeds g = {orig}",
                grid.point_vec(idx)[0]
            );
            assert!(
                orig - double <= 2.0 * tol + 1e-9,
                "{name}: g** too far below g at {}: {orig} vs {double}",
                grid.point_vec(idx)[0]
            );
        }
    }
}

#[test]
fn double_conjugate_never_exceeds_nonconvex_sample() {
    let g = sample(line(-2.0, 2.0, 0.01), |x| (x * x - 1.0) * (x * x - 1.0));
    let bi = g
        .conjugate(line(-8.0, 8.0, 0.01))
        .unwrap()
        .conjugate(line(-2.0, 2.0, 0.01))
        .unwrap();
    for idx in 0..g.grid().point_count() {
        assert!(bi.value(idx).to_f64() <= g.value(idx).to_f64() + 1e-9);
    }
    // Strictly below in the concave region.
    let mid = g.grid().index_of(&[0.0]).unwrap();
    assert!(bi.value(mid).to_f64() < g.value(mid).to_f64() - 0.5);
}

#[test]
fn conjugate_of_everywhere_infinite_function_is_an_error() {
    let g = sample(line(-1.0, 1.0, 0.5), |_| f64::INFINITY);
    assert!(g.conjugate(line(-1.0, 1.0, 0.5)).is_err());
}
