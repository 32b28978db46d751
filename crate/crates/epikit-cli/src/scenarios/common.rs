//! Helpers shared across scenario implementations.

use std::sync::Arc;

use epikit::cloud::PointCloud;
use epikit::extreal::ExtReal;
use epikit::grid::{GridSpec, GriddedFunction};
use epikit::rockafellian::{ExtFn, RockafellianModel, ScalarFn};

use crate::catalog::CatalogFn;

/// Grid points as a point cloud (probe boxes are grids promoted to clouds).
pub fn grid_cloud(grid: &GridSpec, tag: &str) -> PointCloud {
    PointCloud::from_flat(grid.dim(), grid.flat_points(), tag).expect("grid points are finite")
}

/// 1-D grid with an exact zero node: both box ends and the spacing are
/// dyadic, so accumulating `lo + i * spacing` reproduces 0.0 bit-exactly.
/// Needed wherever an indicator of the origin meets a probe grid.
pub fn dyadic_zero_grid(lo: f64, hi: f64, spacing: f64) -> GridSpec {
    let steps = ((hi - lo) / spacing).round() as usize + 1;
    let grid = GridSpec::new(vec![epikit::grid::Axis { lo, hi, steps }]).expect("valid axis");
    debug_assert!(grid.flat_points().contains(&0.0));
    grid
}

/// Product of `copies` identical 1-D grids.
pub fn product_grid(axis_grid: &GridSpec, copies: usize) -> GridSpec {
    let axis = axis_grid.axes()[0].clone();
    GridSpec::new(vec![axis; copies]).expect("valid axes")
}

/// Vertical shift of a catalog function: `g + c`.
pub fn shifted(g: &CatalogFn, c: f64) -> ExtFn {
    let f = g.func();
    Arc::new(move |z: &[f64]| f(z) + ExtReal::new(c))
}

pub fn shifted_scalar(g: &CatalogFn, c: f64) -> ScalarFn {
    let f = g.func();
    Arc::new(move |z: &[f64]| f(z).to_f64() + c)
}

/// Box membership test `|x_k| <= half_width`.
pub fn box_set(half_width: f64) -> epikit::rockafellian::SetIndicator {
    Arc::new(move |x: &[f64]| x.iter().all(|&c| c.abs() <= half_width))
}

/// Composite embedding `i_X + g0 + h(G + u)` of a 1-D program with box
/// constraint set and a single mapping component shifted by `c`.
pub fn composite_1d(
    half_width: f64,
    g0: &CatalogFn,
    g1: &CatalogFn,
    h: &CatalogFn,
    shift: f64,
) -> RockafellianModel {
    RockafellianModel::composite(
        1,
        box_set(half_width),
        g0.scalar_fn(),
        vec![shifted_scalar(g1, shift)],
        h.func(),
    )
}

/// Objective table of a composite 1-D program on the given grid.
pub fn composite_objective_table(
    half_width: f64,
    g0: &CatalogFn,
    g1: &CatalogFn,
    h: &CatalogFn,
    shift: f64,
    grid: GridSpec,
) -> GriddedFunction {
    let g0 = g0.func();
    let g1 = shifted(g1, shift);
    let h = h.func();
    GriddedFunction::sample_ext(grid, move |x| {
        if x[0].abs() > half_width {
            return ExtReal::PosInf;
        }
        g0(x) + h(&[g1(x).to_f64()])
    })
}

/// Max over probed `y` of `psi(y) - <y, u>`-free dual value at a single
/// multiplier, via a direct joint scan (no tabulation).
pub fn dual_value_at(
    f: &RockafellianModel,
    y: &[f64],
    u_grid: &GridSpec,
    x_grid: &GridSpec,
) -> ExtReal {
    let m = f.m();
    let mut u = vec![0.0; m];
    let mut best = ExtReal::PosInf;
    for ui in 0..u_grid.point_count() {
        u_grid.point_of(ui, &mut u);
        let tilt = ExtReal::new(-u.iter().zip(y).map(|(a, b)| a * b).sum::<f64>());
        let mut x = vec![0.0; f.n()];
        for xi in 0..x_grid.point_count() {
            x_grid.point_of(xi, &mut x);
            let v = f.eval(&u, &x) + tilt;
            if v < best {
                best = v;
            }
        }
    }
    best
}
