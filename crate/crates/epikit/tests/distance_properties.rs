//! Property tests for the excess / truncated Hausdorff kernel.

use epikit::cloud::{
    excess, excess_with_strategy, truncated_hausdorff, truncated_hausdorff_with_strategy,
    NnStrategy, PointCloud,
};
use epikit::extreal::ExtReal;
use epikit::norm::{InnerNorm, NormSpec};
use proptest::prelude::*;

fn cloud_strategy(dim: usize, max_len: usize) -> impl Strategy<Value = PointCloud> {
    prop::collection::vec(prop::collection::vec(-5.0f64..5.0, dim..=dim), 0..max_len)
        .prop_map(move |pts| PointCloud::from_points(dim, pts, "prop").unwrap())
}

fn nonempty_cloud(dim: usize, max_len: usize) -> impl Strategy<Value = PointCloud> {
    prop::collection::vec(prop::collection::vec(-5.0f64..5.0, dim..=dim), 1..max_len)
        .prop_map(move |pts| PointCloud::from_points(dim, pts, "prop").unwrap())
}

fn norm2d() -> impl Strategy<Value = NormSpec> {
    prop_oneof![
        Just(NormSpec::l2(2)),
        Just(NormSpec::new(vec![(2, InnerNorm::L1)]).unwrap()),
        Just(NormSpec::new(vec![(1, InnerNorm::Abs), (1, InnerNorm::Abs)]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hausdorff_is_symmetric(
        c in cloud_strategy(2, 40),
        d in cloud_strategy(2, 40),
        rho in 0.0f64..4.0,
        norm in norm2d(),
    ) {
        let ab = truncated_hausdorff(&c, &d, rho, &norm).unwrap();
        let ba = truncated_hausdorff(&d, &c, rho, &norm).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn self_distance_is_zero(
        c in cloud_strategy(2, 40),
        rho in 0.0f64..4.0,
        norm in norm2d(),
    ) {
        prop_assert_eq!(
            truncated_hausdorff(&c, &c, rho, &norm).unwrap(),
            ExtReal::ZERO
        );
    }

    #[test]
    fn distance_is_monotone_in_radius(
        c in cloud_strategy(2, 40),
        d in cloud_strategy(2, 40),
        rho1 in 0.0f64..4.0,
        extra in 0.0f64..4.0,
        norm in norm2d(),
    ) {
        let small = truncated_hausdorff(&c, &d, rho1, &norm).unwrap();
        let large = truncated_hausdorff(&c, &d, rho1 + extra, &norm).unwrap();
        prop_assert!(small <= large, "small {small:?} large {large:?}");
    }

    #[test]
    fn excess_triangle_inequality(
        c in nonempty_cloud(2, 30),
        d in nonempty_cloud(2, 30),
        e in nonempty_cloud(2, 30),
        norm in norm2d(),
    ) {
        let cd = excess(&c, &d, &norm).unwrap().to_f64();
        let ce = excess(&c, &e, &norm).unwrap().to_f64();
        let ed = excess(&e, &d, &norm).unwrap().to_f64();
        prop_assert!(cd <= ce + ed + 1e-12, "cd {cd} ce {ce} ed {ed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    // The indexed path must agree with the quadratic scan to machine
    // precision because both evaluate the same norms.
    #[test]
    fn indexed_agrees_with_quadratic(
        c in nonempty_cloud(3, 400),
        d in nonempty_cloud(3, 400),
        rho in 0.5f64..6.0,
    ) {
        let norm = NormSpec::l2(3);
        let brute = truncated_hausdorff_with_strategy(&c, &d, rho, &norm, NnStrategy::Quadratic)
            .unwrap()
            .to_f64();
        let fast = truncated_hausdorff_with_strategy(&c, &d, rho, &norm, NnStrategy::Indexed)
            .unwrap()
            .to_f64();
        prop_assert!((brute - fast).abs() <= 1e-12, "brute {brute} fast {fast}");
    }

    #[test]
    fn indexed_excess_agrees_under_block_norms(
        c in nonempty_cloud(2, 300),
        d in nonempty_cloud(2, 300),
        norm in norm2d(),
    ) {
        let brute = excess_with_strategy(&c, &d, &norm, NnStrategy::Quadratic)
            .unwrap()
            .to_f64();
        let fast = excess_with_strategy(&c, &d, &norm, NnStrategy::Indexed)
            .unwrap()
            .to_f64();
        prop_assert!((brute - fast).abs() <= 1e-12);
    }
}

/// A vertically shifted epigraph-like band: the distance is the shift where
/// the band is flat, checked against a hand brute-force scan.
#[test]
fn shifted_flat_epigraph_band() {
    let step = 0.01;
    let mut base = Vec::new();
    let mut shifted = Vec::new();
    let mut x = -1.0;
    while x <= 1.0 + 1e-12 {
        for k in 0..30 {
            let alpha = k as f64 * 0.05;
            base.push(vec![x, alpha]);
            shifted.push(vec![x, alpha + 0.25]);
        }
        x += step;
    }
    let c = PointCloud::from_points(2, base, "epi g").unwrap();
    let d = PointCloud::from_points(2, shifted, "epi g + 0.25").unwrap();
    let norm = NormSpec::epi(1);
    let dl = truncated_hausdorff(&c, &d, 1.0, &norm).unwrap().to_f64();
    // Brute-force oracle over the pair of clouds.
    let oracle = truncated_hausdorff_with_strategy(&c, &d, 1.0, &norm, NnStrategy::Quadratic)
        .unwrap()
        .to_f64();
    assert_eq!(dl, oracle);
    assert!((dl - 0.25).abs() < 2.0 * step, "dl {dl}");
}

#[test]
fn large_cloud_distance_completes_quickly() {
    use std::time::Instant;
    // Deterministic pseudo-random clouds, 1e5 points each in 3-D.
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
    };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for _ in 0..100_000 {
        a.push([next(), next(), next()]);
        b.push([next(), next(), next()]);
    }
    let c = PointCloud::from_points(3, a, "big a").unwrap();
    let d = PointCloud::from_points(3, b, "big b").unwrap();
    let start = Instant::now();
    let dl = truncated_hausdorff(&c, &d, 1.5, &NormSpec::l2(3)).unwrap();
    let elapsed = start.elapsed();
    assert!(dl > ExtReal::ZERO);
    assert!(
        elapsed.as_secs_f64() <= 5.0,
        "took {:?} for 1e5-point clouds",
        elapsed
    );
}
