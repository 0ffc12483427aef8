mod common;

use std::f64::consts::PI;

use anglers::angles::{build_polytope, solve, verify, AngleAssignment};
use anglers::triangulation::IdealTriangulation;
use anglers::volume_opt::{
    corner_lengths, maximize, project, total_volume, AscentStatus, MaximizeOptions,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A strict point: the max-slack witness moved along a random edge-sum
/// preserving direction, far enough from every wall to stay strict.
fn strict_point(tri: &IdealTriangulation, rng: &mut ChaCha8Rng) -> AngleAssignment<f64> {
    let w = solve(&build_polytope(tri)).witness.unwrap().to_radians();
    let noise: Vec<f64> = (0..tri.corner_count())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let d = project(tri, &noise);
    let top = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let min_angle = w.values.iter().fold(f64::INFINITY, |m, x| m.min(*x));
    let scale = min_angle / 9.0 / top;
    AngleAssignment::new(
        w.values
            .iter()
            .zip(&d)
            .map(|(x, y)| x + scale * y)
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gradient_matches_finite_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tri = common::load("three_valence8_edges.json");
        let x = strict_point(&tri, &mut rng);
        prop_assert!(verify(&tri, &x, 1e-12).unwrap().passed());
        let lengths = corner_lengths(&tri, &x).unwrap();
        let gradient = project(&tri, &lengths.iter().map(|l| -l / 2.0).collect::<Vec<_>>());
        let report = total_volume(&tri, &x).unwrap();
        let norm = gradient.iter().map(|g| g * g).sum::<f64>().sqrt();
        prop_assert!((report.gradient_norm - norm).abs() < 1e-9);
        let noise: Vec<f64> = (0..tri.corner_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d = project(&tri, &noise);
        let h = 1e-5;
        let shifted = |s: f64| AngleAssignment::new(x.values.iter().zip(&d).map(|(a, b)| a + s * b).collect());
        let fd = (total_volume(&tri, &shifted(h)).unwrap().total_volume
            - total_volume(&tri, &shifted(-h)).unwrap().total_volume)
            / (2.0 * h);
        let exact: f64 = gradient.iter().zip(&d).map(|(g, y)| g * y).sum();
        prop_assert!((fd - exact).abs() < 1e-5, "{} vs {}", fd, exact);
    }
}

#[test]
fn ascent_reaches_matching_lengths() {
    let tri = common::load("three_valence8_edges.json");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let options = MaximizeOptions::default();
    let x = strict_point(&tri, &mut rng);
    let out = maximize(&tri, &x, &options).unwrap();
    assert_eq!(out.status, AscentStatus::Critical);
    assert!(out.volumes.windows(2).all(|w| w[1] >= w[0] - 1e-12 * w[0]));
    assert!(verify(&tri, &out.alpha, 1e-9).unwrap().passed());
    assert!(out.report.edge_length_residual <= 10.0 * options.tol.max(1e-8));
    for class in tri.edge_classes() {
        let sum: f64 = class
            .corners
            .iter()
            .map(|c| out.alpha.values[c.slot()])
            .sum();
        assert!((sum - 2.0 * PI).abs() < 1e-12);
    }
    let uniform = AngleAssignment::uniform(&tri, PI / 4.0);
    let top = total_volume(&tri, &uniform).unwrap().total_volume;
    assert!((out.report.total_volume - top).abs() < 1e-8);
}

#[test]
fn random_strict_instances_ascend_monotonically() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let options = MaximizeOptions {
        max_iters: 400,
        ..MaximizeOptions::default()
    };
    let mut runs = 0;
    while runs < 5 {
        let n = rng.random_range(3..=6);
        let tri = common::random_triangulation(&mut rng, n);
        if !solve(&build_polytope(&tri)).is_strictly_feasible() {
            continue;
        }
        runs += 1;
        let x = strict_point(&tri, &mut rng);
        let out = maximize(&tri, &x, &options).unwrap();
        let noise = 1e-12 * out.volumes[0].abs().max(1.0);
        assert!(out.volumes.windows(2).all(|w| w[1] >= w[0] - noise));
        assert!(out.report.total_volume >= out.volumes[0] - noise);
        assert!(verify(&tri, &out.alpha, 1e-9).unwrap().passed());
    }
}

#[test]
fn degenerating_instance_reports_the_boundary() {
    let tri = common::load("flattening_tet.json");
    let w = solve(&build_polytope(&tri)).witness.unwrap().to_radians();
    let out = maximize(&tri, &w, &MaximizeOptions::default()).unwrap();
    assert_eq!(out.status, AscentStatus::Boundary);
    assert!(!out.pinned.is_empty());
}

#[test]
fn non_strict_start_is_refused() {
    let tri = common::load("three_valence8_edges.json");
    let mut x = AngleAssignment::uniform(&tri, PI / 4.0);
    x.values[0] += 0.1;
    assert!(maximize(&tri, &x, &MaximizeOptions::default()).is_err());
}
