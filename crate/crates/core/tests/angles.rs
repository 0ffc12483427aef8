mod common;

use std::f64::consts::PI;

use anglers::angles::{
    build_polytope, perturb, solve, t_max, verify, AngleAssignment, AngleFile, FarkasCertificate,
    PartiallyFlatAssignment, PartiallyFlatFile, TetTag,
};
use anglers::lp::Rational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn partially_flat(
    seed: u64,
) -> (
    anglers::triangulation::IdealTriangulation,
    PartiallyFlatAssignment,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rand::Rng::random_range(&mut rng, 3..=6);
        let tri = common::random_triangulation(&mut rng, n);
        if let Some(beta) = common::random_partially_flat(&mut rng, &tri) {
            return (tri, beta);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witness_or_certificate(seed in any::<u64>(), n in 1usize..=7) {
        let tri = common::random_triangulation(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let polytope = build_polytope(&tri);
        let out = solve(&polytope);
        let strict = out.is_strictly_feasible();
        let witness_ok = out
            .witness
            .as_ref()
            .is_some_and(|w| strict && verify(&tri, w, 0.0).unwrap().passed());
        let certificate_ok = out
            .certificate
            .as_ref()
            .is_some_and(|c| c.check(&polytope).is_ok());
        prop_assert!(witness_ok != certificate_ok);
        prop_assert!((common::float_max_slack(&polytope) - out.slack.to_f64().unwrap()).abs() < 1e-7);
        if let Some(w) = &out.witness {
            let report = verify(&tri, w, 0.0).unwrap();
            prop_assert_eq!(report.max_edge_residual(), 0.0);
            if strict {
                prop_assert!(verify(&tri, &w.to_radians(), 1e-12).unwrap().passed());
            }
        }
    }

    #[test]
    fn polytope_is_in_units_of_pi(seed in any::<u64>(), n in 1usize..=6) {
        let tri = common::random_triangulation(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let p = build_polytope(&tri);
        let two = Rational::from_integer(2.into());
        prop_assert!(p.edge_rows().iter().all(|r| r.rhs == two));
        prop_assert_eq!(p.edge_rows().len(), tri.edge_classes().len());
        prop_assert_eq!(p.vertex_rows().len(), 4 * n);
        prop_assert_eq!(p.free_slots().count(), 6 * n);
    }

    #[test]
    fn half_t_max_is_strict(seed in any::<u64>()) {
        let (tri, beta) = partially_flat(seed);
        beta.validate(&tri, 0.0).unwrap();
        let bound = t_max(&tri, &beta).unwrap();
        prop_assert!(bound.value > Rational::zero());
        let t = &bound.value / Rational::from_integer(2.into());
        let alpha = perturb(&tri, &beta, &t).unwrap();
        let report = verify(&tri, &alpha, 0.0).unwrap();
        prop_assert!(report.passed(), "{}", report);
        prop_assert_eq!(report.max_edge_residual(), 0.0);
        prop_assert!(perturb(&tri, &beta, &bound.value).is_err());
    }
}

#[test]
fn valence_eight_gives_the_uniform_quarter() {
    for tri in common::valence8_family(&[2]) {
        let out = solve(&build_polytope(&tri));
        let quarter = Rational::new(1.into(), 4.into());
        assert_eq!(out.slack, quarter);
        assert!(out.witness.unwrap().values.iter().all(|v| *v == quarter));
    }
}

#[test]
fn valence_two_is_certified() {
    let tri = common::load("valence2_edge.json");
    let polytope = build_polytope(&tri);
    let out = solve(&polytope);
    assert!(!out.is_strictly_feasible());
    let cert = out.certificate.unwrap();
    assert!(cert.check(&polytope).unwrap() <= Rational::zero());
    let back = FarkasCertificate::from_value(&cert.to_value()).unwrap();
    assert_eq!(back, cert);
    let mut broken = back;
    broken
        .vertex
        .iter_mut()
        .for_each(|u| *u = -u.clone() - Rational::from_integer(1.into()));
    assert!(broken.check(&polytope).is_err());
}

#[test]
fn angle_files_round_trip() {
    let (tri, beta) = partially_flat(3);
    let file = PartiallyFlatFile::Exact(beta.clone());
    let back = PartiallyFlatFile::from_value(&file.to_value()).unwrap();
    assert_eq!(back, file);
    let floats = AngleFile::Radians(beta.as_assignment().to_radians());
    let text = serde_json::to_string(&floats.to_value()).unwrap();
    assert_eq!(AngleFile::from_json(&text).unwrap(), floats);
    assert_eq!(floats.corner_count(), tri.corner_count());
    assert!(beta.tags.contains(&TetTag::Flat));
}

#[test]
fn float_verification_uses_the_tolerance() {
    let tri = common::load("three_valence8_edges.json");
    let mut alpha = AngleAssignment::uniform(&tri, PI / 4.0);
    assert!(verify(&tri, &alpha, 1e-12).unwrap().passed());
    alpha.values[0] += 1e-9;
    assert!(!verify(&tri, &alpha, 1e-12).unwrap().passed());
    assert!(verify(&tri, &alpha, 1e-8).unwrap().passed());
}
