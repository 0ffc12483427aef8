mod common;

use anglers::angles::{build_polytope, solve, AngleAssignment};
use anglers::lp::Rational;
use anglers::surfaces::{
    check_disk_angle_bounds, classify_disk, euler_characteristics, euler_verdict, inner_angles,
    AdmissibleDisk, DiskType, EulerVerdict, SurfaceComplex, SurfaceError,
};
use anglers::triangulation::IdealTriangulation;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn strict(seed: u64) -> (IdealTriangulation, AngleAssignment<Rational>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rand::Rng::random_range(&mut rng, 2..=7);
        let tri = common::random_triangulation(&mut rng, n);
        let out = solve(&build_polytope(&tri));
        if out.is_strictly_feasible() {
            return (tri, out.witness.unwrap());
        }
    }
}

fn surfaces(tri: &IdealTriangulation) -> Vec<SurfaceComplex> {
    let comps = tri.boundary_components().len();
    let mut out = Vec::new();
    for c in 0..comps {
        out.push(SurfaceComplex::vertex_link(tri, c).unwrap());
    }
    for e in 0..tri.edge_classes().len() {
        out.extend(SurfaceComplex::edge_tube(tri, e));
        for c in 0..comps {
            out.extend(SurfaceComplex::frontier(tri, &[c], &[e]));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauss_bonnet_is_exact(seed in any::<u64>()) {
        let (tri, alpha) = strict(seed);
        for surface in surfaces(&tri) {
            let theta = inner_angles(&tri, &surface, &alpha).unwrap();
            let bounds = check_disk_angle_bounds(&tri, &surface, &theta, 0.0).unwrap();
            prop_assert!(bounds.passed(), "{}", bounds);
            for z in &bounds.zero_cells {
                let two = Rational::from_integer(2.into());
                if z.external {
                    prop_assert_eq!(z.corners, 2);
                    prop_assert_eq!(&z.sum, &Rational::from_integer(1.into()));
                } else {
                    prop_assert_eq!(&z.sum, &two);
                }
            }
            let report = euler_characteristics(&tri, &surface, &theta).unwrap();
            prop_assert_eq!(report.chi_angle.clone(), Rational::from_integer(report.chi_combinatorial.into()));
            prop_assert!(report.chi_combinatorial <= 0);
            let types: Vec<DiskType> = surface.disks.iter().map(classify_disk).collect();
            let verdict = euler_verdict(&report, &types, 0.0);
            prop_assert!(verdict.holds(), "{}", verdict);
        }
    }

    #[test]
    fn vertex_links_are_parallel_to_the_boundary(seed in any::<u64>()) {
        let (tri, alpha) = strict(seed);
        for (c, component) in tri.boundary_components().iter().enumerate() {
            let link = SurfaceComplex::vertex_link(&tri, c).unwrap();
            prop_assert_eq!(link.disks.len(), component.triangles.len());
            let theta = inner_angles(&tri, &link, &alpha).unwrap();
            let report = euler_characteristics(&tri, &link, &theta).unwrap();
            prop_assert!(report.closed);
            prop_assert_eq!(report.chi_combinatorial, component.euler_characteristic());
        }
    }

    #[test]
    fn edge_tubes_are_annuli(seed in any::<u64>()) {
        let (tri, alpha) = strict(seed);
        for e in 0..tri.edge_classes().len() {
            let Ok(tube) = SurfaceComplex::edge_tube(&tri, e) else { continue };
            let types: Vec<DiskType> = tube.disks.iter().map(classify_disk).collect();
            prop_assert!(types.iter().all(|t| *t == DiskType::IV));
            let theta = inner_angles(&tri, &tube, &alpha).unwrap();
            let report = euler_characteristics(&tri, &tube, &theta).unwrap();
            prop_assert!(!report.closed);
            prop_assert_eq!(euler_verdict(&report, &types, 0.0), EulerVerdict::Zero);
        }
    }
}

#[test]
fn split_boundary_frontiers_contain_bent_quads() {
    let tri = common::valence8_split_cover();
    let alpha = solve(&build_polytope(&tri)).witness.unwrap();
    let mut seen = 0;
    for e in 0..tri.edge_classes().len() {
        for c in 0..2 {
            let Ok(s) = SurfaceComplex::frontier(&tri, &[c], &[e]) else {
                continue;
            };
            let types: Vec<DiskType> = s.disks.iter().map(classify_disk).collect();
            if !types.contains(&DiskType::III) {
                continue;
            }
            seen += 1;
            let theta = inner_angles(&tri, &s, &alpha).unwrap();
            let report = euler_characteristics(&tri, &s, &theta).unwrap();
            assert!(report.chi_combinatorial < 0);
            assert!(matches!(
                euler_verdict(&report, &types, 0.0),
                EulerVerdict::Negative { .. }
            ));
        }
    }
    assert!(seen > 0);
}

#[test]
fn surface_json_round_trips() {
    let tri = common::load("three_valence8_edges.json");
    let tube = SurfaceComplex::edge_tube(&tri, 0).unwrap();
    assert_eq!(SurfaceComplex::from_json(&tube.to_json()).unwrap(), tube);
    assert!(matches!(
        SurfaceComplex::from_json("{\"disks\": 3}"),
        Err(SurfaceError::Json(_))
    ));
}

#[test]
fn a_lone_disk_has_open_sides() {
    let tri = common::load("three_valence8_edges.json");
    let result = SurfaceComplex::auto_pair(&tri, vec![AdmissibleDisk::triangle(0, 0)]);
    assert!(matches!(result, Err(SurfaceError::OpenSide { .. })));
}
