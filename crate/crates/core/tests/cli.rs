mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use anglers::angles::{build_polytope, AngleFile, FarkasCertificate};
use anglers::cli::{canonical_json, run_from, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK};
use anglers::surfaces::SurfaceComplex;
use serde_json::Value;

fn run(args: &[&str]) -> anglers::cli::CommandOutcome {
    run_from(std::iter::once("anglers").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn data(name: &str) -> String {
    common::data_path(name)
}

fn is_canonical(path: &Path) -> bool {
    let text = fs::read_to_string(path).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    canonical_json(&value) == text
}

#[test]
fn validate_reports_and_classifies_errors() {
    let out = run(&["validate", &data("three_valence8_edges.json")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.report);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"tets\": 1, \"gluings\": [").unwrap();
    assert_eq!(run(&["validate", s(&bad)]).code, EXIT_INPUT);
    assert_eq!(
        run(&["validate", s(&dir.path().join("missing.json"))]).code,
        EXIT_INPUT
    );
    assert_eq!(run(&["no-such-command"]).code, EXIT_INPUT);
}

#[test]
fn find_writes_a_canonical_witness() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("alpha.json");
    let out = run(&[
        "angles",
        "find",
        &data("three_valence8_edges.json"),
        "-o",
        s(&witness),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.report);
    assert!(is_canonical(&witness));
    let AngleFile::Exact(alpha) =
        AngleFile::from_json(&fs::read_to_string(&witness).unwrap()).unwrap()
    else {
        panic!("expected an exact witness");
    };
    assert!(alpha
        .values
        .iter()
        .all(|v| *v == anglers::angles::ratio(1, 4)));
    let check = run(&[
        "angles",
        "verify",
        &data("three_valence8_edges.json"),
        s(&witness),
    ]);
    assert_eq!(check.code, EXIT_OK, "{}", check.report);
}

#[test]
fn find_writes_a_certificate_when_there_is_no_witness() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("alpha.json");
    let cert = dir.path().join("cert.json");
    let tri = data("valence2_edge.json");
    let out = run(&[
        "angles",
        "find",
        &tri,
        "-o",
        s(&witness),
        "--certificate",
        s(&cert),
    ]);
    assert_eq!(out.code, EXIT_NEGATIVE, "{}", out.report);
    assert!(!witness.exists());
    assert!(is_canonical(&cert));
    let value: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let certificate =
        FarkasCertificate::from_value(value.get("certificate").unwrap_or(&value)).unwrap();
    let polytope = build_polytope(&common::load("valence2_edge.json"));
    assert!(certificate.check(&polytope).is_ok());
}

#[test]
fn tampered_angles_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("alpha.json");
    let tri = data("three_valence8_edges.json");
    run(&["angles", "find", &tri, "-o", s(&witness)]);
    let text = fs::read_to_string(&witness)
        .unwrap()
        .replacen("\"1/4\"", "\"1/3\"", 1);
    fs::write(&witness, text).unwrap();
    assert_eq!(
        run(&["angles", "verify", &tri, s(&witness)]).code,
        EXIT_NEGATIVE
    );
}

#[test]
fn layered_geometry_feeds_perturb_and_volume() {
    let dir = tempfile::tempdir().unwrap();
    let build = run(&[
        "layered",
        "build",
        &data("two_cubes.json"),
        "--geometry",
        "--out-dir",
        s(dir.path()),
    ]);
    assert_eq!(build.code, EXIT_OK, "{}", build.report);
    let tri = dir.path().join("triangulation.json");
    let beta = dir.path().join("beta.json");
    for f in [&tri, &beta, &dir.path().join("provenance.json")] {
        assert!(is_canonical(f), "{}", f.display());
    }
    let alpha = dir.path().join("alpha.json");
    let perturbed = run(&["angles", "perturb", s(&tri), s(&beta), "-o", s(&alpha)]);
    assert_eq!(perturbed.code, EXIT_OK, "{}", perturbed.report);
    let verified = run(&["angles", "verify", s(&tri), s(&alpha), "--tol", "1e-9"]);
    assert_eq!(verified.code, EXIT_OK, "{}", verified.report);
    let eval = run(&["volume", "eval", s(&tri), s(&alpha)]);
    assert_eq!(eval.code, EXIT_OK, "{}", eval.report);
}

#[test]
fn layered_skeleton_feeds_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    let build = run(&[
        "layered",
        "build",
        &data("heptagon_pyramids.json"),
        "--out-dir",
        s(dir.path()),
    ]);
    assert_eq!(build.code, EXIT_OK, "{}", build.report);
    let tri = dir.path().join("triangulation.json");
    let tags = dir.path().join("tags.json");
    assert!(tags.exists());
    let out = run(&[
        "angles",
        "find",
        s(&tri),
        "--flats",
        s(&tags),
        "-o",
        s(&dir.path().join("a.json")),
    ]);
    assert_eq!(out.code, EXIT_NEGATIVE, "{}", out.report);
    let cubes = run(&[
        "layered",
        "build",
        &data("two_cubes.json"),
        "--out-dir",
        s(dir.path()),
    ]);
    assert_eq!(cubes.code, EXIT_OK);
    let out = run(&[
        "angles",
        "find",
        s(&tri),
        "--flats",
        s(&tags),
        "-o",
        s(&dir.path().join("a.json")),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.report);
}

fn maximize(dir: &Path, tag: &str) -> (String, String) {
    let tri = data("three_valence8_edges.json");
    let start = dir.join("start.json");
    let alpha = dir.join(format!("{tag}.json"));
    let report = dir.join(format!("{tag}.report.json"));
    fs::write(
        &start,
        canonical_json(&AngleFile::Radians(perturbed_start()).to_value()),
    )
    .unwrap();
    let out = run(&[
        "volume",
        "maximize",
        &tri,
        s(&start),
        "-o",
        s(&alpha),
        "--report",
        s(&report),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.report);
    (
        fs::read_to_string(alpha).unwrap(),
        fs::read_to_string(report).unwrap(),
    )
}

fn perturbed_start() -> anglers::angles::AngleAssignment<f64> {
    let tri = common::load("three_valence8_edges.json");
    let mut x = anglers::angles::AngleAssignment::uniform(&tri, std::f64::consts::PI / 4.0);
    let class = &tri.edge_classes()[0];
    x.values[class.corners[0].slot()] += 0.05;
    x.values[class.corners[1].slot()] -= 0.05;
    x
}

#[test]
fn maximize_is_deterministic_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (a1, r1) = maximize(dir.path(), "one");
    let (a2, r2) = maximize(dir.path(), "two");
    assert_eq!(a1, a2);
    assert_eq!(r1, r2);
    let report: Value = serde_json::from_str(&r1).unwrap();
    assert_eq!(report["status"], "critical");
    for key in ["volume", "iterations", "residuals"] {
        assert!(report.get(key).is_some(), "{key}");
    }
}

#[test]
fn surface_check_accepts_an_edge_tube() {
    let dir = tempfile::tempdir().unwrap();
    let tri_path = data("three_valence8_edges.json");
    let alpha = dir.path().join("alpha.json");
    run(&["angles", "find", &tri_path, "-o", s(&alpha)]);
    let tube = SurfaceComplex::edge_tube(&common::load("three_valence8_edges.json"), 1).unwrap();
    let surface = dir.path().join("tube.json");
    fs::write(&surface, tube.to_json()).unwrap();
    let out = run(&["surface", "check", &tri_path, s(&alpha), s(&surface)]);
    assert_eq!(out.code, EXIT_OK, "{}", out.report);
    assert!(out.report.contains("tube"));
    let mut broken = tube;
    broken.pairings.pop();
    fs::write(&surface, broken.to_json()).unwrap();
    assert_eq!(
        run(&["surface", "check", &tri_path, s(&alpha), s(&surface)]).code,
        EXIT_INPUT
    );
}

#[test]
fn binary_exit_codes() {
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_anglers"));
    let dir = tempfile::tempdir().unwrap();
    let status = |args: &[&str]| Command::new(&bin).args(args).output().unwrap();
    let ok = status(&["validate", &data("genus2_one_edge.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(!ok.stdout.is_empty());
    let negative = status(&[
        "angles",
        "find",
        &data("valence2_edge.json"),
        "-o",
        s(&dir.path().join("a.json")),
    ]);
    assert_eq!(negative.status.code(), Some(1));
    let bad = status(&[
        "angles",
        "verify",
        &data("valence2_edge.json"),
        &data("two_cubes.json"),
    ]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
