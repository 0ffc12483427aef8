//! Solves the max-slack LP exactly and prints either a strict angle
//! structure or a Farkas certificate.
//!
//! `cargo run --example find_angle_structure [file.json]`

use anglers::angles::{build_polytope, solve, FeasibilityStatus};
use anglers::triangulation::{IdealTriangulation, TriangulationData};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let paths: Vec<String> = match std::env::args().nth(1) {
        Some(p) => vec![p],
        None => vec![
            format!("{dir}/three_valence8_edges.json"),
            format!("{dir}/valence2_edge.json"),
        ],
    };
    for path in paths {
        let data: TriangulationData = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
        let tri = IdealTriangulation::from_data(&data)?;
        let polytope = build_polytope(&tri);
        let out = solve(&polytope);
        println!("{path}");
        println!("  status {}, s* = {}π", out.status.as_str(), out.slack);
        if out.status == FeasibilityStatus::StrictlyFeasible {
            let alpha = out.witness.expect("strict outcomes carry a witness");
            let first: Vec<String> = alpha.values[..6].iter().map(|v| v.to_string()).collect();
            println!("  tetrahedron 0 (π units): {}", first.join(" "));
        }
        if let Some(cert) = out.certificate {
            let bound = cert.check(&polytope)?;
            println!("  certificate checks, bound {bound}");
        }
    }
    Ok(())
}
