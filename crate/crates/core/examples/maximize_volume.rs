//! Starts from a perturbed uniform structure and climbs to the volume
//! maximum.
//!
//! `cargo run --example maximize_volume [file.json]`

use std::f64::consts::PI;

use anglers::angles::AngleAssignment;
use anglers::triangulation::{IdealTriangulation, TriangulationData};
use anglers::volume_opt::{maximize, project, MaximizeOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data/three_valence8_edges.json"
        )
        .into()
    });
    let data: TriangulationData = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    let tri = IdealTriangulation::from_data(&data)?;
    let tilt: Vec<f64> = (0..tri.corner_count())
        .map(|i| ((i * 7) % 5) as f64 - 2.0)
        .collect();
    let d = project(&tri, &tilt);
    let top = d.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-12);
    let start = AngleAssignment::new(d.iter().map(|x| PI / 4.0 + 0.1 * x / top).collect());
    let out = maximize(&tri, &start, &MaximizeOptions::default())?;
    println!("start volume {:.10}", out.volumes[0]);
    println!(
        "final volume {:.10} after {} steps ({})",
        out.report.total_volume, out.iterations, out.status
    );
    println!("gradient norm {:.2e}", out.report.gradient_norm);
    println!(
        "edge length residual {:.2e}",
        out.report.edge_length_residual
    );
    Ok(())
}
