//! Cones two hyperideal cubes, layers flat tetrahedra over mismatched faces
//! and perturbs the result into a strict angle structure.
//!
//! `cargo run --example layered_cubes [decomposition.json]`

use anglers::angles::{perturb, t_max, verify};
use anglers::layered::{build, BuildMode, Decomposition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_cubes.json").into());
    let decomp = Decomposition::from_json(&std::fs::read_to_string(&path)?)?;
    let out = build(&decomp, BuildMode::Geometric)?;
    let tri = &out.triangulation;
    println!("{} tetrahedra, {} flat", tri.tet_count(), out.flat_count());
    let beta = out.beta.as_ref().ok_or("geometric builds carry angles")?;
    let bound = t_max(tri, beta)?;
    println!("t_max = {:.6} ({})", bound.value, bound.binding);
    for frac in [0.25, 0.5, 0.75] {
        let alpha = perturb(tri, beta, &(frac * bound.value))?;
        let report = verify(tri, &alpha, 1e-9)?;
        println!(
            "t = {frac} t_max: strict {}, min vertex margin {:.4}",
            report.passed(),
            report.min_vertex_margin()
        );
    }
    Ok(())
}
