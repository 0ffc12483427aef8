//! Builds vertex links and edge tubes, then compares the combinatorial Euler
//! characteristic with the angle sum.

use anglers::angles::{build_polytope, solve};
use anglers::surfaces::{
    classify_disk, euler_characteristics, euler_verdict, inner_angles, SurfaceComplex,
};
use anglers::triangulation::{IdealTriangulation, TriangulationData};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/three_valence8_edges.json"
    );
    let data: TriangulationData = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let tri = IdealTriangulation::from_data(&data)?;
    let alpha = solve(&build_polytope(&tri))
        .witness
        .ok_or("no angle structure")?;
    let mut surfaces = Vec::new();
    for c in 0..tri.boundary_components().len() {
        surfaces.push((
            format!("link of component {c}"),
            SurfaceComplex::vertex_link(&tri, c)?,
        ));
    }
    for e in 0..tri.edge_classes().len() {
        surfaces.push((
            format!("tube around edge {e}"),
            SurfaceComplex::edge_tube(&tri, e)?,
        ));
    }
    for (name, surface) in surfaces {
        let theta = inner_angles(&tri, &surface, &alpha)?;
        let report = euler_characteristics(&tri, &surface, &theta)?;
        let types: Vec<_> = surface.disks.iter().map(classify_disk).collect();
        println!(
            "{name}: {} disks, χ = {}, angle sum gives {}, verdict {}",
            surface.disks.len(),
            report.chi_combinatorial,
            report.chi_angle,
            euler_verdict(&report, &types, 0.0)
        );
    }
    Ok(())
}
