//! Loads a gluing file and prints its edge classes and boundary components.
//!
//! `cargo run --example inspect_triangulation [file.json]`

use anglers::triangulation::{IdealTriangulation, TriangulationData};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/data/genus2_one_edge.json").into()
    });
    let data: TriangulationData = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    let tri = IdealTriangulation::from_data(&data)?;
    println!(
        "{} tetrahedra, orientable: {}",
        tri.tet_count(),
        tri.is_orientable()
    );
    for (i, class) in tri.edge_classes().iter().enumerate() {
        println!("edge class {i}: valence {}", class.valence());
    }
    for (i, comp) in tri.boundary_components().iter().enumerate() {
        println!(
            "boundary component {i}: χ = {}",
            comp.euler_characteristic()
        );
    }
    Ok(())
}
