//! Gram matrix, edge lengths and volume of a few hyperideal tetrahedra.

use std::f64::consts::PI;

use anglers::geometry::{is_realizable, AngleSextuple, TetGeometry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let shapes = [
        ("regular π/4", AngleSextuple::uniform(PI / 4.0)),
        ("regular π/5", AngleSextuple::uniform(PI / 5.0)),
        ("mixed", AngleSextuple([0.3, 0.5, 0.7, 0.4, 0.6, 0.2])),
    ];
    for (name, angles) in shapes {
        if !is_realizable(&angles)? {
            println!("{name}: not realizable");
            continue;
        }
        let tet = TetGeometry::new(angles)?;
        println!("{name}: volume {:.10}", tet.volume);
        println!("  edge lengths {:.6?}", tet.edge_lengths);
        println!(
            "  det Gram {:.6e}, signature {:?}",
            tet.gram.determinant(),
            tet.gram.signature(1e-9)
        );
    }
    Ok(())
}
