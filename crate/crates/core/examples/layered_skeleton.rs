//! Combinatorial layering of two heptagonal pyramids glued with a twist.
//! The flat layer forces every strict structure away, which the LP confirms.

use anglers::angles::solve;
use anglers::layered::{build, BuildMode, Decomposition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/heptagon_pyramids.json");
    let decomp = Decomposition::from_json(&std::fs::read_to_string(path)?)?;
    let out = build(&decomp, BuildMode::Combinatorial)?;
    println!("{} tetrahedra", out.triangulation.tet_count());
    for (i, flat) in out.flats_on(0).iter().enumerate() {
        println!("flat {i} on vertices {flat:?}");
    }
    let lp = solve(&out.polytope()?);
    println!(
        "status with flats pinned: {}, s* = {}π",
        lp.status.as_str(),
        lp.slack
    );
    Ok(())
}
