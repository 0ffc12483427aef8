use std::fmt;

use super::{
    gluing_table, BoundaryComponent, BuildOptions, EdgeClass, FaceRef, IdealTriangulation,
    TriangulationData,
};

/// Outcome of [`validate`]. Failures make the triangulation unusable (or
/// unoriented); warnings flag inputs outside the negative-Euler-characteristic
/// boundary setting.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
    pub edge_classes: Vec<EdgeClass>,
    pub boundary: Vec<BoundaryComponent>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks gluing involution, orientability and boundary Euler characteristics.
pub fn validate(data: &TriangulationData) -> ValidationReport {
    let mut report = ValidationReport::default();
    let table = match gluing_table(data) {
        Ok(t) => t,
        Err(e) => {
            report.failures.push(format!("gluing: {e}"));
            return report;
        }
    };
    let mut closed = true;
    for (t, faces) in table.iter().enumerate() {
        for (f, g) in faces.iter().enumerate() {
            match g {
                None => {
                    closed = false;
                    report.failures.push(format!(
                        "gluing: face {:?} is not glued",
                        FaceRef::new(t, f)
                    ));
                }
                Some(g) => {
                    let back = table[g.tet][g.face].expect("table is symmetric");
                    if g.perm.then(back.perm) != super::Perm4::IDENTITY {
                        report.failures.push(format!(
                            "involution: gluing {:?} -> {:?} is not undone by its inverse",
                            FaceRef::new(t, f),
                            FaceRef::new(g.tet, g.face)
                        ));
                    }
                    let here = FaceRef::new(t, f);
                    let there = FaceRef::new(g.tet, g.face);
                    if here < there && !g.perm.is_odd() {
                        report.failures.push(format!(
                            "orientability: gluing {here:?} <-> {there:?} uses even permutation {}",
                            g.perm
                        ));
                    }
                }
            }
        }
    }
    if !closed {
        return report;
    }
    let opts = BuildOptions {
        require_orientable: false,
        allow_open_faces: false,
    };
    let tri = match IdealTriangulation::build(data, opts) {
        Ok(tri) => tri,
        Err(e) => {
            report.failures.push(format!("build: {e}"));
            return report;
        }
    };
    for b in tri.boundary_components() {
        let chi = b.euler_characteristic();
        if chi >= 0 {
            report.warnings.push(format!(
                "boundary component {} has non-negative boundary Euler characteristic {chi}",
                b.id
            ));
        }
    }
    for c in tri.edge_classes() {
        if c.folded {
            report
                .warnings
                .push(format!("edge class {} is glued to itself in reverse", c.id));
        }
    }
    report.edge_classes = tri.edge_classes().to_vec();
    report.boundary = tri.boundary_components().to_vec();
    report
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.edge_classes.is_empty() {
            writeln!(f, "edge classes:")?;
            writeln!(f, "  {:>4}  {:>7}  corners", "id", "valence")?;
            for c in &self.edge_classes {
                let corners: Vec<String> = c.corners.iter().map(|k| k.to_string()).collect();
                writeln!(
                    f,
                    "  {:>4}  {:>7}  {}",
                    c.id,
                    c.valence(),
                    corners.join(" ")
                )?;
            }
        }
        if !self.boundary.is_empty() {
            writeln!(f, "boundary components:")?;
            for b in &self.boundary {
                writeln!(
                    f,
                    "  {}: V={} E={} F={} chi={}",
                    b.id,
                    b.vertices,
                    b.edges,
                    b.faces,
                    b.euler_characteristic()
                )?;
            }
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        for e in &self.failures {
            writeln!(f, "failure: {e}")?;
        }
        if self.passed() {
            writeln!(f, "ok")?;
        }
        Ok(())
    }
}
