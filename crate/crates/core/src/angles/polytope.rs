use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{AngleAssignment, AngleError, TetTag};
use crate::lp::{LinearProgram, LpResult, Rational, Relation};
use crate::triangulation::{EdgeIndex, IdealTriangulation};

/// Edge-class equality restricted to the free corners.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeRow {
    pub class: usize,
    /// `(slot, multiplicity)` for each free corner of the class.
    pub terms: Vec<(usize, u32)>,
    /// 2 minus the fixed corners' contribution, in units of π.
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexRow {
    pub tet: usize,
    pub vertex: usize,
    pub slots: [usize; 3],
}

/// The system `Σ_e x = 2`, `Σ_v x + s <= 1`, `x - s >= 0`, maximize `s`,
/// in units of π. Corners of flat tetrahedra may be fixed; they then drop
/// out of the variables and their tetrahedra contribute no vertex rows.
#[derive(Clone, Debug, PartialEq)]
pub struct AnglePolytope {
    fixed: Vec<Option<Rational>>,
    edge_rows: Vec<EdgeRow>,
    vertex_rows: Vec<VertexRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolytopeDims {
    /// Free corners plus the slack `s`.
    pub variables: usize,
    pub equalities: usize,
    pub vertex_inequalities: usize,
    pub positivity_inequalities: usize,
}

impl fmt::Display for PolytopeDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} variables, {} equalities, {} vertex inequalities, {} positivity inequalities",
            self.variables, self.equalities, self.vertex_inequalities, self.positivity_inequalities
        )
    }
}

/// The angle polytope with every corner free.
pub fn build_polytope(tri: &IdealTriangulation) -> AnglePolytope {
    let fixed = vec![None; tri.corner_count()];
    assemble(tri, fixed)
}

/// The polytope of partially flat assignments: tetrahedra tagged flat carry
/// the given flat values and the rest are free.
///
/// Fails if some edge class has no free corner.
pub fn build_polytope_with_flats(
    tri: &IdealTriangulation,
    tags: &[TetTag],
    values: &[Rational],
) -> Result<AnglePolytope, AngleError> {
    if tags.len() != tri.tet_count() {
        return Err(AngleError::WrongTagCount {
            expected: tri.tet_count(),
            got: tags.len(),
        });
    }
    if values.len() != tri.corner_count() {
        return Err(AngleError::WrongLength {
            expected: tri.corner_count(),
            got: values.len(),
        });
    }
    let fixed: Vec<Option<Rational>> = (0..tri.corner_count())
        .map(|slot| (tags[slot / 6] == TetTag::Flat).then(|| values[slot].clone()))
        .collect();
    let polytope = assemble(tri, fixed);
    if let Some(row) = polytope.edge_rows.iter().find(|r| r.terms.is_empty()) {
        return Err(AngleError::NoInteriorAngle { edge: row.class });
    }
    Ok(polytope)
}

fn assemble(tri: &IdealTriangulation, fixed: Vec<Option<Rational>>) -> AnglePolytope {
    let mut edge_rows = Vec::with_capacity(tri.edge_classes().len());
    for class in tri.edge_classes() {
        let mut terms: Vec<(usize, u32)> = Vec::new();
        let mut rhs = Rational::from_integer(2.into());
        for c in &class.corners {
            let slot = c.slot();
            match &fixed[slot] {
                Some(v) => rhs -= v,
                None => match terms.iter_mut().find(|(s, _)| *s == slot) {
                    Some((_, m)) => *m += 1,
                    None => terms.push((slot, 1)),
                },
            }
        }
        edge_rows.push(EdgeRow {
            class: class.id,
            terms,
            rhs,
        });
    }
    let mut vertex_rows = Vec::new();
    for tet in 0..tri.tet_count() {
        if (0..6).any(|e| fixed[6 * tet + e].is_some()) {
            continue;
        }
        for vertex in 0..4 {
            vertex_rows.push(VertexRow {
                tet,
                vertex,
                slots: EdgeIndex::at_vertex(vertex).map(|e| 6 * tet + e.index()),
            });
        }
    }
    AnglePolytope {
        fixed,
        edge_rows,
        vertex_rows,
    }
}

impl AnglePolytope {
    pub fn corner_count(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_free(&self, slot: usize) -> bool {
        self.fixed[slot].is_none()
    }

    pub fn edge_rows(&self) -> &[EdgeRow] {
        &self.edge_rows
    }

    pub fn vertex_rows(&self) -> &[VertexRow] {
        &self.vertex_rows
    }

    pub fn free_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.fixed.len()).filter(|&s| self.fixed[s].is_none())
    }

    pub fn dims(&self) -> PolytopeDims {
        let free = self.free_slots().count();
        PolytopeDims {
            variables: free + 1,
            equalities: self.edge_rows.len(),
            vertex_inequalities: self.vertex_rows.len(),
            positivity_inequalities: free,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibilityStatus {
    StrictlyFeasible,
    BoundaryFeasible,
    Infeasible,
}

impl FeasibilityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FeasibilityStatus::StrictlyFeasible => "strictly_feasible",
            FeasibilityStatus::BoundaryFeasible => "boundary_feasible",
            FeasibilityStatus::Infeasible => "infeasible",
        }
    }
}

/// Multipliers proving that no strict solution exists.
///
/// `edge[i]` weighs edge row `i`, `vertex[j] >= 0` vertex row `j`, and
/// `corner[slot] >= 0` the positivity of each free corner. They satisfy
/// `Aᵀy + Vᵀu = w` column by column, are normalized by `Σu + Σw = 1`, and
/// `bound = Σ y·rhs + Σu <= 0`. Pairing with a strict solution `x` gives
/// `0 < Σ w·x = Σ y·rhs + Σ u·(Vx) < bound <= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FarkasCertificate {
    pub edge: Vec<Rational>,
    pub vertex: Vec<Rational>,
    pub corner: Vec<Rational>,
}

impl FarkasCertificate {
    /// Recombines the multipliers exactly and returns `bound`.
    pub fn check(&self, polytope: &AnglePolytope) -> Result<Rational, String> {
        if self.edge.len() != polytope.edge_rows.len()
            || self.vertex.len() != polytope.vertex_rows.len()
            || self.corner.len() != polytope.corner_count()
        {
            return Err("multiplier vector lengths do not match the polytope".into());
        }
        if let Some(j) = self.vertex.iter().position(Signed::is_negative) {
            return Err(format!("vertex multiplier {j} is negative"));
        }
        if let Some(c) = self.corner.iter().position(Signed::is_negative) {
            return Err(format!("corner multiplier {c} is negative"));
        }
        let mut column = vec![Rational::zero(); polytope.corner_count()];
        for (row, y) in polytope.edge_rows.iter().zip(&self.edge) {
            for &(slot, m) in &row.terms {
                column[slot] += y * Rational::from_integer(m.into());
            }
        }
        for (row, u) in polytope.vertex_rows.iter().zip(&self.vertex) {
            for &slot in &row.slots {
                column[slot] += u;
            }
        }
        for (slot, (a, w)) in column.iter().zip(&self.corner).enumerate() {
            if !polytope.is_free(slot) {
                if !w.is_zero() {
                    return Err(format!("fixed corner {slot} has a nonzero multiplier"));
                }
                continue;
            }
            if a != w {
                return Err(format!("column {slot} does not cancel: {a} != {w}"));
            }
        }
        let total: Rational = self.vertex.iter().chain(&self.corner).sum();
        if !total.is_one() {
            return Err(format!("multipliers sum to {total}, not 1"));
        }
        let bound: Rational = polytope
            .edge_rows
            .iter()
            .zip(&self.edge)
            .map(|(row, y)| y * &row.rhs)
            .sum::<Rational>()
            + self.vertex.iter().sum::<Rational>();
        if bound.is_positive() {
            return Err(format!("combination bound {bound} is positive"));
        }
        Ok(bound)
    }
}

/// Result of the max-slack program.
#[derive(Clone, Debug, PartialEq)]
pub struct LpOutcome {
    pub status: FeasibilityStatus,
    /// Optimal slack `s*` in units of π.
    pub slack: Rational,
    /// Max-slack point; present unless infeasible.
    pub witness: Option<AngleAssignment<Rational>>,
    /// Present unless strictly feasible.
    pub certificate: Option<FarkasCertificate>,
}

impl LpOutcome {
    pub fn is_strictly_feasible(&self) -> bool {
        self.status == FeasibilityStatus::StrictlyFeasible
    }
}

/// Solves the max-slack program exactly.
///
/// Internally substitutes `x = z + s` with `z >= 0`, so positivity becomes
/// a sign constraint and the duals of the edge and vertex rows, together
/// with the reduced costs of `z`, form the certificate.
pub fn solve(polytope: &AnglePolytope) -> LpOutcome {
    let n = polytope.corner_count();
    let mut lp = LinearProgram::new();
    let mut var_of_slot = vec![usize::MAX; n];
    for slot in polytope.free_slots() {
        var_of_slot[slot] = lp.add_var(Rational::zero());
    }
    let s = lp.add_free_var(Rational::one());
    for row in &polytope.edge_rows {
        let mut coeffs: Vec<(usize, Rational)> = row
            .terms
            .iter()
            .map(|&(slot, m)| (var_of_slot[slot], Rational::from_integer(m.into())))
            .collect();
        let weight: u32 = row.terms.iter().map(|&(_, m)| m).sum();
        coeffs.push((s, Rational::from_integer(weight.into())));
        lp.add_row(coeffs, Relation::Eq, row.rhs.clone());
    }
    for row in &polytope.vertex_rows {
        let mut coeffs: Vec<(usize, Rational)> = row
            .slots
            .iter()
            .map(|&slot| (var_of_slot[slot], Rational::one()))
            .collect();
        coeffs.push((s, Rational::from_integer(4.into())));
        lp.add_row(coeffs, Relation::Le, Rational::one());
    }
    let (x, duals, slack) = match lp.solve() {
        LpResult::Optimal {
            x,
            duals,
            objective,
        } => (x, duals, objective),
        LpResult::Infeasible { .. } => {
            unreachable!("every edge row has a free corner, so s can decrease until feasible")
        }
        LpResult::Unbounded => unreachable!("vertex rows bound s by 1/4"),
    };
    let status = if slack.is_positive() {
        FeasibilityStatus::StrictlyFeasible
    } else if slack.is_zero() {
        FeasibilityStatus::BoundaryFeasible
    } else {
        FeasibilityStatus::Infeasible
    };
    let witness = (status != FeasibilityStatus::Infeasible).then(|| {
        let values = (0..n)
            .map(|slot| match &polytope.fixed[slot] {
                Some(v) => v.clone(),
                None => &x[var_of_slot[slot]] + &x[s],
            })
            .collect();
        AngleAssignment::new(values)
    });
    let certificate = (status != FeasibilityStatus::StrictlyFeasible).then(|| {
        let m = polytope.edge_rows.len();
        let edge = duals[..m].to_vec();
        let vertex = duals[m..].to_vec();
        let mut corner = vec![Rational::zero(); n];
        for (row, y) in polytope.edge_rows.iter().zip(&edge) {
            for &(slot, mult) in &row.terms {
                corner[slot] += y * Rational::from_integer(mult.into());
            }
        }
        for (row, u) in polytope.vertex_rows.iter().zip(&vertex) {
            for &slot in &row.slots {
                corner[slot] += u;
            }
        }
        FarkasCertificate {
            edge,
            vertex,
            corner,
        }
    });
    LpOutcome {
        status,
        slack,
        witness,
        certificate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{ratio, verify};
    use crate::triangulation::{BuildOptions, TriangulationData};

    fn load(json: &str) -> IdealTriangulation {
        let data: TriangulationData = serde_json::from_str(json).unwrap();
        IdealTriangulation::from_data(&data).unwrap()
    }

    #[test]
    fn unglued_tetrahedron_is_infeasible() {
        let data = TriangulationData {
            tets: 1,
            gluings: vec![],
        };
        let opts = BuildOptions {
            allow_open_faces: true,
            ..Default::default()
        };
        let tri = IdealTriangulation::build(&data, opts).unwrap();
        let p = build_polytope(&tri);
        assert_eq!(p.dims().equalities, 6);
        let out = solve(&p);
        assert_eq!(out.status, FeasibilityStatus::Infeasible);
        // Each angle is forced to 2, so a vertex row reads 6 + s <= 1.
        assert_eq!(out.slack, ratio(-5, 1));
        let bound = out.certificate.unwrap().check(&p).unwrap();
        assert!(bound.is_negative());
    }

    #[test]
    fn single_edge_counts() {
        let tri = load(include_str!("../../data/genus2_one_edge.json"));
        let p = build_polytope(&tri);
        let d = p.dims();
        assert_eq!(
            (d.equalities, d.vertex_inequalities, d.variables),
            (1, 8, 13)
        );
        let out = solve(&p);
        assert_eq!(out.status, FeasibilityStatus::StrictlyFeasible);
        assert_eq!(out.slack, ratio(1, 6));
        let w = out.witness.unwrap();
        assert!(verify(&tri, &w, 0.0).unwrap().passed());
    }

    #[test]
    fn valence8_gives_quarter() {
        let tri = load(include_str!("../../data/three_valence8_edges.json"));
        let out = solve(&build_polytope(&tri));
        assert_eq!(out.slack, ratio(1, 4));
        assert!(out
            .witness
            .unwrap()
            .values
            .iter()
            .all(|v| *v == ratio(1, 4)));
        assert!(out.certificate.is_none());
    }

    #[test]
    fn valence2_certificate_recombines() {
        let tri = load(include_str!("../../data/valence2_edge.json"));
        let p = build_polytope(&tri);
        let out = solve(&p);
        // Both corners of the valence-2 edge can reach π, so the optimum
        // sits exactly on the boundary.
        assert_eq!(out.status, FeasibilityStatus::BoundaryFeasible);
        assert!(!out.is_strictly_feasible());
        let bound = out.certificate.unwrap().check(&p).unwrap();
        assert!(bound.is_zero());
    }
}
