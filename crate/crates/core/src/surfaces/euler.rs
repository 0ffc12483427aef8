use std::fmt;

use super::{
    cell_structure, classify_disk, CellStructure, DiskType, SurfaceComplex, SurfaceCorner,
    SurfaceError,
};
use crate::angles::{AngleAssignment, AngleScalar};
use crate::triangulation::{Corner, IdealTriangulation};

/// One inner angle per disk corner: the dihedral angle at an internal
/// corner, `π/2` at an external one.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerAngles<S> {
    pub theta: Vec<Vec<S>>,
}

impl<S: AngleScalar> InnerAngles<S> {
    pub fn disk_sum(&self, disk: usize) -> S {
        self.theta[disk]
            .iter()
            .cloned()
            .fold(S::zero(), |acc, x| acc + x)
    }
}

pub fn inner_angles<S: AngleScalar>(
    tri: &IdealTriangulation,
    surface: &SurfaceComplex,
    alpha: &AngleAssignment<S>,
) -> Result<InnerAngles<S>, SurfaceError> {
    surface.check_references(tri)?;
    if alpha.values.len() != tri.corner_count() {
        return Err(SurfaceError::WrongLength {
            expected: tri.corner_count(),
            got: alpha.values.len(),
        });
    }
    let half = S::pi() / S::from_i64(2);
    let theta = surface
        .disks
        .iter()
        .map(|disk| {
            disk.corners
                .iter()
                .map(|c| match *c {
                    SurfaceCorner::Internal { edge } => {
                        alpha.get(Corner::new(disk.tet, edge)).clone()
                    }
                    SurfaceCorner::External { .. } => half.clone(),
                })
                .collect()
        })
        .collect();
    Ok(InnerAngles { theta })
}

/// Angle sum around one 0-cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCellSum<S> {
    pub cell: usize,
    pub external: bool,
    pub corners: usize,
    pub sum: S,
    /// `2π` for an internal 0-cell, `π` for an external one.
    pub target: S,
    pub ok: bool,
}

/// Angle sum of one disk against `(k - 2)π`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskAngleBound<S> {
    pub disk: usize,
    pub kind: DiskType,
    pub k: usize,
    pub sum: S,
    /// `(k - 2)π - sum`.
    pub margin: S,
    /// The margin is nonnegative, and zero exactly for type IV.
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiskAngleReport<S> {
    pub zero_cells: Vec<ZeroCellSum<S>>,
    pub disks: Vec<DiskAngleBound<S>>,
}

impl<S> DiskAngleReport<S> {
    pub fn passed(&self) -> bool {
        self.zero_cells.iter().all(|z| z.ok) && self.disks.iter().all(|d| d.ok)
    }
}

impl<S: AngleScalar> fmt::Display for DiskAngleReport<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for z in self.zero_cells.iter().filter(|z| !z.ok) {
            let kind = if z.external { "external" } else { "internal" };
            writeln!(
                f,
                "{kind} 0-cell {}: {} corners, angle sum {} (expected {})",
                z.cell, z.corners, z.sum, z.target
            )?;
        }
        for d in &self.disks {
            let mark = if d.ok { "ok" } else { "FAIL" };
            writeln!(
                f,
                "disk {} type {} k={}: sum {} margin {} {mark}",
                d.disk, d.kind, d.k, d.sum, d.margin
            )?;
        }
        Ok(())
    }
}

fn is_nonnegative<S: AngleScalar>(x: &S, tol: f64) -> bool {
    *x >= S::zero() || x.within(tol)
}

/// Per-0-cell angle sums and per-disk bounds `Σθ <= (k - 2)π`, with
/// equality exactly for type IV disks. `tol` is ignored for exact scalars.
pub fn check_disk_angle_bounds<S: AngleScalar>(
    tri: &IdealTriangulation,
    surface: &SurfaceComplex,
    theta: &InnerAngles<S>,
    tol: f64,
) -> Result<DiskAngleReport<S>, SurfaceError> {
    let cells = cell_structure(tri, surface)?;
    Ok(angle_report(&cells, surface, theta, tol))
}

fn angle_report<S: AngleScalar>(
    cells: &CellStructure,
    surface: &SurfaceComplex,
    theta: &InnerAngles<S>,
    tol: f64,
) -> DiskAngleReport<S> {
    let zero_cells = cells
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let sum = v
                .corners
                .iter()
                .fold(S::zero(), |acc, &(d, c)| acc + theta.theta[d][c].clone());
            let target = if v.external {
                S::pi()
            } else {
                S::from_i64(2) * S::pi()
            };
            let count_ok = !v.external || v.corners.len() == 2;
            let ok = count_ok && (sum.clone() - target.clone()).within(tol);
            ZeroCellSum {
                cell: i,
                external: v.external,
                corners: v.corners.len(),
                sum,
                target,
                ok,
            }
        })
        .collect();
    let disks = surface
        .disks
        .iter()
        .enumerate()
        .map(|(d, disk)| {
            let kind = classify_disk(disk);
            let sum = theta.disk_sum(d);
            let margin = S::from_i64(disk.k() as i64 - 2) * S::pi() - sum.clone();
            let equal = margin.within(tol);
            let ok = is_nonnegative(&margin, tol) && (equal == (kind == DiskType::IV));
            DiskAngleBound {
                disk: d,
                kind,
                k: disk.k(),
                sum,
                margin,
                ok,
            }
        })
        .collect();
    DiskAngleReport { zero_cells, disks }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerReport<S> {
    /// `|V| - |E| + |F|` of the induced cell decomposition.
    pub chi_combinatorial: i64,
    /// `(1/2π) Σ_D (Σθ - (k - 2)π)`, through the double when the surface
    /// has boundary.
    pub chi_angle: S,
    pub closed: bool,
    /// Both values for the double of a surface with boundary.
    pub double: Option<(i64, S)>,
}

pub fn euler_characteristics<S: AngleScalar>(
    tri: &IdealTriangulation,
    surface: &SurfaceComplex,
    theta: &InnerAngles<S>,
) -> Result<EulerReport<S>, SurfaceError> {
    let cells = cell_structure(tri, surface)?;
    Ok(euler_report(&cells, surface, theta))
}

fn euler_report<S: AngleScalar>(
    cells: &CellStructure,
    surface: &SurfaceComplex,
    theta: &InnerAngles<S>,
) -> EulerReport<S> {
    let defect = surface
        .disks
        .iter()
        .enumerate()
        .fold(S::zero(), |acc, (d, disk)| {
            acc + theta.disk_sum(d) - S::from_i64(disk.k() as i64 - 2) * S::pi()
        });
    let two_pi = S::from_i64(2) * S::pi();
    let chi = cells.euler_characteristic();
    if cells.unpaired.is_empty() {
        return EulerReport {
            chi_combinatorial: chi,
            chi_angle: defect / two_pi,
            closed: true,
            double: None,
        };
    }
    // The double has two copies of every disk, internal 0-cell and paired
    // side; external 0-cells and unpaired sides are shared by both copies.
    let v = 2 * cells.vertices.len() - cells.external_vertex_count();
    let e = 2 * cells.paired_sides + cells.unpaired.len();
    let f = 2 * cells.faces;
    let chi_double = v as i64 - e as i64 + f as i64;
    let angle_double = S::from_i64(2) * defect / two_pi;
    EulerReport {
        chi_combinatorial: chi,
        chi_angle: angle_double.clone() / S::from_i64(2),
        closed: false,
        double: Some((chi_double, angle_double)),
    }
}

/// Outcome of comparing both Euler characteristics against `χ <= 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum EulerVerdict {
    /// `χ = 0` and every disk has type IV.
    Zero,
    /// `χ < 0`; the disks not of type IV are listed.
    Negative { chi: i64, offending: Vec<usize> },
    /// The angle formula disagrees with the cell count, which points at a
    /// bad encoding.
    Inconsistent {
        chi_angle: f64,
        chi_combinatorial: i64,
    },
    /// `χ > 0`, or `χ = 0` with some disk not of type IV.
    Contradiction { chi: i64, offending: Vec<usize> },
}

impl EulerVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, EulerVerdict::Zero | EulerVerdict::Negative { .. })
    }
}

impl fmt::Display for EulerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EulerVerdict::Zero => write!(f, "chi = 0, every disk of type IV"),
            EulerVerdict::Negative { chi, offending } => {
                write!(f, "chi = {chi} < 0, disks not of type IV: {offending:?}")
            }
            EulerVerdict::Inconsistent {
                chi_angle,
                chi_combinatorial,
            } => write!(
                f,
                "inconsistent encoding: angle formula gives {chi_angle}, cells give {chi_combinatorial}"
            ),
            EulerVerdict::Contradiction { chi, offending } => {
                write!(f, "chi = {chi} contradicts the bound; disks not of type IV: {offending:?}")
            }
        }
    }
}

pub fn euler_verdict<S: AngleScalar>(
    report: &EulerReport<S>,
    types: &[DiskType],
    tol: f64,
) -> EulerVerdict {
    let chi = report.chi_combinatorial;
    if !(report.chi_angle.clone() - S::from_i64(chi)).within(tol) {
        return EulerVerdict::Inconsistent {
            chi_angle: plain(&report.chi_angle),
            chi_combinatorial: chi,
        };
    }
    let offending: Vec<usize> = types
        .iter()
        .enumerate()
        .filter(|(_, t)| **t != DiskType::IV)
        .map(|(i, _)| i)
        .collect();
    match chi.cmp(&0) {
        std::cmp::Ordering::Less => EulerVerdict::Negative { chi, offending },
        std::cmp::Ordering::Equal if offending.is_empty() => EulerVerdict::Zero,
        _ => EulerVerdict::Contradiction { chi, offending },
    }
}

/// A dimensionless scalar as `f64`; exact scalars count in units of π.
fn plain<S: AngleScalar>(x: &S) -> f64 {
    x.to_radians() / S::from_i64(1).to_radians()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{build_polytope, solve};
    use crate::lp::Rational;
    use crate::surfaces::AdmissibleDisk;
    use crate::triangulation::TriangulationData;

    fn load(json: &str) -> IdealTriangulation {
        let data: TriangulationData = serde_json::from_str(json).unwrap();
        IdealTriangulation::from_data(&data).unwrap()
    }

    fn witness(tri: &IdealTriangulation) -> AngleAssignment<Rational> {
        let out = solve(&build_polytope(tri));
        assert!(out.is_strictly_feasible());
        out.witness.unwrap()
    }

    #[test]
    fn edge_tube_is_an_annulus_of_type_iv_disks() {
        let tri = load(include_str!("../../data/three_valence8_edges.json"));
        let alpha = witness(&tri);
        for class in 0..tri.edge_classes().len() {
            let tube = SurfaceComplex::edge_tube(&tri, class).unwrap();
            assert_eq!(tube.disks.len(), 8);
            let theta = inner_angles(&tri, &tube, &alpha).unwrap();
            let half = Rational::new(1.into(), 2.into());
            assert!(theta.theta.iter().flatten().all(|t| *t == half));
            let bounds = check_disk_angle_bounds(&tri, &tube, &theta, 0.0).unwrap();
            assert!(bounds.passed(), "{bounds}");
            assert!(bounds
                .zero_cells
                .iter()
                .all(|z| z.external && z.corners == 2));
            let euler = euler_characteristics(&tri, &tube, &theta).unwrap();
            assert_eq!(euler.chi_combinatorial, 0);
            assert_eq!(euler.chi_angle, Rational::from_integer(0.into()));
            assert_eq!(euler.double.as_ref().unwrap().0, 0);
            assert_eq!(
                euler_verdict(&euler, &tube.disk_types(), 0.0),
                EulerVerdict::Zero
            );
        }
    }

    #[test]
    fn vertex_link_matches_boundary_euler_characteristic() {
        for json in [
            include_str!("../../data/genus2_one_edge.json"),
            include_str!("../../data/three_valence8_edges.json"),
        ] {
            let tri = load(json);
            let alpha = witness(&tri);
            for comp in tri.boundary_components() {
                let link = SurfaceComplex::vertex_link(&tri, comp.id).unwrap();
                assert!(link.is_closed());
                let theta = inner_angles(&tri, &link, &alpha).unwrap();
                let euler = euler_characteristics(&tri, &link, &theta).unwrap();
                assert_eq!(euler.chi_combinatorial, comp.euler_characteristic());
                assert_eq!(
                    euler.chi_angle,
                    Rational::from_integer(euler.chi_combinatorial.into())
                );
                let verdict = euler_verdict(&euler, &link.disk_types(), 0.0);
                assert!(
                    matches!(verdict, EulerVerdict::Negative { .. }),
                    "{verdict}"
                );
                assert!(check_disk_angle_bounds(&tri, &link, &theta, 0.0)
                    .unwrap()
                    .passed());
            }
        }
    }

    #[test]
    fn union_of_tubes_adds() {
        let tri = load(include_str!("../../data/three_valence8_edges.json"));
        let alpha = witness(&tri);
        let both = SurfaceComplex::edge_tube(&tri, 0)
            .unwrap()
            .disjoint_union(&SurfaceComplex::edge_tube(&tri, 1).unwrap());
        let theta = inner_angles(&tri, &both, &alpha).unwrap();
        let euler = euler_characteristics(&tri, &both, &theta).unwrap();
        assert_eq!(euler.chi_combinatorial, 0);
        assert_eq!(euler.chi_angle, Rational::from_integer(0.into()));
    }

    #[test]
    fn broken_pairing_is_reported() {
        let tri = load(include_str!("../../data/genus2_one_edge.json"));
        let mut link = SurfaceComplex::vertex_link(&tri, 0).unwrap();
        let [a, b] = link.pairings[0];
        link.pairings[0] = [a, (b.0, (b.1 + 1) % 3)];
        assert!(euler_characteristics(&tri, &link, &InnerAngles::<f64> { theta: vec![] }).is_err());
        link.pairings.remove(0);
        assert!(matches!(
            super::cell_structure(&tri, &link),
            Err(SurfaceError::OpenSide { .. }) | Err(SurfaceError::SideReused { .. })
        ));
    }

    #[test]
    fn mismatched_angle_sum_is_inconsistent() {
        let tri = load(include_str!("../../data/genus2_one_edge.json"));
        let link = SurfaceComplex::vertex_link(&tri, 0).unwrap();
        let alpha = AngleAssignment::uniform(&tri, Rational::new(1.into(), 4.into()));
        let theta = inner_angles(&tri, &link, &alpha).unwrap();
        let euler = euler_characteristics(&tri, &link, &theta).unwrap();
        let verdict = euler_verdict(&euler, &link.disk_types(), 0.0);
        assert!(
            matches!(verdict, EulerVerdict::Inconsistent { .. }),
            "{verdict}"
        );
    }

    #[test]
    fn inner_angles_of_model_disks() {
        let tri = load(include_str!("../../data/genus2_one_edge.json"));
        let alpha: AngleAssignment<f64> =
            AngleAssignment::new((0..12).map(|i| 0.1 + 0.01 * i as f64).collect());
        let s = SurfaceComplex::new(
            vec![
                AdmissibleDisk::triangle(1, 2),
                AdmissibleDisk::tube_quad(0, 1, 3),
            ],
            vec![],
        );
        let theta = inner_angles(&tri, &s, &alpha).unwrap();
        let expect: Vec<f64> = [1, 3, 5].iter().map(|&e| alpha.values[6 + e]).collect();
        assert_eq!(theta.theta[0], expect);
        assert_eq!(theta.theta[1], vec![std::f64::consts::FRAC_PI_2; 4]);
    }
}
