//! Surfaces assembled from admissible disks in the tetrahedra of a
//! triangulation, their admissibility conditions, disk types, inner angles
//! and Euler characteristics.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::triangulation::{EdgeIndex, IdealTriangulation, Perm4};
use crate::union_find::UnionFind;

mod build;
mod euler;

pub use euler::{
    check_disk_angle_bounds, euler_characteristics, euler_verdict, inner_angles, DiskAngleBound,
    DiskAngleReport, EulerReport, EulerVerdict, InnerAngles, ZeroCellSum,
};

/// A point where a disk boundary crosses the 1-skeleton of a truncated
/// tetrahedron: an edge, or an external edge `(vertex, face)` where the
/// hexagonal face `face` meets the truncation triangle at `vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SurfaceCorner {
    Internal { edge: EdgeIndex },
    External { vertex: usize, face: usize },
}

impl SurfaceCorner {
    pub fn internal(a: usize, b: usize) -> Self {
        SurfaceCorner::Internal {
            edge: EdgeIndex::from_vertices(a, b),
        }
    }

    pub fn external(vertex: usize, face: usize) -> Self {
        SurfaceCorner::External { vertex, face }
    }

    pub fn is_external(self) -> bool {
        matches!(self, SurfaceCorner::External { .. })
    }

    fn is_valid(self) -> bool {
        match self {
            SurfaceCorner::Internal { edge } => edge.index() < 6,
            SurfaceCorner::External { vertex, face } => vertex < 4 && face < 4 && vertex != face,
        }
    }

    /// The two 2-cells of the tetrahedron boundary containing this 1-cell.
    pub fn cells(self) -> [Cell; 2] {
        match self {
            SurfaceCorner::Internal { edge } => edge.complement().map(Cell::Face),
            SurfaceCorner::External { vertex, face } => [Cell::Face(face), Cell::External(vertex)],
        }
    }

    /// The 2-cell containing both 1-cells, if any. Distinct 1-cells share
    /// at most one.
    pub fn common_cell(self, other: SurfaceCorner) -> Option<Cell> {
        if self == other {
            return None;
        }
        let [a0, a1] = self.cells();
        let [b0, b1] = other.cells();
        [a0, a1].into_iter().find(|c| *c == b0 || *c == b1)
    }

    /// Whether the two 1-cells share an endpoint on the tetrahedron boundary.
    pub fn is_adjacent(self, other: SurfaceCorner) -> bool {
        use SurfaceCorner::*;
        match (self, other) {
            (Internal { .. }, Internal { .. }) => false,
            (Internal { edge }, External { vertex, face })
            | (External { vertex, face }, Internal { edge }) => {
                edge.contains(vertex) && !edge.contains(face)
            }
            (External { vertex: v, face: f }, External { vertex: w, face: g }) => v == w && f != g,
        }
    }

    /// Image under a face gluing with vertex permutation `p`.
    pub fn permuted(self, p: Perm4) -> Self {
        match self {
            SurfaceCorner::Internal { edge } => SurfaceCorner::Internal {
                edge: edge.permuted(p),
            },
            SurfaceCorner::External { vertex, face } => SurfaceCorner::External {
                vertex: p.apply(vertex),
                face: p.apply(face),
            },
        }
    }
}

impl fmt::Display for SurfaceCorner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceCorner::Internal { edge } => {
                let [a, b] = edge.vertices();
                write!(f, "edge {a}{b}")
            }
            SurfaceCorner::External { vertex, face } => {
                write!(f, "external edge (vertex {vertex}, face {face})")
            }
        }
    }
}

/// A 2-cell of the boundary of a truncated tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    /// Hexagonal face opposite the given vertex.
    Face(usize),
    /// Truncation triangle at the given vertex.
    External(usize),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Face(i) => write!(f, "face {i}"),
            Cell::External(v) => write!(f, "external face {v}"),
        }
    }
}

/// A disk in one tetrahedron, given by the cyclic list of its corners.
/// Side `i` runs from corner `i` to corner `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleDisk {
    pub tet: usize,
    pub corners: Vec<SurfaceCorner>,
}

impl AdmissibleDisk {
    pub fn new(tet: usize, corners: Vec<SurfaceCorner>) -> Self {
        AdmissibleDisk { tet, corners }
    }

    /// Normal triangle cutting off vertex `v`.
    pub fn triangle(tet: usize, v: usize) -> Self {
        let [a, b, c] = others(&[v]);
        Self::new(
            tet,
            vec![
                SurfaceCorner::internal(v, a),
                SurfaceCorner::internal(v, b),
                SurfaceCorner::internal(v, c),
            ],
        )
    }

    /// Normal quadrilateral separating edge `{a, b}` from its opposite.
    pub fn quad(tet: usize, a: usize, b: usize) -> Self {
        let [c, d] = EdgeIndex::from_vertices(a, b).complement();
        Self::new(
            tet,
            vec![
                SurfaceCorner::internal(a, c),
                SurfaceCorner::internal(c, b),
                SurfaceCorner::internal(b, d),
                SurfaceCorner::internal(d, a),
            ],
        )
    }

    /// Quadrilateral with two corners on the edges `{a, c}`, `{a, d}` and
    /// two on the external edges at `b`, separating edge `{a, b}`.
    pub fn bent_quad(tet: usize, a: usize, b: usize) -> Self {
        let [c, d] = EdgeIndex::from_vertices(a, b).complement();
        Self::new(
            tet,
            vec![
                SurfaceCorner::internal(a, c),
                SurfaceCorner::internal(a, d),
                SurfaceCorner::external(b, c),
                SurfaceCorner::external(b, d),
            ],
        )
    }

    /// Quadrilateral of four external corners encircling edge `{a, b}`.
    pub fn tube_quad(tet: usize, a: usize, b: usize) -> Self {
        let [c, d] = EdgeIndex::from_vertices(a, b).complement();
        Self::new(
            tet,
            vec![
                SurfaceCorner::external(a, c),
                SurfaceCorner::external(b, c),
                SurfaceCorner::external(b, d),
                SurfaceCorner::external(a, d),
            ],
        )
    }

    /// Number of sides, equal to the number of corners.
    pub fn k(&self) -> usize {
        self.corners.len()
    }

    pub fn external_count(&self) -> usize {
        self.corners.iter().filter(|c| c.is_external()).count()
    }

    pub fn side_endpoints(&self, side: usize) -> (SurfaceCorner, SurfaceCorner) {
        let k = self.k();
        (self.corners[side], self.corners[(side + 1) % k])
    }

    /// The 2-cell carrying side `side`, if its endpoints share one.
    pub fn side_cell(&self, side: usize) -> Option<Cell> {
        let (a, b) = self.side_endpoints(side);
        a.common_cell(b)
    }

    pub fn classify(&self) -> DiskType {
        classify_disk(self)
    }
}

fn others(used: &[usize]) -> [usize; 3] {
    let mut out = [0; 3];
    let mut i = 0;
    for v in 0..4 {
        if !used.contains(&v) && i < 3 {
            out[i] = v;
            i += 1;
        }
    }
    out
}

/// Disk types by corner counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiskType {
    /// Triangle with three internal corners.
    I,
    /// Quadrilateral with four internal corners.
    II,
    /// Quadrilateral with two internal and two external corners.
    III,
    /// Quadrilateral with four external corners.
    IV,
    Other,
}

impl fmt::Display for DiskType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DiskType::I => "I",
            DiskType::II => "II",
            DiskType::III => "III",
            DiskType::IV => "IV",
            DiskType::Other => "other",
        };
        f.write_str(s)
    }
}

pub fn classify_disk(disk: &AdmissibleDisk) -> DiskType {
    match (disk.k(), disk.external_count()) {
        (3, 0) => DiskType::I,
        (4, 0) => DiskType::II,
        (4, 2) => DiskType::III,
        (4, 4) => DiskType::IV,
        _ => DiskType::Other,
    }
}

/// A side of a disk: `(disk, side)`.
pub type SideRef = (usize, usize);

/// Disks with a matching on their sides. Sides left unpaired lie on the
/// boundary of the manifold.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceComplex {
    pub disks: Vec<AdmissibleDisk>,
    #[serde(default)]
    pub pairings: Vec<[SideRef; 2]>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("disk {disk}: tetrahedron {tet} does not exist")]
    BadTet { disk: usize, tet: usize },
    #[error("disk {disk}, corner {corner}: not an edge or external edge of a tetrahedron")]
    BadCorner { disk: usize, corner: usize },
    #[error("pairing {pairing} references missing side ({}, {})", side.0, side.1)]
    MissingSide { pairing: usize, side: SideRef },
    #[error("side ({}, {}) is paired more than once", side.0, side.1)]
    SideReused { side: SideRef },
    #[error("side ({}, {}) joins corners sharing no 2-cell", side.0, side.1)]
    SideWithoutCell { side: SideRef },
    #[error("pairing {pairing}: side ({}, {}) lies in an external face", side.0, side.1)]
    PairedExternalSide { pairing: usize, side: SideRef },
    #[error("pairing {pairing}: the faces carrying the two sides are not glued")]
    FacesNotGlued { pairing: usize },
    #[error("pairing {pairing}: side endpoints do not correspond under the gluing")]
    EndpointMismatch { pairing: usize },
    #[error("side ({}, {}) lies in a hexagonal face but is unpaired", side.0, side.1)]
    OpenSide { side: SideRef },
    #[error("angle assignment has {got} corners, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("tetrahedron {tet}: the frontier pieces are not disjoint admissible disks")]
    UnsupportedFrontier { tet: usize },
    #[error("invalid surface JSON: {0}")]
    Json(String),
}

impl SurfaceComplex {
    pub fn new(disks: Vec<AdmissibleDisk>, pairings: Vec<[SideRef; 2]>) -> Self {
        SurfaceComplex { disks, pairings }
    }

    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        serde_json::from_str(text).map_err(|e| SurfaceError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("surface serializes")
    }

    pub fn side_count(&self) -> usize {
        self.disks.iter().map(AdmissibleDisk::k).sum()
    }

    pub fn is_closed(&self) -> bool {
        2 * self.pairings.len() == self.side_count()
    }

    pub fn disk_types(&self) -> Vec<DiskType> {
        self.disks.iter().map(classify_disk).collect()
    }

    /// Disjoint union; the other surface's disks are renumbered after ours.
    pub fn disjoint_union(&self, other: &SurfaceComplex) -> SurfaceComplex {
        let shift = self.disks.len();
        let mut disks = self.disks.clone();
        disks.extend(other.disks.iter().cloned());
        let mut pairings = self.pairings.clone();
        pairings.extend(
            other
                .pairings
                .iter()
                .map(|[a, b]| [(a.0 + shift, a.1), (b.0 + shift, b.1)]),
        );
        SurfaceComplex { disks, pairings }
    }

    fn check_references(&self, tri: &IdealTriangulation) -> Result<(), SurfaceError> {
        for (d, disk) in self.disks.iter().enumerate() {
            if disk.tet >= tri.tet_count() {
                return Err(SurfaceError::BadTet {
                    disk: d,
                    tet: disk.tet,
                });
            }
            if let Some(i) = disk.corners.iter().position(|c| !c.is_valid()) {
                return Err(SurfaceError::BadCorner { disk: d, corner: i });
            }
        }
        for (i, pair) in self.pairings.iter().enumerate() {
            for &side in pair {
                if self.disks.get(side.0).is_none_or(|d| side.1 >= d.k()) {
                    return Err(SurfaceError::MissingSide { pairing: i, side });
                }
            }
        }
        Ok(())
    }
}

/// A 0-cell of the induced cell decomposition: an orbit of disk corners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCell {
    /// `(disk, corner)` pairs in ascending order.
    pub corners: Vec<(usize, usize)>,
    pub external: bool,
    /// Edge class of an internal 0-cell.
    pub edge_class: Option<usize>,
}

/// Cell counts of the decomposition induced on a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellStructure {
    pub vertices: Vec<ZeroCell>,
    /// 0-cell of each disk corner.
    pub corner_cell: Vec<Vec<usize>>,
    pub paired_sides: usize,
    pub unpaired: Vec<SideRef>,
    pub faces: usize,
}

impl CellStructure {
    pub fn edge_count(&self) -> usize {
        self.paired_sides + self.unpaired.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.faces as i64
    }

    pub fn external_vertex_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.external).count()
    }
}

/// Derives 0-cells and edge counts from the side pairings, checking that
/// each pairing joins sides on glued faces with corresponding endpoints.
pub fn cell_structure(
    tri: &IdealTriangulation,
    surface: &SurfaceComplex,
) -> Result<CellStructure, SurfaceError> {
    surface.check_references(tri)?;
    let offsets: Vec<usize> = surface
        .disks
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d.k();
            Some(o)
        })
        .collect();
    let slot = |d: usize, i: usize| offsets[d] + i % surface.disks[d].k();
    let cell_of = |side: SideRef| {
        surface.disks[side.0]
            .side_cell(side.1)
            .ok_or(SurfaceError::SideWithoutCell { side })
    };

    let mut paired = vec![false; surface.side_count()];
    let mut uf = UnionFind::new(surface.side_count());
    for (i, &[a, b]) in surface.pairings.iter().enumerate() {
        for side in [a, b] {
            let s = slot(side.0, side.1);
            if paired[s] {
                return Err(SurfaceError::SideReused { side });
            }
            paired[s] = true;
        }
        let (ca, cb) = (cell_of(a)?, cell_of(b)?);
        let Cell::Face(fa) = ca else {
            return Err(SurfaceError::PairedExternalSide {
                pairing: i,
                side: a,
            });
        };
        let Cell::Face(fb) = cb else {
            return Err(SurfaceError::PairedExternalSide {
                pairing: i,
                side: b,
            });
        };
        let (da, db) = (&surface.disks[a.0], &surface.disks[b.0]);
        let g = tri
            .gluing(da.tet, fa)
            .filter(|g| g.tet == db.tet && g.face == fb);
        let Some(g) = g else {
            return Err(SurfaceError::FacesNotGlued { pairing: i });
        };
        let (a0, a1) = da.side_endpoints(a.1);
        let (b0, b1) = db.side_endpoints(b.1);
        let (ia0, ia1) = (a0.permuted(g.perm), a1.permuted(g.perm));
        let (sa0, sa1) = (slot(a.0, a.1), slot(a.0, a.1 + 1));
        let (sb0, sb1) = (slot(b.0, b.1), slot(b.0, b.1 + 1));
        if (ia0, ia1) == (b0, b1) {
            uf.union(sa0, sb0);
            uf.union(sa1, sb1);
        } else if (ia0, ia1) == (b1, b0) {
            uf.union(sa0, sb1);
            uf.union(sa1, sb0);
        } else {
            return Err(SurfaceError::EndpointMismatch { pairing: i });
        }
    }

    let mut unpaired = Vec::new();
    for (d, disk) in surface.disks.iter().enumerate() {
        for s in 0..disk.k() {
            if paired[slot(d, s)] {
                continue;
            }
            match cell_of((d, s))? {
                Cell::External(_) => unpaired.push((d, s)),
                Cell::Face(_) => return Err(SurfaceError::OpenSide { side: (d, s) }),
            }
        }
    }

    let (labels, count) = uf.labels();
    let mut vertices = vec![
        ZeroCell {
            corners: Vec::new(),
            external: false,
            edge_class: None,
        };
        count
    ];
    let mut corner_cell = Vec::with_capacity(surface.disks.len());
    for (d, disk) in surface.disks.iter().enumerate() {
        let mut row = Vec::with_capacity(disk.k());
        for (i, c) in disk.corners.iter().enumerate() {
            let v = labels[slot(d, i)];
            row.push(v);
            let cell = &mut vertices[v];
            cell.corners.push((d, i));
            match *c {
                SurfaceCorner::External { .. } => cell.external = true,
                SurfaceCorner::Internal { edge } => {
                    let corner = crate::triangulation::Corner::new(disk.tet, edge);
                    cell.edge_class = Some(tri.edge_class_of(corner));
                }
            }
        }
        corner_cell.push(row);
    }
    Ok(CellStructure {
        vertices,
        corner_cell,
        paired_sides: surface.pairings.len(),
        unpaired,
        faces: surface.disks.len(),
    })
}

/// A failed admissibility condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibilityViolation {
    /// The disk boundary does not meet the 1-skeleton.
    EmptyBoundary { disk: usize },
    /// Consecutive corners share no 2-cell, so no side can join them.
    NoCommonCell { disk: usize, side: usize },
    /// Both sides at a corner lie in the same 2-cell: the boundary touches
    /// the 1-cell without crossing it.
    NotTransverse { disk: usize, corner: usize },
    /// A side in a hexagonal face ends on one 1-cell or on two adjacent ones.
    FaceArc { disk: usize, side: usize },
    /// A side in an external face ends twice on one 1-cell.
    ExternalArc { disk: usize, side: usize },
}

impl fmt::Display for AdmissibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AdmissibilityViolation::*;
        match self {
            EmptyBoundary { disk } => write!(f, "disk {disk}: boundary misses the 1-skeleton"),
            NoCommonCell { disk, side } => {
                write!(f, "disk {disk}, side {side}: endpoints share no 2-cell")
            }
            NotTransverse { disk, corner } => {
                write!(
                    f,
                    "disk {disk}, corner {corner}: boundary does not cross the 1-cell"
                )
            }
            FaceArc { disk, side } => write!(
                f,
                "disk {disk}, side {side}: arc in a face ends on the same or adjacent 1-cells"
            ),
            ExternalArc { disk, side } => write!(
                f,
                "disk {disk}, side {side}: arc in an external face ends twice on one 1-cell"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub violations: Vec<AdmissibilityViolation>,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return writeln!(f, "admissible");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_disk(d: usize, disk: &AdmissibleDisk, out: &mut Vec<AdmissibilityViolation>) {
    use AdmissibilityViolation::*;
    let k = disk.k();
    if k == 0 {
        out.push(EmptyBoundary { disk: d });
        return;
    }
    let mut cells = Vec::with_capacity(k);
    for side in 0..k {
        let (a, b) = disk.side_endpoints(side);
        if a == b {
            out.push(if a.is_external() {
                ExternalArc { disk: d, side }
            } else {
                FaceArc { disk: d, side }
            });
            cells.push(None);
            continue;
        }
        let cell = a.common_cell(b);
        match cell {
            None => out.push(NoCommonCell { disk: d, side }),
            Some(Cell::Face(_)) if a.is_adjacent(b) => out.push(FaceArc { disk: d, side }),
            _ => {}
        }
        cells.push(cell);
    }
    for corner in 0..k {
        let before = cells[(corner + k - 1) % k];
        let after = cells[corner];
        if let (Some(x), Some(y)) = (before, after) {
            if x == y {
                out.push(NotTransverse { disk: d, corner });
            }
        }
    }
}

/// Checks the per-disk admissibility conditions and reference validity.
pub fn check_admissibility(
    tri: &IdealTriangulation,
    surface: &SurfaceComplex,
) -> Result<AdmissibilityReport, SurfaceError> {
    surface.check_references(tri)?;
    let mut violations = Vec::new();
    for (d, disk) in surface.disks.iter().enumerate() {
        check_disk(d, disk, &mut violations);
    }
    Ok(AdmissibilityReport { violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_tet() -> AdmissibleDisk {
        AdmissibleDisk::tube_quad(0, 0, 1)
    }

    fn report(disks: Vec<AdmissibleDisk>) -> AdmissibilityReport {
        let mut out = Vec::new();
        for (d, disk) in disks.iter().enumerate() {
            check_disk(d, disk, &mut out);
        }
        AdmissibilityReport { violations: out }
    }

    #[test]
    fn model_disks_are_admissible_and_classified() {
        for a in 0..4 {
            assert!(report(vec![AdmissibleDisk::triangle(0, a)]).passed());
            assert_eq!(AdmissibleDisk::triangle(0, a).classify(), DiskType::I);
            for b in 0..4 {
                if a == b {
                    continue;
                }
                for (disk, ty) in [
                    (AdmissibleDisk::quad(0, a, b), DiskType::II),
                    (AdmissibleDisk::bent_quad(0, a, b), DiskType::III),
                    (AdmissibleDisk::tube_quad(0, a, b), DiskType::IV),
                ] {
                    assert!(report(vec![disk.clone()]).passed(), "{disk:?}");
                    assert_eq!(disk.classify(), ty);
                }
            }
        }
        assert_eq!(one_tet().classify(), DiskType::IV);
    }

    #[test]
    fn hexagon_is_other() {
        let disk = AdmissibleDisk::new(
            0,
            vec![
                SurfaceCorner::external(0, 2),
                SurfaceCorner::external(1, 2),
                SurfaceCorner::external(1, 3),
                SurfaceCorner::internal(1, 2),
                SurfaceCorner::internal(0, 2),
                SurfaceCorner::external(0, 3),
            ],
        );
        assert_eq!(disk.classify(), DiskType::Other);
    }

    #[test]
    fn empty_disk_violates_first_condition() {
        let r = report(vec![AdmissibleDisk::new(0, vec![])]);
        assert_eq!(
            r.violations,
            vec![AdmissibilityViolation::EmptyBoundary { disk: 0 }]
        );
    }

    #[test]
    fn arc_back_to_the_same_edge_violates_second_condition() {
        let e = SurfaceCorner::internal(0, 1);
        let r = report(vec![AdmissibleDisk::new(
            0,
            vec![e, e, SurfaceCorner::internal(0, 2)],
        )]);
        assert!(r
            .violations
            .contains(&AdmissibilityViolation::FaceArc { disk: 0, side: 0 }));
    }

    #[test]
    fn arc_between_adjacent_cells_violates_second_condition() {
        // Edge 01 and external edge (0, 2) meet at the corner of face 2.
        let disk = AdmissibleDisk::new(
            0,
            vec![
                SurfaceCorner::internal(0, 1),
                SurfaceCorner::external(0, 2),
                SurfaceCorner::external(0, 3),
            ],
        );
        let r = report(vec![disk]);
        assert!(r
            .violations
            .contains(&AdmissibilityViolation::FaceArc { disk: 0, side: 0 }));
    }

    #[test]
    fn arc_in_external_face_back_to_same_edge() {
        let x = SurfaceCorner::external(0, 1);
        let r = report(vec![AdmissibleDisk::new(0, vec![x, x])]);
        assert!(r
            .violations
            .contains(&AdmissibilityViolation::ExternalArc { disk: 0, side: 0 }));
    }

    #[test]
    fn adjacency_of_cells() {
        let e01 = SurfaceCorner::internal(0, 1);
        assert!(e01.is_adjacent(SurfaceCorner::external(0, 2)));
        assert!(e01.is_adjacent(SurfaceCorner::external(1, 3)));
        assert!(!e01.is_adjacent(SurfaceCorner::external(2, 3)));
        assert!(!e01.is_adjacent(SurfaceCorner::internal(0, 2)));
        assert!(SurfaceCorner::external(0, 1).is_adjacent(SurfaceCorner::external(0, 2)));
        assert!(!SurfaceCorner::external(0, 1).is_adjacent(SurfaceCorner::external(2, 1)));
        assert_eq!(
            e01.common_cell(SurfaceCorner::internal(2, 3)),
            None,
            "opposite edges share no face"
        );
        assert_eq!(
            e01.common_cell(SurfaceCorner::internal(1, 2)),
            Some(Cell::Face(3))
        );
    }

    #[test]
    fn json_shape() {
        let s = SurfaceComplex::new(vec![AdmissibleDisk::triangle(0, 0)], vec![]);
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["disks"][0]["corners"][0]["kind"], "internal");
        assert_eq!(v["disks"][0]["corners"][0]["edge"], 0);
        let back = SurfaceComplex::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let ext: SurfaceCorner =
            serde_json::from_str(r#"{"kind":"external","vertex":2,"face":0}"#).unwrap();
        assert_eq!(ext, SurfaceCorner::external(2, 0));
    }
}
