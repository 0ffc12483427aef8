//! Layered triangulations of polyhedral decompositions: every cell is coned
//! from its lowest vertex, and where the fans on two paired faces disagree a
//! stack of flat tetrahedra switches one fan into the other.

mod assemble;
mod fan;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, MinkowskiVertex};
use crate::triangulation::TriangulationError;

pub use assemble::{build, BuildMode, LayeredOutput, TetOrigin};
pub use fan::{cone_cell, face_triangulation, insert_flat_layers, ConeTet, Fan, FlatSwitch};

/// A cell vertex: a bare id, or Minkowski coordinates whose id is the
/// position in the vertex list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellVertex {
    Id(usize),
    Coords([f64; 4]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyhedralCell {
    pub vertices: Vec<CellVertex>,
    pub faces: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePairing {
    /// `[cell, face]`.
    pub from: [usize; 2],
    pub to: [usize; 2],
    /// Image in the `to` face of each vertex of the `from` face, in the
    /// order the `from` face lists them.
    pub correspondence: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub cells: Vec<PolyhedralCell>,
    pub pairings: Vec<FacePairing>,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CellError {
    #[error("face {face} is degenerate (fewer than 3 vertices or a repeated vertex)")]
    DegenerateFace { face: usize },
    #[error("face {face} uses unknown vertex {vertex}")]
    UnknownVertex { face: usize, vertex: usize },
    #[error("vertex id {0} listed twice")]
    DuplicateVertex(usize),
    #[error("vertex {0} lies on no face")]
    UnusedVertex(usize),
    #[error("edge {a}-{b} lies on {count} faces, expected 2")]
    EdgeValence { a: usize, b: usize, count: usize },
    #[error("face lattice has Euler characteristic {0}, expected 2")]
    NotASphere(i64),
    #[error("apex {0} is not a vertex of the cell")]
    ApexNotInCell(usize),
}

#[derive(Debug, Error)]
pub enum LayeredError {
    #[error("cell {cell}: {source}")]
    Cell { cell: usize, source: CellError },
    #[error("pairing {pairing}: {reason}")]
    BadPairing { pairing: usize, reason: String },
    #[error("face {face} of cell {cell} is not paired")]
    UnpairedFace { cell: usize, face: usize },
    #[error("fans do not triangulate the same polygon: {0}")]
    FanMismatch(String),
    #[error("cell {cell} has no Minkowski coordinates for vertex {vertex}")]
    MissingCoordinates { cell: usize, vertex: usize },
    #[error("cell {cell}: vertex {vertex} is not hyperideal (<x,x> = {norm})")]
    NotHyperideal {
        cell: usize,
        vertex: usize,
        norm: f64,
    },
    #[error("cell {cell}: segment between vertices {a} and {b} misses hyperbolic space (<p,q> = {inner})")]
    SegmentMissesHyperbolicSpace {
        cell: usize,
        a: usize,
        b: usize,
        inner: f64,
    },
    #[error("cell {cell}, tetrahedron {tet}: {source}")]
    Geometry {
        cell: usize,
        tet: usize,
        source: GeometryError,
    },
    #[error("the glued complex is not orientable (conflict at tetrahedron {tet})")]
    NonOrientable { tet: usize },
    #[error("assembled triangulation is invalid: {0}")]
    Triangulation(#[from] TriangulationError),
    #[error("edge class {edge} meets no cone tetrahedron")]
    EdgeWithoutConeCorner { edge: usize },
    #[error("edge class {edge} has angle sum {sum} (expected 2π)")]
    EdgeSum { edge: usize, sum: f64 },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl PolyhedralCell {
    pub fn new(vertices: Vec<CellVertex>, faces: Vec<Vec<usize>>) -> Self {
        PolyhedralCell { vertices, faces }
    }

    /// A cell whose vertices are the bare ids `0..n`.
    pub fn combinatorial(n: usize, faces: Vec<Vec<usize>>) -> Self {
        PolyhedralCell::new((0..n).map(CellVertex::Id).collect(), faces)
    }

    pub fn ids(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                CellVertex::Id(id) => *id,
                CellVertex::Coords(_) => i,
            })
            .collect()
    }

    pub fn coords(&self, id: usize) -> Option<MinkowskiVertex> {
        self.ids()
            .iter()
            .zip(&self.vertices)
            .find(|(i, _)| **i == id)
            .and_then(|(_, v)| match v {
                CellVertex::Coords(x) => Some(MinkowskiVertex(*x)),
                CellVertex::Id(_) => None,
            })
    }

    /// The default apex: the lowest vertex id.
    pub fn apex(&self) -> usize {
        self.ids().into_iter().min().unwrap_or(0)
    }

    pub fn check(&self) -> Result<(), CellError> {
        let ids = self.ids();
        let mut known = BTreeSet::new();
        for &id in &ids {
            if !known.insert(id) {
                return Err(CellError::DuplicateVertex(id));
            }
        }
        let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut used = BTreeSet::new();
        for (f, face) in self.faces.iter().enumerate() {
            let distinct: BTreeSet<_> = face.iter().collect();
            if face.len() < 3 || distinct.len() != face.len() {
                return Err(CellError::DegenerateFace { face: f });
            }
            for (k, &a) in face.iter().enumerate() {
                if !known.contains(&a) {
                    return Err(CellError::UnknownVertex { face: f, vertex: a });
                }
                used.insert(a);
                let b = face[(k + 1) % face.len()];
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        if let Some(id) = ids.iter().find(|id| !used.contains(id)) {
            return Err(CellError::UnusedVertex(*id));
        }
        if let Some((&(a, b), &count)) = edges.iter().find(|(_, c)| **c != 2) {
            return Err(CellError::EdgeValence { a, b, count });
        }
        let euler = ids.len() as i64 - edges.len() as i64 + self.faces.len() as i64;
        if euler != 2 {
            return Err(CellError::NotASphere(euler));
        }
        Ok(())
    }

    /// The face listing every one of `ids`.
    pub(crate) fn face_containing(&self, ids: &[usize]) -> Option<usize> {
        self.faces
            .iter()
            .position(|face| ids.iter().all(|v| face.contains(v)))
    }
}

impl FacePairing {
    /// Maps a vertex of the `to` face back to the `from` face.
    pub(crate) fn pull_back(&self, from_face: &[usize], to_vertex: usize) -> Option<usize> {
        self.correspondence
            .iter()
            .position(|&w| w == to_vertex)
            .map(|k| from_face[k])
    }
}

/// `true` if `image[k] = target[r ± k]` for some rotation `r` and a fixed sign.
fn is_dihedral(image: &[usize], target: &[usize]) -> bool {
    let n = target.len();
    if image.len() != n {
        return false;
    }
    let Some(r) = target.iter().position(|&v| v == image[0]) else {
        return false;
    };
    let forward = (0..n).all(|k| image[k] == target[(r + k) % n]);
    let backward = (0..n).all(|k| image[k] == target[(r + n - k) % n]);
    forward || backward
}

impl Decomposition {
    pub fn from_json(s: &str) -> Result<Self, LayeredError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("decomposition serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    /// Checks every cell, and that the pairings match each face with exactly
    /// one other face through a rotation or reflection of its cycle.
    pub fn check(&self) -> Result<(), LayeredError> {
        for (c, cell) in self.cells.iter().enumerate() {
            cell.check()
                .map_err(|source| LayeredError::Cell { cell: c, source })?;
        }
        let mut seen: BTreeMap<[usize; 2], usize> = BTreeMap::new();
        for (p, pairing) in self.pairings.iter().enumerate() {
            let bad = |reason: String| LayeredError::BadPairing { pairing: p, reason };
            for side in [pairing.from, pairing.to] {
                if self
                    .cells
                    .get(side[0])
                    .and_then(|c| c.faces.get(side[1]))
                    .is_none()
                {
                    return Err(bad(format!("no face {} in cell {}", side[1], side[0])));
                }
                if let Some(q) = seen.insert(side, p) {
                    return Err(bad(format!(
                        "face {} of cell {} is also used by pairing {q}",
                        side[1], side[0]
                    )));
                }
            }
            if pairing.from == pairing.to {
                return Err(bad("face paired with itself".into()));
            }
            let from = &self.cells[pairing.from[0]].faces[pairing.from[1]];
            let to = &self.cells[pairing.to[0]].faces[pairing.to[1]];
            if from.len() != to.len() {
                return Err(bad(format!(
                    "faces have {} and {} vertices",
                    from.len(),
                    to.len()
                )));
            }
            if !is_dihedral(&pairing.correspondence, to) {
                return Err(bad(format!(
                    "correspondence {:?} is not a rotation or reflection onto {:?}",
                    pairing.correspondence, to
                )));
            }
        }
        for (c, cell) in self.cells.iter().enumerate() {
            for f in 0..cell.faces.len() {
                if !seen.contains_key(&[c, f]) {
                    return Err(LayeredError::UnpairedFace { cell: c, face: f });
                }
            }
        }
        Ok(())
    }
}

/// Vertex cycles of the combinatorial cube on ids `0..8`, where bit `i` of
/// an id is the sign of coordinate `i + 1`; each face is listed
/// counterclockwise seen from outside.
pub const CUBE_FACES: [[usize; 4]; 6] = [
    [1, 3, 7, 5],
    [0, 4, 6, 2],
    [2, 6, 7, 3],
    [0, 1, 5, 4],
    [4, 5, 7, 6],
    [0, 2, 3, 1],
];

impl PolyhedralCell {
    pub fn cube() -> Self {
        PolyhedralCell::combinatorial(8, CUBE_FACES.iter().map(|f| f.to_vec()).collect())
    }

    /// The cube with vertices `(1, ±s, ±s, ±s)`: hyperideal for `3s² > 1`,
    /// with edges meeting hyperbolic space for `2s² < 1`.
    pub fn hyperideal_cube(s: f64) -> Self {
        let vertices = (0..8)
            .map(|id| {
                let sign = |bit: usize| if id >> bit & 1 == 1 { s } else { -s };
                CellVertex::Coords([1.0, sign(0), sign(1), sign(2)])
            })
            .collect();
        PolyhedralCell::new(vertices, CUBE_FACES.iter().map(|f| f.to_vec()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> PolyhedralCell {
        PolyhedralCell::combinatorial(
            4,
            vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]],
        )
    }

    #[test]
    fn cube_is_a_sphere() {
        PolyhedralCell::cube().check().unwrap();
        tetrahedron().check().unwrap();
    }

    #[test]
    fn malformed_cells_are_rejected() {
        let mut cell = PolyhedralCell::cube();
        cell.faces[0] = vec![1, 3];
        assert_eq!(cell.check(), Err(CellError::DegenerateFace { face: 0 }));
        let mut cell = PolyhedralCell::cube();
        cell.faces.pop();
        assert!(matches!(
            cell.check(),
            Err(CellError::EdgeValence { count: 1, .. })
        ));
        let mut cell = tetrahedron();
        cell.faces[0] = vec![1, 2, 9];
        assert_eq!(
            cell.check(),
            Err(CellError::UnknownVertex { face: 0, vertex: 9 })
        );
    }

    #[test]
    fn dihedral_correspondences() {
        assert!(is_dihedral(&[2, 3, 0, 1], &[0, 1, 2, 3]));
        assert!(is_dihedral(&[2, 1, 0, 3], &[0, 1, 2, 3]));
        assert!(!is_dihedral(&[0, 2, 1, 3], &[0, 1, 2, 3]));
        assert!(!is_dihedral(&[0, 1, 2], &[0, 1, 2, 3]));
    }

    #[test]
    fn coordinate_vertices_take_their_position_as_id() {
        let cube = PolyhedralCell::hyperideal_cube(0.6);
        assert_eq!(cube.ids(), (0..8).collect::<Vec<_>>());
        assert_eq!(cube.coords(6).unwrap().0, [1.0, -0.6, 0.6, 0.6]);
        let json = serde_json::to_string(&cube).unwrap();
        assert_eq!(serde_json::from_str::<PolyhedralCell>(&json).unwrap(), cube);
    }
}
