//! Ideal triangulations as face gluings of truncated tetrahedra.
//!
//! Conventions: face `i` of a tetrahedron is the hexagonal face opposite
//! vertex `i`; the truncation triangle at vertex `i` is external face `i`.
//! A gluing of face `f` of tet `t` to face `f2` of tet `t2` is recorded by
//! a permutation `p` with `p(f) = f2`, sending vertex `i` of `t` to vertex
//! `p(i)` of `t2`.

mod edge;
mod perm;
mod validate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::union_find::UnionFind;

pub use edge::{EdgeIndex, EDGE_VERTICES};
pub use perm::Perm4;
pub use validate::{validate, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("triangulation needs at least one tetrahedron")]
    Empty,
    #[error("tetrahedron {tet} out of range (tets = {count})")]
    TetOutOfRange { tet: usize, count: usize },
    #[error("face index {face} out of range (faces are 0..4)")]
    FaceOutOfRange { face: usize },
    #[error("gluing {from:?} -> {to:?}: permutation {perm} sends face {} to {}, not {}", from.face, perm.apply(from.face), to.face)]
    FaceMismatch {
        from: FaceRef,
        to: FaceRef,
        perm: Perm4,
    },
    #[error("face {0:?} glued to itself")]
    SelfGluedFace(FaceRef),
    #[error("duplicate face {0:?}: glued more than once")]
    DuplicateFace(FaceRef),
    #[error("paired gluings {a:?} <-> {b:?} are not inverse to each other")]
    NonInverse { a: FaceRef, b: FaceRef },
    #[error("missing face {0:?}: every hexagonal face must be glued")]
    MissingFace(FaceRef),
    #[error("gluing {from:?} -> {to:?} uses even permutation {perm} (orientation-reversing gluings must be odd)")]
    EvenPermutation {
        from: FaceRef,
        to: FaceRef,
        perm: Perm4,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct FaceRef {
    pub tet: usize,
    pub face: usize,
}

impl FaceRef {
    pub fn new(tet: usize, face: usize) -> Self {
        FaceRef { tet, face }
    }
}

impl From<[usize; 2]> for FaceRef {
    fn from([tet, face]: [usize; 2]) -> Self {
        FaceRef { tet, face }
    }
}

impl From<FaceRef> for [usize; 2] {
    fn from(f: FaceRef) -> Self {
        [f.tet, f.face]
    }
}

impl std::fmt::Debug for FaceRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.tet, self.face)
    }
}

/// One record of the triangulation file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingRecord {
    pub from: FaceRef,
    pub to: FaceRef,
    pub perm: Perm4,
}

/// Serialized triangulation: `{"tets": N, "gluings": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationData {
    pub tets: usize,
    pub gluings: Vec<GluingRecord>,
}

/// Where a face is glued to, seen from the source face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub tet: usize,
    pub face: usize,
    pub perm: Perm4,
}

/// A pair (tetrahedron, edge of that tetrahedron), carrying one dihedral angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub tet: usize,
    pub edge: EdgeIndex,
}

impl Corner {
    pub fn new(tet: usize, edge: EdgeIndex) -> Self {
        Corner { tet, edge }
    }

    pub fn from_slot(slot: usize) -> Self {
        Corner {
            tet: slot / 6,
            edge: EdgeIndex::ALL[slot % 6],
        }
    }

    /// Position in the flat `6 * tet + edge` layout used by angle vectors.
    #[inline]
    pub fn slot(self) -> usize {
        self.tet * 6 + self.edge.index()
    }
}

impl std::fmt::Display for Corner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.tet, self.edge)
    }
}

/// An edge of the triangulation: an orbit of corners under the face gluings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    pub id: usize,
    /// Corners in the order met when walking around the edge, starting
    /// from the smallest slot.
    pub corners: Vec<Corner>,
    /// The walk around the edge met some corner from both sides, i.e. the
    /// edge is glued to itself in reverse.
    pub folded: bool,
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.corners.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryComponent {
    pub id: usize,
    /// Truncation triangles `(tet, vertex)` in this component, ascending.
    pub triangles: Vec<(usize, usize)>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl BoundaryComponent {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Reject even gluing permutations.
    pub require_orientable: bool,
    /// Permit hexagonal faces with no gluing. Only used for partial complexes.
    pub allow_open_faces: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            require_orientable: true,
            allow_open_faces: false,
        }
    }
}

/// An ideal triangulation with its derived edge classes and boundary surface.
///
/// Immutable once built.
#[derive(Clone, Debug)]
pub struct IdealTriangulation {
    tet_count: usize,
    gluings: Vec<[Option<Gluing>; 4]>,
    edge_classes: Vec<EdgeClass>,
    class_of_slot: Vec<usize>,
    boundary: Vec<BoundaryComponent>,
    orientable: bool,
}

impl IdealTriangulation {
    pub fn build(data: &TriangulationData, opts: BuildOptions) -> Result<Self, TriangulationError> {
        let table = gluing_table(data)?;
        if !opts.allow_open_faces {
            for (t, faces) in table.iter().enumerate() {
                for (f, g) in faces.iter().enumerate() {
                    if g.is_none() {
                        return Err(TriangulationError::MissingFace(FaceRef::new(t, f)));
                    }
                }
            }
        }
        let mut orientable = true;
        for (t, faces) in table.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if let Some(g) = g {
                    if !g.perm.is_odd() {
                        orientable = false;
                        if opts.require_orientable {
                            return Err(TriangulationError::EvenPermutation {
                                from: FaceRef::new(t, f),
                                to: FaceRef::new(g.tet, g.face),
                                perm: g.perm,
                            });
                        }
                    }
                }
            }
        }
        Ok(Self::from_table(table, orientable))
    }

    /// Builds with default options: closed and oriented.
    pub fn from_data(data: &TriangulationData) -> Result<Self, TriangulationError> {
        Self::build(data, BuildOptions::default())
    }

    fn from_table(gluings: Vec<[Option<Gluing>; 4]>, orientable: bool) -> Self {
        let tet_count = gluings.len();
        let (edge_classes, class_of_slot) = walk_edge_classes(&gluings);
        let boundary = boundary_components(&gluings);
        IdealTriangulation {
            tet_count,
            gluings,
            edge_classes,
            class_of_slot,
            boundary,
            orientable,
        }
    }

    pub fn tet_count(&self) -> usize {
        self.tet_count
    }

    pub fn corner_count(&self) -> usize {
        6 * self.tet_count
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.gluings[tet][face]
    }

    pub fn is_closed(&self) -> bool {
        self.gluings.iter().all(|fs| fs.iter().all(Option::is_some))
    }

    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    pub fn edge_class_of(&self, corner: Corner) -> usize {
        self.class_of_slot[corner.slot()]
    }

    pub fn boundary_components(&self) -> &[BoundaryComponent] {
        &self.boundary
    }

    /// Canonical serialized form: one record per glued face pair, listed
    /// from the smaller face, in ascending order.
    pub fn to_data(&self) -> TriangulationData {
        let mut gluings = Vec::new();
        for (t, faces) in self.gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if let Some(g) = g {
                    let from = FaceRef::new(t, f);
                    let to = FaceRef::new(g.tet, g.face);
                    if from < to {
                        gluings.push(GluingRecord {
                            from,
                            to,
                            perm: g.perm,
                        });
                    }
                }
            }
        }
        TriangulationData {
            tets: self.tet_count,
            gluings,
        }
    }
}

fn check_face(f: FaceRef, tets: usize) -> Result<(), TriangulationError> {
    if f.tet >= tets {
        return Err(TriangulationError::TetOutOfRange {
            tet: f.tet,
            count: tets,
        });
    }
    if f.face >= 4 {
        return Err(TriangulationError::FaceOutOfRange { face: f.face });
    }
    Ok(())
}

/// Fills the per-face gluing table from records, deriving inverses.
pub(crate) fn gluing_table(
    data: &TriangulationData,
) -> Result<Vec<[Option<Gluing>; 4]>, TriangulationError> {
    if data.tets == 0 {
        return Err(TriangulationError::Empty);
    }
    let mut table: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; data.tets];
    let mut seen_from = vec![[false; 4]; data.tets];
    for rec in &data.gluings {
        check_face(rec.from, data.tets)?;
        check_face(rec.to, data.tets)?;
        if rec.perm.apply(rec.from.face) != rec.to.face {
            return Err(TriangulationError::FaceMismatch {
                from: rec.from,
                to: rec.to,
                perm: rec.perm,
            });
        }
        if rec.from == rec.to {
            return Err(TriangulationError::SelfGluedFace(rec.from));
        }
        if std::mem::replace(&mut seen_from[rec.from.tet][rec.from.face], true) {
            return Err(TriangulationError::DuplicateFace(rec.from));
        }
        let forward = Gluing {
            tet: rec.to.tet,
            face: rec.to.face,
            perm: rec.perm,
        };
        let backward = Gluing {
            tet: rec.from.tet,
            face: rec.from.face,
            perm: rec.perm.inverse(),
        };
        match (
            table[rec.from.tet][rec.from.face],
            table[rec.to.tet][rec.to.face],
        ) {
            (None, None) => {
                table[rec.from.tet][rec.from.face] = Some(forward);
                table[rec.to.tet][rec.to.face] = Some(backward);
            }
            // The reverse record of an earlier gluing.
            (Some(a), Some(b))
                if a.tet == rec.to.tet
                    && a.face == rec.to.face
                    && b.tet == rec.from.tet
                    && b.face == rec.from.face =>
            {
                if a.perm != rec.perm {
                    return Err(TriangulationError::NonInverse {
                        a: rec.to,
                        b: rec.from,
                    });
                }
            }
            (Some(_), _) => return Err(TriangulationError::DuplicateFace(rec.from)),
            (_, Some(_)) => return Err(TriangulationError::DuplicateFace(rec.to)),
        }
    }
    Ok(table)
}

/// Walks around every edge through the face gluings.
///
/// Classes are numbered by their smallest corner slot, and corners within a
/// class are listed in walking order from that slot.
fn walk_edge_classes(gluings: &[[Option<Gluing>; 4]]) -> (Vec<EdgeClass>, Vec<usize>) {
    let n = gluings.len() * 6;
    let mut class_of_slot = vec![usize::MAX; n];
    let mut classes = Vec::new();

    // Walk from (tet, edge) leaving through `exit`; returns visited corners
    // (excluding the start) and whether the walk closed up.
    let walk = |tet: usize, edge: EdgeIndex, exit: usize| -> (Vec<(Corner, usize)>, bool) {
        let [a, b] = edge.vertices();
        let (mut t, mut va, mut vb, mut out) = (tet, a, b, exit);
        let mut visited = Vec::new();
        loop {
            let Some(g) = gluings[t][out] else {
                return (visited, false);
            };
            let (na, nb) = (g.perm.apply(va), g.perm.apply(vb));
            let entry = g.face;
            let e = EdgeIndex::from_vertices(na, nb);
            let [c, d] = e.complement();
            let next_exit = if entry == c { d } else { c };
            t = g.tet;
            va = na;
            vb = nb;
            out = next_exit;
            if t == tet && e == edge && out == exit {
                return (visited, true);
            }
            visited.push((Corner::new(t, e), entry));
        }
    };

    for slot in 0..n {
        if class_of_slot[slot] != usize::MAX {
            continue;
        }
        let start = Corner::from_slot(slot);
        let [c, d] = start.edge.complement();
        let (forward, closed) = walk(start.tet, start.edge, d);
        let mut sequence: Vec<(Corner, usize)> = Vec::new();
        if closed {
            sequence.push((start, c));
            sequence.extend(forward);
        } else {
            let (backward, _) = walk(start.tet, start.edge, c);
            sequence.extend(backward.into_iter().rev());
            sequence.push((start, c));
            sequence.extend(forward);
            // Rotate so the class still starts at its smallest slot.
            let pos = sequence.iter().position(|(k, _)| *k == start).unwrap();
            sequence.rotate_left(pos);
        }
        let id = classes.len();
        let mut corners = Vec::new();
        let mut folded = false;
        for (corner, _) in sequence {
            if class_of_slot[corner.slot()] == id {
                folded = true;
                continue;
            }
            class_of_slot[corner.slot()] = id;
            corners.push(corner);
        }
        classes.push(EdgeClass {
            id,
            corners,
            folded,
        });
    }
    (classes, class_of_slot)
}

/// Index of the truncation triangle `(tet, vertex)`.
#[inline]
fn tri_index(tet: usize, v: usize) -> usize {
    tet * 4 + v
}

fn boundary_components(gluings: &[[Option<Gluing>; 4]]) -> Vec<BoundaryComponent> {
    let tets = gluings.len();
    let mut triangles = UnionFind::new(4 * tets);
    // External edges (tet, vertex, face), face != vertex, stored as tet*16 + v*4 + f.
    let mut ext_edges = UnionFind::new(16 * tets);
    // Edge ends (tet, edge, endpoint), stored as tet*12 + edge*2 + (endpoint is the larger vertex).
    let mut ends = UnionFind::new(12 * tets);
    let end_index = |t: usize, e: EdgeIndex, v: usize| -> usize {
        let [a, _] = e.vertices();
        t * 12 + e.index() * 2 + usize::from(v != a)
    };
    for (t, faces) in gluings.iter().enumerate() {
        for (f, g) in faces.iter().enumerate() {
            let Some(g) = g else { continue };
            for v in (0..4).filter(|&v| v != f) {
                let w = g.perm.apply(v);
                triangles.union(tri_index(t, v), tri_index(g.tet, w));
                ext_edges.union(t * 16 + v * 4 + f, g.tet * 16 + w * 4 + g.face);
            }
            for e in EdgeIndex::in_face(f) {
                let e2 = e.permuted(g.perm);
                for v in e.vertices() {
                    ends.union(end_index(t, e, v), end_index(g.tet, e2, g.perm.apply(v)));
                }
            }
        }
    }
    let (labels, count) = triangles.labels();
    let mut comps: Vec<BoundaryComponent> = (0..count)
        .map(|id| BoundaryComponent {
            id,
            triangles: Vec::new(),
            vertices: 0,
            edges: 0,
            faces: 0,
        })
        .collect();
    for t in 0..tets {
        for v in 0..4 {
            let c = labels[tri_index(t, v)];
            comps[c].triangles.push((t, v));
            comps[c].faces += 1;
        }
    }
    let mut counted = std::collections::HashSet::new();
    for t in 0..tets {
        for v in 0..4 {
            let c = labels[tri_index(t, v)];
            for f in (0..4).filter(|&f| f != v) {
                if counted.insert(('x', ext_edges.find(t * 16 + v * 4 + f))) {
                    comps[c].edges += 1;
                }
            }
            for e in EdgeIndex::at_vertex(v) {
                if counted.insert(('v', ends.find(end_index(t, e, v)))) {
                    comps[c].vertices += 1;
                }
            }
        }
    }
    comps
}
