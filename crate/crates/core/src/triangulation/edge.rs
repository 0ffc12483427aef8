use std::fmt;

use serde::{Deserialize, Serialize};

use super::Perm4;

/// Vertex pairs in lexicographic order; edge `i` joins `EDGE_VERTICES[i]`.
pub const EDGE_VERTICES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// One of the six edges of a tetrahedron, indexed by its vertex pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeIndex(u8);

impl EdgeIndex {
    pub const ALL: [EdgeIndex; 6] = [
        EdgeIndex(0),
        EdgeIndex(1),
        EdgeIndex(2),
        EdgeIndex(3),
        EdgeIndex(4),
        EdgeIndex(5),
    ];

    pub fn new(i: usize) -> Option<Self> {
        (i < 6).then_some(EdgeIndex(i as u8))
    }

    pub fn from_vertices(a: usize, b: usize) -> Self {
        assert!(a < 4 && b < 4 && a != b, "bad vertex pair ({a}, {b})");
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let idx = match (lo, hi) {
            (0, 1) => 0,
            (0, 2) => 1,
            (0, 3) => 2,
            (1, 2) => 3,
            (1, 3) => 4,
            _ => 5,
        };
        EdgeIndex(idx)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn vertices(self) -> [usize; 2] {
        EDGE_VERTICES[self.index()]
    }

    /// The two vertices not on this edge, ascending. These are also the
    /// indices of the two faces containing the edge.
    pub fn complement(self) -> [usize; 2] {
        self.opposite().vertices()
    }

    pub fn opposite(self) -> Self {
        EdgeIndex(5 - self.0)
    }

    pub fn contains(self, v: usize) -> bool {
        let [a, b] = self.vertices();
        a == v || b == v
    }

    /// The three edges incident to vertex `v`, ascending.
    pub fn at_vertex(v: usize) -> [EdgeIndex; 3] {
        match v {
            0 => [EdgeIndex(0), EdgeIndex(1), EdgeIndex(2)],
            1 => [EdgeIndex(0), EdgeIndex(3), EdgeIndex(4)],
            2 => [EdgeIndex(1), EdgeIndex(3), EdgeIndex(5)],
            3 => [EdgeIndex(2), EdgeIndex(4), EdgeIndex(5)],
            _ => panic!("vertex {v} out of range"),
        }
    }

    /// The three edges of face `f` (the face opposite vertex `f`).
    pub fn in_face(f: usize) -> [EdgeIndex; 3] {
        EdgeIndex::at_vertex(f).map(|e| e.opposite())
    }

    /// Image of this edge under a vertex permutation.
    pub fn permuted(self, p: Perm4) -> Self {
        let [a, b] = self.vertices();
        EdgeIndex::from_vertices(p.apply(a), p.apply(b))
    }
}

impl fmt::Debug for EdgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.vertices();
        write!(f, "e{}({a}{b})", self.0)
    }
}

impl fmt::Display for EdgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opposite_pairs() {
        for e in EdgeIndex::ALL {
            assert_eq!(e.opposite().index(), 5 - e.index());
            let [a, b] = e.vertices();
            let [c, d] = e.opposite().vertices();
            let mut all = [a, b, c, d];
            all.sort();
            assert_eq!(all, [0, 1, 2, 3]);
        }
    }

    #[test]
    fn vertex_incidence() {
        let expect = [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]];
        for v in 0..4 {
            let got = EdgeIndex::at_vertex(v).map(|e| e.index());
            assert_eq!(got, expect[v]);
            for e in EdgeIndex::at_vertex(v) {
                assert!(e.contains(v));
            }
        }
    }

    #[test]
    fn face_edges_avoid_the_opposite_vertex() {
        for f in 0..4 {
            for e in EdgeIndex::in_face(f) {
                assert!(!e.contains(f));
            }
        }
    }

    #[test]
    fn from_vertices_roundtrip() {
        for e in EdgeIndex::ALL {
            let [a, b] = e.vertices();
            assert_eq!(EdgeIndex::from_vertices(b, a), e);
        }
    }
}
