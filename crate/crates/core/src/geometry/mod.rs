//! Hyperideal tetrahedra: realizability, Gram matrices, edge lengths,
//! volume and Minkowski-space realizations.

mod dilog;
mod minkowski;
mod volume;

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix3, Matrix4, SymmetricEigen};
use thiserror::Error;

use crate::config::Tolerances;
use crate::triangulation::{EdgeIndex, Perm4};

pub use dilog::li2;
pub use minkowski::{angles_from_vertices, realize_vertices, MinkowskiVertex};
pub use volume::{lobachevsky, schlafli_path_volume, tet_volume, IDEAL_REGULAR_VOLUME};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("angle {value} at edge {edge} lies outside [0, π]")]
    AngleOutOfRange { edge: usize, value: f64 },
    #[error("not realizable: {0}")]
    NotRealizable(Violation),
    #[error("realization failed: det = {determinant:e}, diagonal cofactors = {cofactors:?}")]
    RealizationFailed {
        determinant: f64,
        cofactors: [f64; 4],
    },
    #[error("edge {edge} degenerates: cosh(length) = {value}")]
    Degenerate { edge: usize, value: f64 },
    #[error("edge misses hyperbolic space: vertices {a} and {b} have <p,q> = {inner}")]
    EdgeMissesHyperbolicSpace { a: usize, b: usize, inner: f64 },
    #[error("vertex {vertex} is not hyperideal (<x,x> = {norm})")]
    NotHyperideal { vertex: usize, norm: f64 },
    #[error("vertices spanning face {face} are coplanar with the origin")]
    Coplanar { face: usize },
}

/// First violated strict-hyperideal condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Violation {
    AngleNotPositive { edge: usize, value: f64 },
    AngleNotBelowPi { edge: usize, value: f64 },
    VertexSum { vertex: usize, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AngleNotPositive { edge, value } => {
                write!(f, "angle at edge {edge} is {value}, not positive")
            }
            Violation::AngleNotBelowPi { edge, value } => {
                write!(f, "angle at edge {edge} is {value}, not below π")
            }
            Violation::VertexSum { vertex, sum } => {
                write!(f, "angles at vertex {vertex} sum to {sum} >= π")
            }
        }
    }
}

/// Six dihedral angles in radians, indexed by [`EdgeIndex`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleSextuple(pub [f64; 6]);

impl AngleSextuple {
    pub fn uniform(theta: f64) -> Self {
        AngleSextuple([theta; 6])
    }

    /// π on `diagonal` and its opposite edge, 0 elsewhere.
    pub fn flat(diagonal: EdgeIndex) -> Self {
        let mut a = [0.0; 6];
        a[diagonal.index()] = PI;
        a[diagonal.opposite().index()] = PI;
        AngleSextuple(a)
    }

    pub fn get(&self, e: EdgeIndex) -> f64 {
        self.0[e.index()]
    }

    pub fn vertex_sum(&self, v: usize) -> f64 {
        EdgeIndex::at_vertex(v).iter().map(|e| self.get(*e)).sum()
    }

    /// Relabels vertices by `p`: the angle at edge `e` moves to `p(e)`.
    pub fn permuted(&self, p: Perm4) -> Self {
        let mut out = [0.0; 6];
        for e in EdgeIndex::ALL {
            out[e.permuted(p).index()] = self.get(e);
        }
        AngleSextuple(out)
    }

    /// The diagonal pair carrying π, if this is exactly a flat pattern.
    pub fn flat_diagonal(&self) -> Option<EdgeIndex> {
        EdgeIndex::ALL[..3]
            .iter()
            .copied()
            .find(|&d| *self == Self::flat(d))
    }

    fn check_range(&self) -> Result<(), GeometryError> {
        for (edge, &value) in self.0.iter().enumerate() {
            if !(0.0..=PI).contains(&value) {
                return Err(GeometryError::AngleOutOfRange { edge, value });
            }
        }
        Ok(())
    }

    /// The first violated strict-hyperideal condition, or `None`.
    pub fn violation(&self) -> Result<Option<Violation>, GeometryError> {
        self.check_range()?;
        let margin = Tolerances::default().realizability;
        for (edge, &value) in self.0.iter().enumerate() {
            if value <= margin {
                return Ok(Some(Violation::AngleNotPositive { edge, value }));
            }
            if value >= PI - margin {
                return Ok(Some(Violation::AngleNotBelowPi { edge, value }));
            }
        }
        for vertex in 0..4 {
            let sum = self.vertex_sum(vertex);
            if sum >= PI - margin {
                return Ok(Some(Violation::VertexSum { vertex, sum }));
            }
        }
        Ok(None)
    }
}

/// True iff the angles describe a strict hyperideal tetrahedron.
pub fn is_realizable(angles: &AngleSextuple) -> Result<bool, GeometryError> {
    Ok(angles.violation()?.is_none())
}

/// `G[i][j] = -cos θ` at the edge joining the two vertices other than `i, j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramMatrix(pub Matrix4<f64>);

impl GramMatrix {
    /// Builds the matrix without any realizability check.
    pub fn from_angles_unchecked(angles: &AngleSextuple) -> Self {
        let mut g = Matrix4::identity();
        for e in EdgeIndex::ALL {
            let [i, j] = e.complement();
            let c = -angles.get(e).cos();
            g[(i, j)] = c;
            g[(j, i)] = c;
        }
        GramMatrix(g)
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// Signed cofactors `(-1)^(i+j) M_ij`.
    pub fn cofactors(&self) -> Matrix4<f64> {
        let mut c = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let minor = Matrix3::from_fn(|r, s| {
                    let r = if r >= i { r + 1 } else { r };
                    let s = if s >= j { s + 1 } else { s };
                    self.0[(r, s)]
                });
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                c[(i, j)] = sign * minor.determinant();
            }
        }
        c
    }

    /// Counts of (positive, negative) eigenvalues beyond `tol`.
    pub fn signature(&self, tol: f64) -> (usize, usize) {
        let eig = SymmetricEigen::new(self.0).eigenvalues;
        let pos = eig.iter().filter(|&&l| l > tol).count();
        let neg = eig.iter().filter(|&&l| l < -tol).count();
        (pos, neg)
    }
}

/// Gram matrix of a strict hyperideal tetrahedron.
///
/// A hyperideal vertex `k` has `c_kk < 0`: the vertex is the pole of its
/// truncation plane and is spacelike, while `det G < 0`. Both signs are
/// checked.
pub fn gram_from_angles(angles: &AngleSextuple) -> Result<GramMatrix, GeometryError> {
    if let Some(v) = angles.violation()? {
        return Err(GeometryError::NotRealizable(v));
    }
    let gram = GramMatrix::from_angles_unchecked(angles);
    let det = gram.determinant();
    let cof = gram.cofactors();
    let diag = [cof[(0, 0)], cof[(1, 1)], cof[(2, 2)], cof[(3, 3)]];
    let eps = Tolerances::default().degeneration;
    if det >= -eps || diag.iter().any(|&c| c >= -eps) {
        return Err(GeometryError::RealizationFailed {
            determinant: det,
            cofactors: diag,
        });
    }
    Ok(gram)
}

/// Distances between truncation triangles along each edge.
pub fn edge_lengths(gram: &GramMatrix) -> Result<[f64; 6], GeometryError> {
    let c = gram.cofactors();
    let eps = Tolerances::default().degeneration;
    let mut out = [0.0; 6];
    for e in EdgeIndex::ALL {
        let [k, l] = e.vertices();
        let value = c[(k, l)] / (c[(k, k)] * c[(l, l)]).sqrt();
        if !(value >= 1.0 - eps) {
            return Err(GeometryError::Degenerate {
                edge: e.index(),
                value,
            });
        }
        out[e.index()] = value.max(1.0).acosh();
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TetGeometry {
    pub angles: AngleSextuple,
    pub gram: GramMatrix,
    pub edge_lengths: [f64; 6],
    pub volume: f64,
}

impl TetGeometry {
    pub fn new(angles: AngleSextuple) -> Result<Self, GeometryError> {
        let gram = gram_from_angles(&angles)?;
        let edge_lengths = edge_lengths(&gram)?;
        let volume = tet_volume(&angles)?;
        Ok(TetGeometry {
            angles,
            gram,
            edge_lengths,
            volume,
        })
    }
}
