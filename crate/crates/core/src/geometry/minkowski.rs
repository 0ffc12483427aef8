use nalgebra::{Matrix3, Matrix4, SymmetricEigen, Vector4};

use super::{AngleSextuple, GeometryError, GramMatrix};
use crate::config::Tolerances;
use crate::triangulation::EdgeIndex;

/// A point of `R^{3,1}` with form `-x₀² + x₁² + x₂² + x₃²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinkowskiVertex(pub [f64; 4]);

impl MinkowskiVertex {
    pub fn inner(&self, other: &MinkowskiVertex) -> f64 {
        let (a, b) = (self.0, other.0);
        -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self)
    }

    pub fn is_hyperideal(&self) -> bool {
        self.norm_sqr() > 0.0
    }

    /// Scaled to `<x,x> = 1` with `x₀ >= 0`. Only meaningful for spacelike
    /// vectors.
    pub fn normalized(&self) -> Self {
        let s = self.norm_sqr().sqrt();
        let s = if self.0[0] < 0.0 { -s } else { s };
        MinkowskiVertex(self.0.map(|x| x / s))
    }

    fn vector(&self) -> Vector4<f64> {
        Vector4::from(self.0)
    }
}

/// Euclidean vector `w` with `w · x = det[x; a; b; c]`.
fn cross4(a: &Vector4<f64>, b: &Vector4<f64>, c: &Vector4<f64>) -> Vector4<f64> {
    Vector4::from_fn(|i, _| {
        let cols: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        let m = Matrix3::from_fn(|r, s| [a, b, c][r][cols[s]]);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sign * m.determinant()
    })
}

fn lorentz(v: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(-v[0], v[1], v[2], v[3])
}

fn form(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Dihedral angles of the hyperideal tetrahedron with the given vertices.
///
/// Vertices are taken as projective points with `x₀ > 0`; the tetrahedron is
/// their convex hull in the affine chart `x₀ = 1`.
pub fn angles_from_vertices(
    vertices: &[MinkowskiVertex; 4],
) -> Result<AngleSextuple, GeometryError> {
    let tol = Tolerances::default();
    let mut v = [Vector4::zeros(); 4];
    for (k, x) in vertices.iter().enumerate() {
        let norm = x.norm_sqr();
        if norm <= tol.degeneration {
            return Err(GeometryError::NotHyperideal { vertex: k, norm });
        }
        v[k] = x.normalized().vector();
    }
    for e in EdgeIndex::ALL {
        let [a, b] = e.vertices();
        let inner = form(&v[a], &v[b]);
        if inner >= -1.0 - tol.segment {
            return Err(GeometryError::EdgeMissesHyperbolicSpace { a, b, inner });
        }
    }
    let mut n = [Vector4::zeros(); 4];
    for i in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        let w = cross4(&v[others[0]], &v[others[1]], &v[others[2]]);
        let normal = lorentz(&w);
        let nn = form(&normal, &normal);
        if w.norm() <= tol.degeneration || nn <= 0.0 {
            return Err(GeometryError::Coplanar { face: i });
        }
        let mut normal = normal / nn.sqrt();
        if form(&normal, &v[i]) < 0.0 {
            normal = -normal;
        }
        n[i] = normal;
    }
    let mut out = [0.0; 6];
    for e in EdgeIndex::ALL {
        let [a, b] = e.complement();
        out[e.index()] = (-form(&n[a], &n[b])).clamp(-1.0, 1.0).acos();
    }
    let angles = AngleSextuple(out);
    if let Some(v) = angles.violation()? {
        return Err(GeometryError::NotRealizable(v));
    }
    Ok(angles)
}

/// Vertices of a tetrahedron with the given Gram matrix, positioned so the
/// midpoint of edge `{0,1}` sits at `e₀` and every vertex has `x₀ > 0`.
pub fn realize_vertices(gram: &GramMatrix) -> Result<[MinkowskiVertex; 4], GeometryError> {
    let fail = || {
        let c = gram.cofactors();
        GeometryError::RealizationFailed {
            determinant: gram.determinant(),
            cofactors: [c[(0, 0)], c[(1, 1)], c[(2, 2)], c[(3, 3)]],
        }
    };
    let eig = SymmetricEigen::new(gram.0);
    let neg: Vec<usize> = (0..4).filter(|&i| eig.eigenvalues[i] < 0.0).collect();
    if neg.len() != 1 {
        return Err(fail());
    }
    // Rows of N: sqrt|λ| qᵀ, timelike row first, so that G = Nᵀ J N.
    let mut order = vec![neg[0]];
    order.extend((0..4).filter(|&i| i != neg[0]));
    let mut big_n = Matrix4::zeros();
    for (row, &i) in order.iter().enumerate() {
        let scale = eig.eigenvalues[i].abs().sqrt();
        for col in 0..4 {
            big_n[(row, col)] = scale * eig.eigenvectors[(col, i)];
        }
    }
    let inv = gram.0.try_inverse().ok_or_else(fail)?;
    // Dual basis: <v_k, n_j> = δ_jk.
    let mut v = [Vector4::zeros(); 4];
    for (k, vk) in v.iter_mut().enumerate() {
        for j in 0..4 {
            *vk += inv[(j, k)] * big_n.column(j);
        }
        let nn = form(vk, vk);
        if nn <= 0.0 {
            return Err(fail());
        }
        *vk /= nn.sqrt();
    }
    let mid = v[0] + v[1];
    let mm = form(&mid, &mid);
    if mm >= 0.0 {
        return Err(fail());
    }
    let mut u = mid / (-mm).sqrt();
    if u[0] < 0.0 {
        u = -u;
        for vk in v.iter_mut() {
            *vk = -*vk;
        }
    }
    // Boost taking u to e₀.
    let gamma = u[0];
    let boost = |x: &Vector4<f64>| {
        let dot = u[1] * x[1] + u[2] * x[2] + u[3] * x[3];
        let x0 = gamma * x[0] - dot;
        let k = dot / (gamma + 1.0) - x[0];
        Vector4::new(x0, x[1] + k * u[1], x[2] + k * u[2], x[3] + k * u[3])
    };
    let mut out = [MinkowskiVertex([0.0; 4]); 4];
    for (k, vk) in v.iter().enumerate() {
        let b = boost(vk);
        if b[0] <= 0.0 {
            return Err(fail());
        }
        out[k] = MinkowskiVertex([b[0], b[1], b[2], b[3]]);
    }
    Ok(out)
}
