use std::f64::consts::PI;

use num_complex::Complex64;

use super::{gram_from_angles, li2, AngleSextuple, GeometryError, GramMatrix};
use crate::triangulation::EdgeIndex;

/// Volume of the regular ideal tetrahedron, `3Λ(π/3)`.
pub const IDEAL_REGULAR_VOLUME: f64 = 1.014_941_606_409_653_6;

/// Lobachevsky function `Λ(θ) = ½ Cl₂(2θ) = ½ Im Li₂(e^{2iθ})`.
pub fn lobachevsky(theta: f64) -> f64 {
    0.5 * li2(Complex64::from_polar(1.0, 2.0 * theta)).im
}

/// Volume of a truncated hyperideal tetrahedron; zero for a flat pattern.
pub fn tet_volume(angles: &AngleSextuple) -> Result<f64, GeometryError> {
    if angles.flat_diagonal().is_some() {
        return Ok(0.0);
    }
    let gram = gram_from_angles(angles)?;
    Ok(closed_form(angles, &gram))
}

/// Dilogarithm formula for generalized tetrahedra.
///
/// With `(A, B, C)` the angles at the edges through one vertex and `D, E, F`
/// at their opposite edges, `V = ½ Im(U(z₋) - U(z₊))` where `U` is a sum of
/// eight dilogarithms and `z±` are the roots of a quadratic whose
/// discriminant is `det G`.
fn closed_form(angles: &AngleSextuple, gram: &GramMatrix) -> f64 {
    let t = angles.0;
    let th = [t[0], t[1], t[2], t[5], t[4], t[3]];
    let [a, b, c, d, e, f] = th.map(|x| Complex64::from_polar(1.0, x));
    let [sa, sb, sc, sd, se, sf] = th.map(f64::sin);
    let det = gram.determinant();
    let root = if det < 0.0 {
        Complex64::new(0.0, (-det).sqrt())
    } else {
        Complex64::new(det.sqrt(), 0.0)
    };
    let denom = a * d
        + b * e
        + c * f
        + a * b * f
        + a * c * e
        + b * c * d
        + d * e * f
        + a * b * c * d * e * f;
    let base = Complex64::new(-2.0 * (sa * sd + sb * se + sc * sf), 0.0);
    let z_plus = (base - 2.0 * root) / denom;
    let z_minus = (base + 2.0 * root) / denom;
    let u = |z: Complex64| {
        0.5 * (li2(z) + li2(a * b * d * e * z) + li2(a * c * d * f * z) + li2(b * c * e * f * z)
            - li2(-a * b * c * z)
            - li2(-a * e * f * z)
            - li2(-b * d * f * z)
            - li2(-c * d * e * z))
    };
    0.5 * (u(z_minus) - u(z_plus)).im
}

/// Volume by integrating `dV = -½ Σ ℓ_i dθ_i` along the straight path from
/// the regular ideal tetrahedron to `angles`.
///
/// Independent of the dilogarithm formula; slower, used for cross-checks.
pub fn schlafli_path_volume(angles: &AngleSextuple) -> Result<f64, GeometryError> {
    if angles.flat_diagonal().is_some() {
        return Ok(0.0);
    }
    gram_from_angles(angles)?;
    let base = PI / 3.0;
    let delta = angles.0.map(|x| x - base);
    let integrand = |s: f64| {
        let point = AngleSextuple(delta.map(|d| base + s * d));
        let lengths = raw_lengths(&GramMatrix::from_angles_unchecked(&point));
        lengths.iter().zip(&delta).map(|(l, d)| l * d).sum::<f64>()
    };
    let integral = tanh_sinh_unit(integrand, 1e-13);
    Ok(IDEAL_REGULAR_VOLUME - 0.5 * integral)
}

/// Cofactor edge lengths without degeneration checks; near the ideal point
/// the diagonal cofactors approach zero and the lengths grow like `-log`.
fn raw_lengths(gram: &GramMatrix) -> [f64; 6] {
    let c = gram.cofactors();
    EdgeIndex::ALL.map(|e| {
        let [k, l] = e.vertices();
        (c[(k, l)] / (c[(k, k)] * c[(l, l)]).sqrt())
            .max(1.0)
            .acosh()
    })
}

/// Tanh-sinh quadrature on `[0, 1]`, halving the step until two levels agree.
fn tanh_sinh_unit<F: Fn(f64) -> f64>(f: F, tol: f64) -> f64 {
    let node = |t: f64| {
        let u = 0.5 * PI * t.sinh();
        let s = 0.5 * (1.0 + u.tanh());
        let w = 0.25 * PI * t.cosh() / u.cosh().powi(2);
        (s, w)
    };
    let eval = |t: f64| {
        let (s, w) = node(t);
        if !(1e-12..1.0).contains(&s) || w < 1e-300 {
            return 0.0;
        }
        w * f(s)
    };
    let t_max = 4.0;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..8 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let next = sum * h;
        if (next - estimate).abs() < tol {
            return next;
        }
        estimate = next;
    }
    estimate
}
