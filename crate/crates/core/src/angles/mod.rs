//! Angle structures: assignments, verification, the feasibility program and
//! the perturbation of partially flat assignments.

mod io;
mod perturb;
mod polytope;

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::geometry::AngleSextuple;
use crate::lp::Rational;
use crate::triangulation::{Corner, EdgeIndex, IdealTriangulation};

pub use io::{parse_ratio, read_flat_skeleton, AngleFile, AngleFileError, PartiallyFlatFile};
pub use perturb::{alpha_t, edge_profiles, perturb, t_max, Binding, EdgeProfile, TMax};
pub use polytope::{
    build_polytope, build_polytope_with_flats, solve, AnglePolytope, FarkasCertificate,
    FeasibilityStatus, LpOutcome,
};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum AngleError {
    #[error("assignment has {got} values, triangulation has {expected} corners")]
    WrongLength { expected: usize, got: usize },
    #[error("{got} tetrahedron tags for {expected} tetrahedra")]
    WrongTagCount { expected: usize, got: usize },
    #[error("edge with no interior angle: edge class {edge}")]
    NoInteriorAngle { edge: usize },
    #[error("tetrahedron {tet} is tagged flat but does not carry the flat pattern")]
    NotFlat { tet: usize },
    #[error("tetrahedron {tet} is tagged hyperideal but {reason}")]
    NotStrict { tet: usize, reason: String },
    #[error("edge class {edge} sums to {sum} instead of 2π")]
    EdgeSum { edge: usize, sum: f64 },
    #[error("t = {t} outside the admissible interval (0, {t_max})")]
    TOutOfRange { t: f64, t_max: f64 },
}

/// Scalar type for angles: exact rationals in units of π, or radians.
pub trait AngleScalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    fn zero() -> Self;
    fn pi() -> Self;
    fn from_i64(n: i64) -> Self;
    fn to_radians(&self) -> f64;
    /// `|self| <= tol`; exact scalars must be zero.
    fn within(&self, tol: f64) -> bool;
    fn is_zero_value(&self) -> bool {
        *self == Self::zero()
    }
}

impl AngleScalar for Rational {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn pi() -> Self {
        Rational::from_integer(1.into())
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn to_radians(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN) * PI
    }
    fn within(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl AngleScalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn pi() -> Self {
        PI
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn to_radians(&self) -> f64 {
        *self
    }
    fn within(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

/// One angle per corner, in slot order `6 * tet + edge`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleAssignment<S = Rational> {
    pub values: Vec<S>,
}

impl<S: AngleScalar> AngleAssignment<S> {
    pub fn new(values: Vec<S>) -> Self {
        AngleAssignment { values }
    }

    pub fn uniform(tri: &IdealTriangulation, value: S) -> Self {
        AngleAssignment {
            values: vec![value; tri.corner_count()],
        }
    }

    pub fn get(&self, corner: Corner) -> &S {
        &self.values[corner.slot()]
    }

    pub fn tet_count(&self) -> usize {
        self.values.len() / 6
    }

    /// Angles of one tetrahedron in radians.
    pub fn sextuple(&self, tet: usize) -> AngleSextuple {
        let mut a = [0.0; 6];
        for (i, x) in a.iter_mut().enumerate() {
            *x = self.values[6 * tet + i].to_radians();
        }
        AngleSextuple(a)
    }

    pub fn to_radians(&self) -> AngleAssignment<f64> {
        AngleAssignment {
            values: self.values.iter().map(AngleScalar::to_radians).collect(),
        }
    }

    fn check_len(&self, tri: &IdealTriangulation) -> Result<(), AngleError> {
        if self.values.len() != tri.corner_count() {
            return Err(AngleError::WrongLength {
                expected: tri.corner_count(),
                got: self.values.len(),
            });
        }
        Ok(())
    }

    fn edge_sum(&self, tri: &IdealTriangulation, class: usize) -> S {
        tri.edge_classes()[class]
            .corners
            .iter()
            .fold(S::zero(), |acc, c| acc + self.get(*c).clone())
    }

    fn vertex_sum(&self, tet: usize, vertex: usize) -> S {
        EdgeIndex::at_vertex(vertex)
            .iter()
            .fold(S::zero(), |acc, e| {
                acc + self.values[6 * tet + e.index()].clone()
            })
    }
}

/// Outcome of [`verify`]. Residuals and margins are in radians.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    /// Edge-class sum minus 2π, per class.
    pub edge_residuals: Vec<f64>,
    /// π minus the vertex sum, per `(tet, vertex)` at index `4 * tet + vertex`.
    pub vertex_margins: Vec<f64>,
    pub min_angle: f64,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn min_vertex_margin(&self) -> f64 {
        self.vertex_margins
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_edge_residual(&self) -> f64 {
        self.edge_residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "max edge residual: {:e}", self.max_edge_residual())?;
        writeln!(f, "min vertex margin: {}", self.min_vertex_margin())?;
        writeln!(f, "min angle: {}", self.min_angle)?;
        for e in &self.failures {
            writeln!(f, "failure: {e}")?;
        }
        writeln!(f, "{}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Checks that `alpha` is a strict angle structure on `tri`.
///
/// Exact assignments must have zero edge residuals; float ones within `tol`.
/// Positivity and vertex sums must hold strictly in both modes.
pub fn verify<S: AngleScalar>(
    tri: &IdealTriangulation,
    alpha: &AngleAssignment<S>,
    tol: f64,
) -> Result<VerifyReport, AngleError> {
    alpha.check_len(tri)?;
    let two_pi = S::pi() + S::pi();
    let mut report = VerifyReport {
        min_angle: f64::INFINITY,
        ..Default::default()
    };
    for (slot, v) in alpha.values.iter().enumerate() {
        let x = v.to_radians();
        report.min_angle = report.min_angle.min(x);
        if *v <= S::zero() {
            report.failures.push(format!(
                "corner {} has non-positive angle {x}",
                Corner::from_slot(slot)
            ));
        }
    }
    for class in 0..tri.edge_classes().len() {
        let r = alpha.edge_sum(tri, class) - two_pi.clone();
        report.edge_residuals.push(r.to_radians());
        if !r.within(tol) {
            report.failures.push(format!(
                "edge class {class} sum differs from 2π by {:e}",
                r.to_radians()
            ));
        }
    }
    for tet in 0..tri.tet_count() {
        for vertex in 0..4 {
            let margin = S::pi() - alpha.vertex_sum(tet, vertex);
            report.vertex_margins.push(margin.to_radians());
            if margin <= S::zero() {
                report.failures.push(format!(
                    "vertex {vertex} of tetrahedron {tet} has angle sum >= π (margin {})",
                    margin.to_radians()
                ));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TetTag {
    Hyperideal,
    Flat,
}

/// Angles in `[0, π]` where every tetrahedron is strict or exactly flat.
#[derive(Clone, Debug, PartialEq)]
pub struct PartiallyFlatAssignment<S = Rational> {
    pub values: Vec<S>,
    pub tags: Vec<TetTag>,
}

impl<S: AngleScalar> PartiallyFlatAssignment<S> {
    pub fn as_assignment(&self) -> AngleAssignment<S> {
        AngleAssignment::new(self.values.clone())
    }

    /// Checks tags, flat patterns, strictness of hyperideal tetrahedra,
    /// edge sums (exactly, or within `tol` for floats) and that every edge
    /// has an interior angle.
    pub fn validate(&self, tri: &IdealTriangulation, tol: f64) -> Result<(), AngleError> {
        let alpha = self.as_assignment();
        alpha.check_len(tri)?;
        if self.tags.len() != tri.tet_count() {
            return Err(AngleError::WrongTagCount {
                expected: tri.tet_count(),
                got: self.tags.len(),
            });
        }
        for (tet, tag) in self.tags.iter().enumerate() {
            let vals = &self.values[6 * tet..6 * tet + 6];
            match tag {
                TetTag::Flat => {
                    if flat_diagonal(vals).is_none() {
                        return Err(AngleError::NotFlat { tet });
                    }
                }
                TetTag::Hyperideal => {
                    if let Some(i) = vals.iter().position(|v| *v <= S::zero() || *v >= S::pi()) {
                        return Err(AngleError::NotStrict {
                            tet,
                            reason: format!("edge {i} has angle {} outside (0, π)", vals[i]),
                        });
                    }
                    for vertex in 0..4 {
                        if alpha.vertex_sum(tet, vertex) >= S::pi() {
                            return Err(AngleError::NotStrict {
                                tet,
                                reason: format!("vertex {vertex} has angle sum >= π"),
                            });
                        }
                    }
                }
            }
        }
        let two_pi = S::pi() + S::pi();
        for class in 0..tri.edge_classes().len() {
            let sum = alpha.edge_sum(tri, class);
            if !(sum.clone() - two_pi.clone()).within(tol) {
                return Err(AngleError::EdgeSum {
                    edge: class,
                    sum: sum.to_radians(),
                });
            }
        }
        edge_profiles(tri, self)?;
        Ok(())
    }
}

/// The diagonal carrying π if the six values are exactly a flat pattern.
pub fn flat_diagonal<S: AngleScalar>(vals: &[S]) -> Option<EdgeIndex> {
    EdgeIndex::ALL[..3].iter().copied().find(|d| {
        EdgeIndex::ALL.iter().all(|e| {
            let v = &vals[e.index()];
            if *e == *d || *e == d.opposite() {
                *v == S::pi()
            } else {
                v.is_zero_value()
            }
        })
    })
}

/// Exact rational `p/q` in units of π.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}
