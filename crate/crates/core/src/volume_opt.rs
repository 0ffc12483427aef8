//! Total volume of an angle structure and its maximization by projected
//! gradient ascent, using `∂V/∂α = -ℓ/2`.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angles::{verify, AngleAssignment, AngleError, AngleScalar};
use crate::geometry::{edge_lengths, gram_from_angles, tet_volume, AngleSextuple, GeometryError};
use crate::triangulation::{Corner, EdgeIndex, IdealTriangulation};

#[derive(Debug, Error)]
pub enum VolumeError {
    #[error(transparent)]
    Angles(#[from] AngleError),
    #[error("start is not a strict angle structure: {0}")]
    NotStrict(String),
    #[error("tetrahedron {tet}: {source}")]
    Geometry { tet: usize, source: GeometryError },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub total_volume: f64,
    pub per_tet_volumes: Vec<f64>,
    /// Euclidean norm of the gradient projected onto fixed edge sums.
    pub gradient_norm: f64,
    /// Max over edge classes of the spread of edge lengths seen from the
    /// class's corners.
    pub edge_length_residual: f64,
}

struct Evaluation {
    report: VolumeReport,
    /// Edge length at each corner slot.
    lengths: Vec<f64>,
    /// Projected gradient per corner slot.
    direction: Vec<f64>,
}

fn evaluate(tri: &IdealTriangulation, x: &[f64]) -> Result<Evaluation, VolumeError> {
    let per_tet: Vec<Result<(f64, [f64; 6]), VolumeError>> = (0..tri.tet_count())
        .into_par_iter()
        .map(|tet| {
            let mut a = [0.0; 6];
            a.copy_from_slice(&x[6 * tet..6 * tet + 6]);
            let angles = AngleSextuple(a);
            let wrap = |source| VolumeError::Geometry { tet, source };
            let gram = gram_from_angles(&angles).map_err(wrap)?;
            let lengths = edge_lengths(&gram).map_err(wrap)?;
            let volume = tet_volume(&angles).map_err(wrap)?;
            Ok((volume, lengths))
        })
        .collect();
    let mut volumes = Vec::with_capacity(tri.tet_count());
    let mut lengths = Vec::with_capacity(x.len());
    for r in per_tet {
        let (v, l) = r?;
        volumes.push(v);
        lengths.extend_from_slice(&l);
    }
    let gradient: Vec<f64> = lengths.iter().map(|l| -0.5 * l).collect();
    let direction = project(tri, &gradient);
    let mut residual: f64 = 0.0;
    for class in tri.edge_classes() {
        let ls = class.corners.iter().map(|c| lengths[c.slot()]);
        let (lo, hi) = ls.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), l| {
            (lo.min(l), hi.max(l))
        });
        residual = residual.max(hi - lo);
    }
    let report = VolumeReport {
        total_volume: volumes.iter().sum(),
        per_tet_volumes: volumes,
        gradient_norm: norm(&direction),
        edge_length_residual: residual,
    };
    Ok(Evaluation {
        report,
        lengths,
        direction,
    })
}

/// Orthogonal projection onto `{per-edge sums constant}`. Edge classes have
/// disjoint supports, so this subtracts each class's mean.
pub fn project(tri: &IdealTriangulation, v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for class in tri.edge_classes() {
        let mean = class.corners.iter().map(|c| v[c.slot()]).sum::<f64>() / class.valence() as f64;
        for c in &class.corners {
            out[c.slot()] = v[c.slot()] - mean;
        }
    }
    out
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Volume report for a strict angle structure.
pub fn total_volume<S: AngleScalar>(
    tri: &IdealTriangulation,
    alpha: &AngleAssignment<S>,
) -> Result<VolumeReport, VolumeError> {
    let x = alpha.to_radians();
    if x.values.len() != tri.corner_count() {
        return Err(AngleError::WrongLength {
            expected: tri.corner_count(),
            got: x.values.len(),
        }
        .into());
    }
    Ok(evaluate(tri, &x.values)?.report)
}

/// Edge length at every corner, in slot order.
pub fn corner_lengths(
    tri: &IdealTriangulation,
    alpha: &AngleAssignment<f64>,
) -> Result<Vec<f64>, VolumeError> {
    Ok(evaluate(tri, &alpha.values)?.lengths)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaximizeOptions {
    /// Stop when the projected gradient norm is at most this.
    pub tol: f64,
    pub max_iters: usize,
    /// Every angle and every vertex margin stays at least this far from 0.
    pub guard: f64,
    /// Sufficient-increase constant of the Armijo rule.
    pub armijo: f64,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        MaximizeOptions {
            tol: 1e-10,
            max_iters: 10_000,
            guard: 1e-8,
            armijo: 1e-4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AscentStatus {
    Critical,
    /// The ascent direction points out of the guarded polytope.
    Boundary,
    MaxIters,
    /// The line search found no increase although the gradient is nonzero;
    /// the objective is flat to rounding along the direction.
    Stalled,
}

impl AscentStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            AscentStatus::Critical => "critical",
            AscentStatus::Boundary => "boundary",
            AscentStatus::MaxIters => "max_iters",
            AscentStatus::Stalled => "stalled",
        }
    }
}

impl fmt::Display for AscentStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaximizeOutcome {
    pub alpha: AngleAssignment<f64>,
    pub report: VolumeReport,
    pub status: AscentStatus,
    pub iterations: usize,
    /// Volume after each accepted step, starting with the initial volume.
    pub volumes: Vec<f64>,
    /// Constraints at the guard when the status is `Boundary`.
    pub pinned: Vec<String>,
}

/// A guarded constraint: a corner angle or a vertex margin.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Guarded {
    Corner(usize),
    Vertex(usize, usize),
}

impl fmt::Display for Guarded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guarded::Corner(slot) => write!(f, "angle at corner {}", Corner::from_slot(*slot)),
            Guarded::Vertex(t, v) => write!(f, "angle sum at vertex {v} of tetrahedron {t}"),
        }
    }
}

/// Largest step along `d` keeping every margin `>= guard`, with the
/// constraints that attain it.
fn step_limit(x: &[f64], d: &[f64], guard: f64) -> (f64, Vec<(Guarded, f64)>) {
    let mut limits = Vec::new();
    for (slot, (xi, di)) in x.iter().zip(d).enumerate() {
        if *di < 0.0 {
            limits.push((Guarded::Corner(slot), ((xi - guard) / -di).max(0.0)));
        }
    }
    for tet in 0..x.len() / 6 {
        for v in 0..4 {
            let (s, r) = EdgeIndex::at_vertex(v)
                .iter()
                .fold((0.0, 0.0), |(s, r), e| {
                    let slot = 6 * tet + e.index();
                    (s + x[slot], r + d[slot])
                });
            if r > 0.0 {
                limits.push((Guarded::Vertex(tet, v), ((PI - s - guard) / r).max(0.0)));
            }
        }
    }
    let min = limits.iter().map(|l| l.1).fold(f64::INFINITY, f64::min);
    (min, limits)
}

/// Relative error of computed tetrahedron volumes. Nearly flat
/// tetrahedra lose several digits to cancellation in the closed form.
pub const VOLUME_NOISE: f64 = 1e-12;

/// Steps shorter than this, forced by a tetrahedron degenerating, end the
/// ascent at the boundary.
const BLOCKED_STEP: f64 = 1e-12;

/// Projected gradient ascent with Armijo backtracking from a strict start.
///
/// Volume differences below rounding noise carry no information, so there
/// the gain in the Armijo test is estimated by the trapezoid rule on the
/// directional derivative, and the computed volume may drop by at most the
/// noise level.
pub fn maximize(
    tri: &IdealTriangulation,
    start: &AngleAssignment<f64>,
    options: &MaximizeOptions,
) -> Result<MaximizeOutcome, VolumeError> {
    let check = verify(
        tri,
        start,
        crate::config::Tolerances::default().verify.max(1e-9),
    )?;
    if !check.passed() {
        return Err(VolumeError::NotStrict(check.failures.join("; ")));
    }
    let mut x = start.values.clone();
    let mut eval = evaluate(tri, &x)?;
    let mut volumes = vec![eval.report.total_volume];
    let mut pinned = Vec::new();
    let mut iterations = 0;
    let status = loop {
        if eval.report.gradient_norm <= options.tol {
            break AscentStatus::Critical;
        }
        if iterations >= options.max_iters {
            break AscentStatus::MaxIters;
        }
        let d = eval.direction.clone();
        let (limit, limits) = step_limit(&x, &d, options.guard);
        if limit <= 1e-14 {
            pinned = limits
                .iter()
                .filter(|l| l.1 <= 1e-14)
                .map(|l| l.0.to_string())
                .collect();
            break AscentStatus::Boundary;
        }
        let slope = eval.report.gradient_norm.powi(2);
        let noise = VOLUME_NOISE
            * eval
                .report
                .per_tet_volumes
                .iter()
                .map(|v| v.abs())
                .sum::<f64>();
        let mut step = limit.min(1.0);
        let mut blocked = None;
        let accepted = loop {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            if trial == x {
                break None;
            }
            match evaluate(tri, &trial) {
                Ok(next) => {
                    let gain = next.report.total_volume - eval.report.total_volume;
                    let estimate = if gain.abs() > 100.0 * noise {
                        gain
                    } else {
                        let end: f64 = next.direction.iter().zip(&d).map(|(a, b)| a * b).sum();
                        0.5 * step * (slope + end)
                    };
                    if gain >= -noise && estimate >= options.armijo * step * slope {
                        break Some((trial, next, step));
                    }
                }
                Err(e) => blocked = Some(e),
            }
            step *= 0.5;
        };
        // A tetrahedron leaving the realizable range within a negligible
        // step pins the ascent as firmly as a guarded margin does.
        if let Some(e) = blocked.filter(|_| accepted.as_ref().is_none_or(|a| a.2 < BLOCKED_STEP)) {
            pinned = vec![e.to_string()];
            break AscentStatus::Boundary;
        }
        let Some((trial, next, _)) = accepted else {
            break AscentStatus::Stalled;
        };
        x = trial;
        eval = next;
        volumes.push(eval.report.total_volume);
        iterations += 1;
    };
    Ok(MaximizeOutcome {
        alpha: AngleAssignment::new(x),
        report: eval.report,
        status,
        iterations,
        volumes,
        pinned,
    })
}
