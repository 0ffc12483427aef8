use std::fmt;

use super::{AngleAssignment, AngleError, AngleScalar, PartiallyFlatAssignment, TetTag};
use crate::triangulation::{Corner, EdgeIndex, IdealTriangulation};

/// Counts of 0-angles (`m`), π-angles (`n`) and interior angles (`k`)
/// around one edge class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeProfile {
    pub edge: usize,
    pub m: usize,
    pub n: usize,
    pub k: usize,
}

impl EdgeProfile {
    /// `(m - 3n) / k`, the rate at which interior angles shrink.
    pub fn coefficient<S: AngleScalar>(&self) -> S {
        S::from_i64(self.m as i64 - 3 * self.n as i64) / S::from_i64(self.k as i64)
    }
}

/// Profiles of every edge class; fails on an edge with no interior angle.
pub fn edge_profiles<S: AngleScalar>(
    tri: &IdealTriangulation,
    beta: &PartiallyFlatAssignment<S>,
) -> Result<Vec<EdgeProfile>, AngleError> {
    if beta.values.len() != tri.corner_count() {
        return Err(AngleError::WrongLength {
            expected: tri.corner_count(),
            got: beta.values.len(),
        });
    }
    tri.edge_classes()
        .iter()
        .map(|class| {
            let mut p = EdgeProfile {
                edge: class.id,
                m: 0,
                n: 0,
                k: 0,
            };
            for c in &class.corners {
                let v = beta.values[c.slot()].clone();
                if v.is_zero_value() {
                    p.m += 1;
                } else if v == S::pi() {
                    p.n += 1;
                } else {
                    p.k += 1;
                }
            }
            if p.k == 0 {
                return Err(AngleError::NoInteriorAngle { edge: class.id });
            }
            Ok(p)
        })
        .collect()
}

/// `α_t`: `t` where `β = 0`, `π - 3t` where `β = π`, and
/// `β - ((m - 3n)/k) t` elsewhere. Evaluated for any `t`.
pub fn alpha_t<S: AngleScalar>(
    tri: &IdealTriangulation,
    beta: &PartiallyFlatAssignment<S>,
    profiles: &[EdgeProfile],
    t: &S,
) -> AngleAssignment<S> {
    let three = S::from_i64(3);
    let values = beta
        .values
        .iter()
        .enumerate()
        .map(|(slot, b)| {
            if b.is_zero_value() {
                t.clone()
            } else if *b == S::pi() {
                S::pi() - three.clone() * t.clone()
            } else {
                let class = tri.edge_class_of(Corner::from_slot(slot));
                b.clone() - profiles[class].coefficient::<S>() * t.clone()
            }
        })
        .collect();
    AngleAssignment::new(values)
}

/// The constraint that first becomes tight as `t` grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Binding {
    /// An interior corner reaches 0.
    InteriorPositivity { corner: Corner },
    /// A π-corner reaches 0 at `t = π/3`.
    FlatPi { corner: Corner },
    /// A hyperideal vertex sum reaches π.
    VertexSum { tet: usize, vertex: usize },
    /// Nothing binds below the cap `π/3`.
    Cap,
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::InteriorPositivity { corner } => write!(f, "positivity of corner {corner}"),
            Binding::FlatPi { corner } => write!(f, "π-corner {corner} reaching 0"),
            Binding::VertexSum { tet, vertex } => {
                write!(f, "vertex {vertex} of tetrahedron {tet} reaching π")
            }
            Binding::Cap => write!(f, "cap π/3"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TMax<S> {
    pub value: S,
    pub binding: Binding,
}

/// Supremum of admissible `t`, capped at `π/3`.
///
/// Ties go to the first candidate in the order: interior corners by slot,
/// π-corners, vertex sums by `(tet, vertex)`, cap.
pub fn t_max<S: AngleScalar>(
    tri: &IdealTriangulation,
    beta: &PartiallyFlatAssignment<S>,
) -> Result<TMax<S>, AngleError> {
    let profiles = edge_profiles(tri, beta)?;
    let coeff = |slot: usize| -> S {
        profiles[tri.edge_class_of(Corner::from_slot(slot))].coefficient::<S>()
    };
    let mut best: Option<TMax<S>> = None;
    let mut offer = |value: S, binding: Binding| {
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(TMax { value, binding });
        }
    };
    for (slot, b) in beta.values.iter().enumerate() {
        if b.is_zero_value() || *b == S::pi() {
            continue;
        }
        let c = coeff(slot);
        if c > S::zero() {
            offer(
                b.clone() / c,
                Binding::InteriorPositivity {
                    corner: Corner::from_slot(slot),
                },
            );
        }
    }
    let third = S::pi() / S::from_i64(3);
    if let Some(slot) = beta.values.iter().position(|b| *b == S::pi()) {
        offer(
            third.clone(),
            Binding::FlatPi {
                corner: Corner::from_slot(slot),
            },
        );
    }
    for (tet, tag) in beta.tags.iter().enumerate() {
        if *tag != TetTag::Hyperideal {
            continue;
        }
        for vertex in 0..4 {
            let (sum, rate) =
                EdgeIndex::at_vertex(vertex)
                    .iter()
                    .fold((S::zero(), S::zero()), |(s, r), e| {
                        let slot = 6 * tet + e.index();
                        (s + beta.values[slot].clone(), r + coeff(slot))
                    });
            if rate < S::zero() {
                offer((S::pi() - sum) / -rate, Binding::VertexSum { tet, vertex });
            }
        }
    }
    offer(third, Binding::Cap);
    Ok(best.expect("cap is always offered"))
}

/// `α_t` for `0 < t < t_max`, checked.
pub fn perturb<S: AngleScalar>(
    tri: &IdealTriangulation,
    beta: &PartiallyFlatAssignment<S>,
    t: &S,
) -> Result<AngleAssignment<S>, AngleError> {
    let bound = t_max(tri, beta)?;
    if *t <= S::zero() || *t >= bound.value {
        return Err(AngleError::TOutOfRange {
            t: t.to_radians(),
            t_max: bound.value.to_radians(),
        });
    }
    let profiles = edge_profiles(tri, beta)?;
    Ok(alpha_t(tri, beta, &profiles, t))
}
