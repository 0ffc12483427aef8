use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{CellError, LayeredError, PolyhedralCell};

/// One tetrahedron of a coned cell: `vertices = [apex, base_vertex, a, b]`
/// with `a, b` consecutive on `face`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeTet {
    pub apex: usize,
    pub face: usize,
    pub base_vertex: usize,
    pub vertices: [usize; 4],
}

/// A polygon triangulated by the diagonals from one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub cone: usize,
    pub triangles: Vec<[usize; 3]>,
}

impl Fan {
    /// The fan over `cycle` from `cone`, which must lie on it.
    pub fn over(cycle: &[usize], cone: usize) -> Option<Fan> {
        let n = cycle.len();
        let start = cycle.iter().position(|&v| v == cone)?;
        let at = |k: usize| cycle[(start + k) % n];
        let triangles = (1..n.saturating_sub(1))
            .map(|k| [cone, at(k), at(k + 1)])
            .collect();
        Some(Fan { cone, triangles })
    }

    /// Diagonals of the fan as sorted pairs.
    pub fn diagonals(&self, cycle: &[usize]) -> BTreeSet<(usize, usize)> {
        let n = cycle.len();
        let boundary: BTreeSet<_> = (0..n)
            .map(|k| sorted(cycle[k], cycle[(k + 1) % n]))
            .collect();
        self.triangles
            .iter()
            .flat_map(|t| [sorted(t[0], t[1]), sorted(t[1], t[2]), sorted(t[0], t[2])])
            .filter(|e| !boundary.contains(e))
            .collect()
    }

    fn triangle_sets(&self) -> BTreeSet<[usize; 3]> {
        self.triangles
            .iter()
            .map(|t| {
                let mut t = *t;
                t.sort_unstable();
                t
            })
            .collect()
    }
}

fn sorted(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Cones a cell from `apex`: every face avoiding the apex is fanned from
/// its lowest vertex and each fan triangle spans a tetrahedron with the
/// apex.
pub fn cone_cell(cell: &PolyhedralCell, apex: usize) -> Result<Vec<ConeTet>, CellError> {
    if !cell.ids().contains(&apex) {
        return Err(CellError::ApexNotInCell(apex));
    }
    let mut out = Vec::new();
    for (f, face) in cell.faces.iter().enumerate() {
        let distinct: BTreeSet<_> = face.iter().collect();
        if face.len() < 3 || distinct.len() != face.len() {
            return Err(CellError::DegenerateFace { face: f });
        }
        if face.contains(&apex) {
            continue;
        }
        let fan = face_triangulation(cell, f, apex);
        for [w, a, b] in fan.triangles {
            out.push(ConeTet {
                apex,
                face: f,
                base_vertex: w,
                vertices: [apex, w, a, b],
            });
        }
    }
    Ok(out)
}

/// The fan a coning from `apex` induces on one face: from the apex if the
/// face contains it, else from the face's lowest vertex.
pub fn face_triangulation(cell: &PolyhedralCell, face: usize, apex: usize) -> Fan {
    let cycle = &cell.faces[face];
    let cone = if cycle.contains(&apex) {
        apex
    } else {
        *cycle.iter().min().expect("faces are nonempty")
    };
    Fan::over(cycle, cone).expect("cone lies on the face")
}

/// A diagonal switch on the quadrilateral `v, x, y, v'`: the flat
/// tetrahedron replaces the diagonal `{v', x}` by `{v, y}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatSwitch {
    /// `[v, x, y, v']`.
    pub vertices: [usize; 4],
    pub old_diagonal: [usize; 2],
    pub new_diagonal: [usize; 2],
}

/// The diagonal switches turning the fan at `v'` into the fan at `v` on the
/// polygon `cycle`: first along the arc `v, cycle[v+1], ...` then along the
/// arc `v, cycle[v-1], ...`, each ordered from `v` towards `v'`.
pub fn insert_flat_layers(
    cycle: &[usize],
    fan_v: &Fan,
    fan_v_prime: &Fan,
) -> Result<Vec<FlatSwitch>, LayeredError> {
    let polygon: BTreeSet<_> = cycle.iter().copied().collect();
    for fan in [fan_v, fan_v_prime] {
        let expected = Fan::over(cycle, fan.cone).ok_or_else(|| {
            LayeredError::FanMismatch(format!("cone vertex {} is not on {cycle:?}", fan.cone))
        })?;
        if fan.triangle_sets() != expected.triangle_sets() {
            return Err(LayeredError::FanMismatch(format!(
                "fan at {} does not triangulate {cycle:?}",
                fan.cone
            )));
        }
    }
    debug_assert_eq!(polygon.len(), cycle.len());
    let (v, w) = (fan_v.cone, fan_v_prime.cone);
    if v == w {
        return Ok(Vec::new());
    }
    let n = cycle.len();
    let start = cycle.iter().position(|&x| x == v).expect("checked above");
    let forward: Vec<usize> = (1..n).map(|k| cycle[(start + k) % n]).collect();
    let split = forward.iter().position(|&x| x == w).expect("checked above");
    let u_arc = &forward[..split];
    let w_arc: Vec<usize> = forward[split + 1..].iter().rev().copied().collect();
    let mut out = Vec::new();
    for arc in [u_arc, &w_arc[..]] {
        for pair in arc.windows(2) {
            let (x, y) = (pair[0], pair[1]);
            out.push(FlatSwitch {
                vertices: [v, x, y, w],
                old_diagonal: [w, x],
                new_diagonal: [v, y],
            });
        }
    }
    Ok(out)
}
