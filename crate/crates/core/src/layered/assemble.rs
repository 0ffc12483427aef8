use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::fan::{cone_cell, face_triangulation, insert_flat_layers};
use super::{Decomposition, LayeredError};
use crate::angles::{
    build_polytope_with_flats, AngleError, AnglePolytope, PartiallyFlatAssignment,
    PartiallyFlatFile, TetTag,
};
use crate::geometry::{angles_from_vertices, GeometryError, MinkowskiVertex};
use crate::lp::Rational;
use crate::triangulation::{
    EdgeIndex, FaceRef, GluingRecord, IdealTriangulation, Perm4, TriangulationData,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildMode {
    Combinatorial,
    Geometric,
}

/// Where a tetrahedron of the layered triangulation comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TetOrigin {
    Cone {
        cell: usize,
        apex: usize,
        face: usize,
        base_vertex: usize,
    },
    Flat {
        pairing: usize,
        switch: usize,
        /// `[v, x, y, v']` in the ids of the pairing's `from` cell.
        vertices: [usize; 4],
    },
}

#[derive(Clone, Debug)]
pub struct LayeredOutput {
    pub triangulation: IdealTriangulation,
    pub tags: Vec<TetTag>,
    /// π (as 1 in units of π) on both diagonals of every flat tetrahedron,
    /// 0 everywhere else.
    pub flat_values: Vec<Rational>,
    /// Geometric mode only.
    pub beta: Option<PartiallyFlatAssignment<f64>>,
    pub provenance: Vec<TetOrigin>,
    /// `(cell, vertex id)` of each tetrahedron vertex.
    pub vertices: Vec<[[usize; 2]; 4]>,
}

impl LayeredOutput {
    pub fn flat_count(&self) -> usize {
        self.tags.iter().filter(|t| **t == TetTag::Flat).count()
    }

    /// Vertex sets `[v, x, y, v']` of the flats inserted on one pairing.
    pub fn flats_on(&self, pairing: usize) -> Vec<[usize; 4]> {
        self.provenance
            .iter()
            .filter_map(|o| match o {
                TetOrigin::Flat {
                    pairing: p,
                    vertices,
                    ..
                } if *p == pairing => Some(*vertices),
                _ => None,
            })
            .collect()
    }

    /// The angle polytope with the flat tetrahedra fixed.
    pub fn polytope(&self) -> Result<AnglePolytope, AngleError> {
        build_polytope_with_flats(&self.triangulation, &self.tags, &self.flat_values)
    }

    /// `{"mode": "rational-pi", "tags": {...}, "values": {...}}` listing
    /// values for flat tetrahedra only.
    pub fn skeleton_value(&self) -> Value {
        let mut values = serde_json::Map::new();
        for (slot, v) in self.flat_values.iter().enumerate() {
            if self.tags[slot / 6] == TetTag::Flat {
                values.insert(
                    format!("{}.{}", slot / 6, slot % 6),
                    Value::String(format!("{}/{}", v.numer(), v.denom())),
                );
            }
        }
        let tags = self
            .tags
            .iter()
            .enumerate()
            .map(|(t, tag)| {
                let s = if *tag == TetTag::Flat {
                    "flat"
                } else {
                    "hyperideal"
                };
                (t.to_string(), Value::String(s.into()))
            })
            .collect();
        serde_json::json!({ "mode": "rational-pi", "tags": Value::Object(tags), "values": values })
    }

    pub fn beta_file(&self) -> Option<PartiallyFlatFile> {
        self.beta.clone().map(PartiallyFlatFile::Radians)
    }

    pub fn provenance_value(&self) -> Value {
        serde_json::to_value(&self.provenance).expect("provenance serializes")
    }
}

/// One face of a tetrahedron still waiting for a partner, with its vertices
/// named in a common labelling.
#[derive(Clone, Copy, Debug)]
struct Exposed {
    tet: usize,
    face: usize,
    labels: [usize; 4],
}

impl Exposed {
    fn key(&self) -> [usize; 3] {
        let mut k = [0; 3];
        let mut i = 0;
        for (v, &l) in self.labels.iter().enumerate() {
            if v != self.face {
                k[i] = l;
                i += 1;
            }
        }
        k.sort_unstable();
        k
    }
}

#[derive(Clone, Copy, Debug)]
struct Glue {
    a: FaceRef,
    b: FaceRef,
    perm: Perm4,
}

fn glue(a: &Exposed, b: &Exposed) -> Glue {
    let mut images = [0u8; 4];
    images[a.face] = b.face as u8;
    for v in (0..4).filter(|&v| v != a.face) {
        let w = (0..4)
            .find(|&w| w != b.face && b.labels[w] == a.labels[v])
            .expect("exposed faces share their labels");
        images[v] = w as u8;
    }
    Glue {
        a: FaceRef::new(a.tet, a.face),
        b: FaceRef::new(b.tet, b.face),
        perm: Perm4::new(images).expect("bijection"),
    }
}

fn exposed_faces(tet: usize, labels: [usize; 4]) -> impl Iterator<Item = Exposed> {
    (0..4).map(move |face| Exposed { tet, face, labels })
}

/// Cones every cell, stacks flat layers on mismatched paired faces, orients
/// the result and, in geometric mode, computes the partially flat angles.
pub fn build(decomp: &Decomposition, mode: BuildMode) -> Result<LayeredOutput, LayeredError> {
    decomp.check()?;
    let mut keys: Vec<[[usize; 2]; 4]> = Vec::new();
    let mut provenance = Vec::new();
    let mut gluings: Vec<Glue> = Vec::new();
    let mut boundary: BTreeMap<[usize; 2], Vec<Exposed>> = BTreeMap::new();
    let apexes: Vec<usize> = decomp.cells.iter().map(|c| c.apex()).collect();

    for (c, cell) in decomp.cells.iter().enumerate() {
        let cone =
            cone_cell(cell, apexes[c]).map_err(|source| LayeredError::Cell { cell: c, source })?;
        let mut open: BTreeMap<[usize; 3], Vec<Exposed>> = BTreeMap::new();
        for t in cone {
            let tet = keys.len();
            keys.push(t.vertices.map(|v| [c, v]));
            provenance.push(TetOrigin::Cone {
                cell: c,
                apex: t.apex,
                face: t.face,
                base_vertex: t.base_vertex,
            });
            for e in exposed_faces(tet, t.vertices) {
                open.entry(e.key()).or_default().push(e);
            }
        }
        for (key, faces) in open {
            match faces.as_slice() {
                [a, b] => gluings.push(glue(a, b)),
                [a] => {
                    let face = cell
                        .face_containing(&key)
                        .expect("a triangle met once lies on the cell boundary");
                    boundary.entry([c, face]).or_default().push(*a);
                }
                _ => unreachable!("a triangle of a coned polytope lies on at most two tetrahedra"),
            }
        }
    }

    for (p, pairing) in decomp.pairings.iter().enumerate() {
        let [c, f] = pairing.from;
        let [c2, f2] = pairing.to;
        let cycle = &decomp.cells[c].faces[f];
        let fan_v = face_triangulation(&decomp.cells[c], f, apexes[c]);
        let far = face_triangulation(&decomp.cells[c2], f2, apexes[c2]);
        let pull = |x: usize| pairing.pull_back(cycle, x).expect("correspondence checked");
        let fan_v_prime = super::Fan {
            cone: pull(far.cone),
            triangles: far.triangles.iter().map(|t| t.map(pull)).collect(),
        };
        let mut frontier: BTreeMap<[usize; 3], Exposed> = BTreeMap::new();
        for e in boundary.get(&[c2, f2]).into_iter().flatten() {
            let mut mapped = *e;
            for (v, l) in mapped.labels.iter_mut().enumerate() {
                *l = if v == e.face { usize::MAX } else { pull(*l) };
            }
            frontier.insert(mapped.key(), mapped);
        }
        let switches = insert_flat_layers(cycle, &fan_v, &fan_v_prime)?;
        for (k, switch) in switches.iter().enumerate() {
            let tet = keys.len();
            keys.push(switch.vertices.map(|v| [c, v]));
            provenance.push(TetOrigin::Flat {
                pairing: p,
                switch: k,
                vertices: switch.vertices,
            });
            // faces opposite v and y lie on the old fan, opposite x and v' on the new
            for e in exposed_faces(tet, switch.vertices) {
                if e.face == 0 || e.face == 2 {
                    let old = frontier
                        .remove(&e.key())
                        .expect("switch replaces a triangle of the current fan");
                    gluings.push(glue(&e, &old));
                } else {
                    frontier.insert(e.key(), e);
                }
            }
        }
        for e in boundary.get(&[c, f]).into_iter().flatten() {
            let other = frontier.remove(&e.key()).ok_or_else(|| {
                LayeredError::FanMismatch(format!(
                    "pairing {p}: triangle {:?} has no partner after switching",
                    e.key()
                ))
            })?;
            gluings.push(glue(e, &other));
        }
        debug_assert!(frontier.is_empty());
    }

    let flips = orient(keys.len(), &gluings)?;
    let swap = Perm4::new([0, 1, 3, 2]).expect("transposition");
    let s = |t: usize| if flips[t] { swap } else { Perm4::IDENTITY };
    for (t, k) in keys.iter_mut().enumerate() {
        if flips[t] {
            k.swap(2, 3);
        }
    }
    let records = gluings
        .iter()
        .map(|g| GluingRecord {
            from: FaceRef::new(g.a.tet, s(g.a.tet).apply(g.a.face)),
            to: FaceRef::new(g.b.tet, s(g.b.tet).apply(g.b.face)),
            perm: s(g.a.tet).then(g.perm).then(s(g.b.tet)),
        })
        .collect();
    let triangulation = IdealTriangulation::from_data(&TriangulationData {
        tets: keys.len(),
        gluings: records,
    })?;

    let tags: Vec<TetTag> = provenance
        .iter()
        .map(|o| match o {
            TetOrigin::Cone { .. } => TetTag::Hyperideal,
            TetOrigin::Flat { .. } => TetTag::Flat,
        })
        .collect();
    let mut flat_values = vec![Rational::zero(); 6 * keys.len()];
    for (t, origin) in provenance.iter().enumerate() {
        if let TetOrigin::Flat {
            vertices: [v, x, y, w],
            ..
        } = *origin
        {
            for [a, b] in [[w, x], [v, y]] {
                flat_values[6 * t + edge_between(&keys[t], a, b).index()] = Rational::one();
            }
        }
    }

    for class in triangulation.edge_classes() {
        if class.corners.iter().all(|c| tags[c.tet] == TetTag::Flat) {
            return Err(LayeredError::EdgeWithoutConeCorner { edge: class.id });
        }
    }

    let beta = match mode {
        BuildMode::Combinatorial => None,
        BuildMode::Geometric => Some(geometric_beta(
            decomp,
            &triangulation,
            &keys,
            &tags,
            &flat_values,
        )?),
    };
    Ok(LayeredOutput {
        triangulation,
        tags,
        flat_values,
        beta,
        provenance,
        vertices: keys,
    })
}

fn edge_between(key: &[[usize; 2]; 4], a: usize, b: usize) -> EdgeIndex {
    let i = key
        .iter()
        .position(|k| k[1] == a)
        .expect("vertex on tetrahedron");
    let j = key
        .iter()
        .position(|k| k[1] == b)
        .expect("vertex on tetrahedron");
    EdgeIndex::from_vertices(i, j)
}

/// Which tetrahedra to reflect so that every gluing permutation is odd.
fn orient(tets: usize, gluings: &[Glue]) -> Result<Vec<bool>, LayeredError> {
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); tets];
    for g in gluings {
        let differ = !g.perm.is_odd();
        adj[g.a.tet].push((g.b.tet, differ));
        adj[g.b.tet].push((g.a.tet, differ));
    }
    let mut flip: Vec<Option<bool>> = vec![None; tets];
    for root in 0..tets {
        if flip[root].is_some() {
            continue;
        }
        flip[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(t) = queue.pop_front() {
            let ft = flip[t].expect("visited");
            for &(u, differ) in &adj[t] {
                let want = ft ^ differ;
                match flip[u] {
                    None => {
                        flip[u] = Some(want);
                        queue.push_back(u);
                    }
                    Some(fu) if fu != want => return Err(LayeredError::NonOrientable { tet: u }),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(flip.into_iter().map(|f| f.unwrap_or(false)).collect())
}

fn geometric_beta(
    decomp: &Decomposition,
    tri: &IdealTriangulation,
    keys: &[[[usize; 2]; 4]],
    tags: &[TetTag],
    flat_values: &[Rational],
) -> Result<PartiallyFlatAssignment<f64>, LayeredError> {
    let sextuples: Vec<Result<[f64; 6], LayeredError>> = keys
        .par_iter()
        .enumerate()
        .map(|(t, key)| {
            if tags[t] == TetTag::Flat {
                return Ok(std::array::from_fn(|e| {
                    if flat_values[6 * t + e].is_zero() {
                        0.0
                    } else {
                        PI
                    }
                }));
            }
            let cell = key[0][0];
            let coords = key.iter().map(|&[c, v]| {
                decomp.cells[c]
                    .coords(v)
                    .ok_or(LayeredError::MissingCoordinates { cell: c, vertex: v })
            });
            let coords: Vec<MinkowskiVertex> = coords.collect::<Result<_, _>>()?;
            let coords: [MinkowskiVertex; 4] = coords.try_into().expect("four vertices");
            angles_from_vertices(&coords)
                .map(|a| a.0)
                .map_err(|e| match e {
                    GeometryError::NotHyperideal { vertex, norm } => LayeredError::NotHyperideal {
                        cell,
                        vertex: key[vertex][1],
                        norm,
                    },
                    GeometryError::EdgeMissesHyperbolicSpace { a, b, inner } => {
                        LayeredError::SegmentMissesHyperbolicSpace {
                            cell,
                            a: key[a][1],
                            b: key[b][1],
                            inner,
                        }
                    }
                    source => LayeredError::Geometry {
                        cell,
                        tet: t,
                        source,
                    },
                })
        })
        .collect();
    let mut values = Vec::with_capacity(6 * keys.len());
    for s in sextuples {
        values.extend(s?);
    }
    for class in tri.edge_classes() {
        let sum: f64 = class.corners.iter().map(|c| values[c.slot()]).sum();
        if (sum - 2.0 * PI).abs() > 1e-9 {
            return Err(LayeredError::EdgeSum {
                edge: class.id,
                sum,
            });
        }
    }
    Ok(PartiallyFlatAssignment {
        values,
        tags: tags.to_vec(),
    })
}
