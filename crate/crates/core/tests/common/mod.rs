#![allow(dead_code)]

use anglers::angles::{
    build_polytope_with_flats, solve, AnglePolytope, PartiallyFlatAssignment, TetTag,
};
use anglers::lp::Rational;
use anglers::triangulation::{
    EdgeIndex, FaceRef, GluingRecord, IdealTriangulation, Perm4, TriangulationData,
};
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

pub fn data_path(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn load_data(name: &str) -> TriangulationData {
    serde_json::from_str(&std::fs::read_to_string(data_path(name)).unwrap()).unwrap()
}

pub fn load(name: &str) -> IdealTriangulation {
    IdealTriangulation::from_data(&load_data(name)).unwrap()
}

/// Pairs the `4n` faces at random and glues each pair by a random odd
/// permutation.
pub fn random_data<R: Rng>(rng: &mut R, n: usize) -> TriangulationData {
    let mut faces: Vec<FaceRef> = (0..n)
        .flat_map(|t| (0..4).map(move |f| FaceRef::new(t, f)))
        .collect();
    faces.shuffle(rng);
    let gluings = faces
        .chunks(2)
        .map(|pair| {
            let (from, to) = (pair[0], pair[1]);
            let choices: Vec<Perm4> = Perm4::all()
                .filter(|p| p.apply(from.face) == to.face && p.is_odd())
                .collect();
            GluingRecord {
                from,
                to,
                perm: *choices.choose(rng).unwrap(),
            }
        })
        .collect();
    TriangulationData { tets: n, gluings }
}

pub fn is_connected(data: &TriangulationData) -> bool {
    let mut seen = vec![false; data.tets];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(t) = stack.pop() {
        for g in &data.gluings {
            for (a, b) in [(g.from.tet, g.to.tet), (g.to.tet, g.from.tet)] {
                if a == t && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn random_triangulation<R: Rng>(rng: &mut R, n: usize) -> IdealTriangulation {
    loop {
        let data = random_data(rng, n);
        if is_connected(&data) {
            return IdealTriangulation::from_data(&data).unwrap();
        }
    }
}

/// Exact flat values for the tagged tetrahedra: π on the chosen diagonal
/// pair, 0 elsewhere.
pub fn flat_values(tri: &IdealTriangulation, flats: &[Option<EdgeIndex>]) -> Vec<Rational> {
    let mut values = vec![Rational::zero(); tri.corner_count()];
    for (t, d) in flats.iter().enumerate() {
        if let Some(d) = d {
            values[6 * t + d.index()] = Rational::one();
            values[6 * t + d.opposite().index()] = Rational::one();
        }
    }
    values
}

/// A partially flat assignment with at least one flat tetrahedron: random
/// flat tetrahedra and diagonals, the rest from the max-slack point of the
/// remaining polytope. `None` if that polytope has no strict point; the
/// float solver screens candidates before the exact one runs.
pub fn random_partially_flat<R: Rng>(
    rng: &mut R,
    tri: &IdealTriangulation,
) -> Option<PartiallyFlatAssignment<Rational>> {
    let n = tri.tet_count();
    let mut flats: Vec<Option<EdgeIndex>> = vec![None; n];
    let count = rng.random_range(1..=(n / 3).max(1));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &t in &order[..count] {
        flats[t] = Some(EdgeIndex::new(rng.random_range(0..3)).unwrap());
    }
    let tags: Vec<TetTag> = flats
        .iter()
        .map(|f| {
            if f.is_some() {
                TetTag::Flat
            } else {
                TetTag::Hyperideal
            }
        })
        .collect();
    let values = flat_values(tri, &flats);
    let polytope = build_polytope_with_flats(tri, &tags, &values).ok()?;
    if float_max_slack(&polytope) < 1e-7 {
        return None;
    }
    let outcome = solve(&polytope);
    if !outcome.is_strictly_feasible() {
        return None;
    }
    Some(PartiallyFlatAssignment {
        values: outcome.witness.unwrap().values,
        tags,
    })
}

/// A `k`-sheeted cover of `base` given by a `Z_k`-valued shift on each
/// gluing, or `None` if some edge loop has nontrivial shift or the cover is
/// disconnected.
pub fn cyclic_cover(
    base: &TriangulationData,
    shifts: &[usize],
    k: usize,
) -> Option<IdealTriangulation> {
    let n = base.tets;
    let mut gluings = Vec::new();
    for (g, &shift) in base.gluings.iter().zip(shifts) {
        for sheet in 0..k {
            gluings.push(GluingRecord {
                from: FaceRef::new(g.from.tet + n * sheet, g.from.face),
                to: FaceRef::new(g.to.tet + n * ((sheet + shift) % k), g.to.face),
                perm: g.perm,
            });
        }
    }
    let data = TriangulationData {
        tets: n * k,
        gluings,
    };
    if !is_connected(&data) {
        return None;
    }
    let tri = IdealTriangulation::from_data(&data).ok()?;
    let base_tri = IdealTriangulation::from_data(base).ok()?;
    let same_valence = tri.edge_classes().len() == k * base_tri.edge_classes().len();
    same_valence.then_some(tri)
}

/// Connected covers of the three-edge valence-8 triangulation with every
/// edge still of valence 8, one per sheet count in `sheets`.
pub fn valence8_family(sheets: &[usize]) -> Vec<IdealTriangulation> {
    let base = load_data("three_valence8_edges.json");
    let mut out = vec![IdealTriangulation::from_data(&base).unwrap()];
    for &k in sheets {
        let m = base.gluings.len();
        let total = k.pow(m as u32);
        let found = (1..total).find_map(|code| {
            let shifts: Vec<usize> = (0..m).map(|i| code / k.pow(i as u32) % k).collect();
            cyclic_cover(&base, &shifts, k)
        });
        out.push(found.expect("a connected unbranched cover exists"));
    }
    out
}

/// Maximum slack of the polytope by a float Big-M simplex with Bland's
/// rule, written independently of the exact solver.
pub fn float_max_slack(p: &AnglePolytope) -> f64 {
    let free: Vec<usize> = p.free_slots().collect();
    let col = |slot: usize| free.iter().position(|&s| s == slot).unwrap();
    // columns: x (free corners, >= 0), s_plus, s_minus, vertex slacks, edge artificials
    let nx = free.len();
    let nv = p.vertex_rows().len();
    let ne = p.edge_rows().len();
    let (sp, sm) = (nx, nx + 1);
    let ncols = nx + 2 + nv + ne;
    let big_m = 1e4;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    let mut basis = Vec::new();
    // x >= s written as x - s >= 0 is enforced by substituting x = z + s
    for (i, row) in p.edge_rows().iter().enumerate() {
        let mut r = vec![0.0; ncols];
        let mut weight = 0.0;
        for &(slot, m) in &row.terms {
            r[col(slot)] += m as f64;
            weight += m as f64;
        }
        r[sp] = weight;
        r[sm] = -weight;
        let mut b = row.rhs.to_f64().unwrap();
        if b < 0.0 {
            r.iter_mut().for_each(|x| *x = -*x);
            b = -b;
        }
        r[nx + 2 + nv + i] = 1.0;
        rows.push(r);
        rhs.push(b);
        basis.push(nx + 2 + nv + i);
    }
    for (j, row) in p.vertex_rows().iter().enumerate() {
        let mut r = vec![0.0; ncols];
        for &slot in &row.slots {
            r[col(slot)] += 1.0;
        }
        r[sp] = 4.0;
        r[sm] = -4.0;
        r[nx + 2 + j] = 1.0;
        rows.push(r);
        rhs.push(1.0);
        basis.push(nx + 2 + j);
    }
    let mut cost = vec![0.0; ncols];
    cost[sp] = 1.0;
    cost[sm] = -1.0;
    for i in 0..ne {
        cost[nx + 2 + nv + i] = -big_m;
    }
    loop {
        let reduced: Vec<f64> = (0..ncols)
            .map(|c| {
                cost[c]
                    - rows
                        .iter()
                        .zip(&basis)
                        .map(|(r, &b)| cost[b] * r[c])
                        .sum::<f64>()
            })
            .collect();
        let Some(enter) = (0..ncols).find(|&c| reduced[c] > 1e-9 && !basis.contains(&c)) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for (i, r) in rows.iter().enumerate() {
            if r[enter] > 1e-12 {
                let ratio = rhs[i] / r[enter];
                let better = match leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < best - 1e-12 || (ratio <= best + 1e-12 && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (l, _) = leave.expect("s is bounded by the vertex rows");
        let pivot = rows[l][enter];
        rows[l].iter_mut().for_each(|x| *x /= pivot);
        rhs[l] /= pivot;
        for i in 0..rows.len() {
            if i != l && rows[i][enter].abs() > 0.0 {
                let f = rows[i][enter];
                let (src, dst) = if i < l {
                    let (a, b) = rows.split_at_mut(l);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[l], &mut b[0])
                };
                for c in 0..ncols {
                    dst[c] -= f * src[c];
                }
                rhs[i] -= f * rhs[l];
            }
        }
        basis[l] = enter;
    }
    let value = |c: usize| basis.iter().position(|&b| b == c).map_or(0.0, |i| rhs[i]);
    value(sp) - value(sm)
}

/// A double cover of the three-edge valence-8 triangulation whose boundary
/// splits into two components.
pub fn valence8_split_cover() -> IdealTriangulation {
    let base = load_data("three_valence8_edges.json");
    let m = base.gluings.len();
    (1..1usize << m)
        .find_map(|code| {
            let shifts: Vec<usize> = (0..m).map(|i| code >> i & 1).collect();
            cyclic_cover(&base, &shifts, 2).filter(|t| t.boundary_components().len() == 2)
        })
        .expect("a double cover with split boundary exists")
}
