use super::{AdmissibleDisk, Cell, SideRef, SurfaceComplex, SurfaceError};
use crate::triangulation::{Corner, EdgeIndex, IdealTriangulation};
use crate::union_find::UnionFind;

impl SurfaceComplex {
    /// Pairs every side lying in a hexagonal face with a free side in the
    /// glued face whose endpoints correspond; the first candidate in disk
    /// order wins. Sides in external faces stay unpaired.
    pub fn auto_pair(
        tri: &IdealTriangulation,
        disks: Vec<AdmissibleDisk>,
    ) -> Result<SurfaceComplex, SurfaceError> {
        pair_sides(tri, disks, None)
    }

    /// The normal triangles cutting off every truncation triangle of one
    /// boundary component: a closed surface parallel to that component.
    pub fn vertex_link(
        tri: &IdealTriangulation,
        component: usize,
    ) -> Result<SurfaceComplex, SurfaceError> {
        Self::frontier(tri, &[component], &[])
    }

    /// Four-sided disks of external corners around every corner of one edge
    /// class: the frontier of a tubular neighborhood of the edge.
    pub fn edge_tube(
        tri: &IdealTriangulation,
        class: usize,
    ) -> Result<SurfaceComplex, SurfaceError> {
        Self::frontier(tri, &[], &[class])
    }

    /// The frontier of a regular neighborhood of some boundary components
    /// together with some edge classes.
    ///
    /// In each tetrahedron the chosen truncation triangles and edges must
    /// form pieces whose frontier is one disk each: a lone triangle, a lone
    /// edge (with either end chosen or not), or three chosen vertices joined
    /// by edges. Anything else is `UnsupportedFrontier`. Parallel sides are
    /// told apart by which vertices of their face lie in the neighborhood.
    pub fn frontier(
        tri: &IdealTriangulation,
        components: &[usize],
        classes: &[usize],
    ) -> Result<SurfaceComplex, SurfaceError> {
        let mut chosen = vec![[false; 4]; tri.tet_count()];
        for &c in components {
            for &(tet, v) in &tri.boundary_components()[c].triangles {
                chosen[tet][v] = true;
            }
        }
        let mut disks = Vec::new();
        let mut regions = Vec::new();
        for (tet, inside) in chosen.iter().enumerate() {
            let edges: Vec<EdgeIndex> = EdgeIndex::ALL
                .into_iter()
                .filter(|e| classes.contains(&tri.edge_class_of(Corner::new(tet, *e))))
                .collect();
            // nodes 0..4 are chosen vertices, 4 + e chosen edges; an edge
            // joins a vertex only if that truncation triangle is chosen
            let mut uf = UnionFind::new(10);
            for e in &edges {
                for v in e.vertices() {
                    if inside[v] {
                        uf.union(v, 4 + e.index());
                    }
                }
            }
            let nodes: Vec<usize> = (0..4)
                .filter(|&v| inside[v])
                .chain(edges.iter().map(|e| 4 + e.index()))
                .collect();
            let mut roots: Vec<usize> = nodes.iter().map(|&n| uf.find(n)).collect();
            roots.sort_unstable();
            roots.dedup();
            for root in roots {
                let part: Vec<usize> = nodes
                    .iter()
                    .copied()
                    .filter(|&n| uf.find(n) == root)
                    .collect();
                let verts: Vec<usize> = part.iter().copied().filter(|&n| n < 4).collect();
                let part_edges: Vec<EdgeIndex> = part
                    .iter()
                    .filter(|&&n| n >= 4)
                    .map(|&n| EdgeIndex::new(n - 4).expect("edge node"))
                    .collect();
                let disk = match (verts.as_slice(), part_edges.as_slice()) {
                    (&[v], []) => AdmissibleDisk::triangle(tet, v),
                    (_, &[e]) => {
                        let [a, b] = e.vertices();
                        match (inside[a], inside[b]) {
                            (true, true) => AdmissibleDisk::quad(tet, a, b),
                            (true, false) => AdmissibleDisk::bent_quad(tet, a, b),
                            (false, true) => AdmissibleDisk::bent_quad(tet, b, a),
                            (false, false) => AdmissibleDisk::tube_quad(tet, a, b),
                        }
                    }
                    (v, es)
                        if v.len() == 3
                            && es
                                .iter()
                                .all(|e| e.vertices().iter().all(|x| v.contains(x))) =>
                    {
                        let d = (0..4).find(|x| !v.contains(x)).expect("one vertex left");
                        AdmissibleDisk::triangle(tet, d)
                    }
                    _ => return Err(SurfaceError::UnsupportedFrontier { tet }),
                };
                let region = part
                    .iter()
                    .flat_map(|&n| {
                        if n < 4 {
                            vec![n]
                        } else {
                            EdgeIndex::new(n - 4)
                                .expect("edge node")
                                .vertices()
                                .to_vec()
                        }
                    })
                    .fold(0u8, |m, v| m | 1 << v);
                disks.push(disk);
                regions.push(region);
            }
        }
        pair_sides(tri, disks, Some(&regions))
    }
}

/// Pairs sides as in [`SurfaceComplex::auto_pair`]. With `regions`, a
/// bitmask of tetrahedron vertices per disk, two sides also need the
/// vertices of their face on the region side to correspond.
fn pair_sides(
    tri: &IdealTriangulation,
    disks: Vec<AdmissibleDisk>,
    regions: Option<&[u8]>,
) -> Result<SurfaceComplex, SurfaceError> {
    let mut surface = SurfaceComplex::new(disks, Vec::new());
    surface.check_references(tri)?;
    let mut used: Vec<Vec<bool>> = surface.disks.iter().map(|d| vec![false; d.k()]).collect();
    let mut pairings = Vec::new();
    for (d, disk) in surface.disks.iter().enumerate() {
        for s in 0..disk.k() {
            if used[d][s] {
                continue;
            }
            let face = match disk.side_cell(s) {
                Some(Cell::Face(f)) => f,
                Some(Cell::External(_)) => continue,
                None => return Err(SurfaceError::SideWithoutCell { side: (d, s) }),
            };
            let g = tri
                .gluing(disk.tet, face)
                .ok_or(SurfaceError::OpenSide { side: (d, s) })?;
            let (a, b) = disk.side_endpoints(s);
            let (ia, ib) = (a.permuted(g.perm), b.permuted(g.perm));
            let region = regions.map(|r| {
                let here = r[d] & !(1 << face);
                (0..4)
                    .filter(|v| here >> v & 1 == 1)
                    .fold(0u8, |m, v| m | 1 << g.perm.apply(v))
            });
            let partner = find_side(&surface, &used, (d, s), g.tet, |d2, x, y| {
                let ends = (x, y) == (ia, ib) || (x, y) == (ib, ia);
                ends && region.is_none_or(|m| regions.is_some_and(|r| r[d2] & !(1 << g.face) == m))
            });
            let Some(p) = partner else {
                return Err(SurfaceError::OpenSide { side: (d, s) });
            };
            used[d][s] = true;
            used[p.0][p.1] = true;
            pairings.push([(d, s), p]);
        }
    }
    surface.pairings = pairings;
    Ok(surface)
}

fn find_side(
    surface: &SurfaceComplex,
    used: &[Vec<bool>],
    this: SideRef,
    tet: usize,
    matches: impl Fn(usize, super::SurfaceCorner, super::SurfaceCorner) -> bool,
) -> Option<SideRef> {
    for (d, disk) in surface.disks.iter().enumerate() {
        if disk.tet != tet {
            continue;
        }
        for s in 0..disk.k() {
            if used[d][s] || (d, s) == this {
                continue;
            }
            let (x, y) = disk.side_endpoints(s);
            if matches!(disk.side_cell(s), Some(Cell::Face(_))) && matches(d, x, y) {
                return Some((d, s));
            }
        }
    }
    None
}
