//! Convex polyhedra with exact rational coordinates.
//!
//! A [`Polyhedron`] stores a vertex list and outward-oriented face cycles
//! (counterclockwise viewed from outside). Edges are derived. The
//! canonical form produced by [`crate::hull::hull_from_points`] sorts
//! vertices lexicographically, rotates each face cycle to start at its
//! smallest index and sorts the face list, so equal point sets yield
//! bit-identical structures.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::vec3::Vec3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    pub vertices: Vec<Vec3>,
    /// Vertex-index cycles, counterclockwise seen from outside.
    pub faces: Vec<Vec<usize>>,
    /// Unordered index pairs (i < j), sorted; derived from the faces.
    pub edges: Vec<(usize, usize)>,
}

/// Supporting plane of a face: inner side is `normal . x < offset`.
#[derive(Clone, Debug)]
pub struct FacePlane {
    /// Outward normal (not normalized; exact).
    pub normal: Vec3,
    pub offset: Scalar,
}

#[derive(Clone, Debug)]
pub struct MassProperties {
    pub volume: Scalar,
    pub centroid: Vec3,
}

/// One invariant violation found by [`Polyhedron::validate`].
#[derive(Clone, Debug)]
pub struct Violation {
    pub what: String,
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub violations: Vec<Violation>,
}

impl Diagnostics {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, what: String) {
        self.violations.push(Violation { what });
    }
}

impl Polyhedron {
    /// Builds from parts and derives the edge list. Does not validate.
    pub fn from_parts(vertices: Vec<Vec3>, faces: Vec<Vec<usize>>) -> Self {
        let edges = derive_edges(&faces);
        Polyhedron {
            vertices,
            faces,
            edges,
        }
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// f + v + e, the total number of k-faces for k = 0,1,2.
    pub fn total_k_faces(&self) -> i64 {
        (self.face_count() + self.vertex_count() + self.edge_count()) as i64
    }

    /// Outward supporting plane of face `f` via Newell's formula, which is
    /// exact for planar rational cycles.
    pub fn face_plane(&self, f: usize) -> FacePlane {
        let cycle = &self.faces[f];
        let mut normal = Vec3::zero();
        for k in 0..cycle.len() {
            let a = &self.vertices[cycle[k]];
            let b = &self.vertices[cycle[(k + 1) % cycle.len()]];
            normal = &normal + &a.cross(b);
        }
        let offset = normal.dot(&self.vertices[cycle[0]]);
        FacePlane { normal, offset }
    }

    pub fn face_planes(&self) -> Vec<FacePlane> {
        (0..self.faces.len()).map(|f| self.face_plane(f)).collect()
    }

    /// The two faces incident to each edge, in the edge list's order.
    pub fn edge_faces(&self) -> Vec<[usize; 2]> {
        let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (fi, cycle) in self.faces.iter().enumerate() {
            for k in 0..cycle.len() {
                let a = cycle[k];
                let b = cycle[(k + 1) % cycle.len()];
                let key = (a.min(b), a.max(b));
                map.entry(key).or_default().push(fi);
            }
        }
        self.edges
            .iter()
            .map(|e| {
                let fs = &map[e];
                [fs[0], fs[1]]
            })
            .collect()
    }

    /// Vertex degrees (number of incident edges).
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Faces incident to each vertex.
    pub fn vertex_faces(&self) -> Vec<Vec<usize>> {
        let mut vf = vec![Vec::new(); self.vertices.len()];
        for (fi, cycle) in self.faces.iter().enumerate() {
            for &v in cycle {
                vf[v].push(fi);
            }
        }
        vf
    }

    /// True when `p` satisfies `normal . p < offset` for every face.
    pub fn contains_strictly(&self, p: &Vec3) -> bool {
        self.face_planes()
            .iter()
            .all(|pl| pl.normal.dot(p) < pl.offset)
    }

    /// Squared diameter (max pairwise squared distance).
    pub fn diameter2(&self) -> Scalar {
        let mut best = Scalar::zero();
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                let d = (&self.vertices[i] - &self.vertices[j]).norm2();
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    /// Checks every structural invariant exactly and reports all failures.
    pub fn validate(&self) -> Diagnostics {
        let mut diag = Diagnostics::default();
        let v = self.vertex_count();
        let f = self.face_count();
        let e = self.edge_count();

        if v < 4 {
            diag.push(format!("only {v} vertices"));
        }
        for (i, a) in self.vertices.iter().enumerate() {
            for (j, b) in self.vertices.iter().enumerate().skip(i + 1) {
                if a == b {
                    diag.push(format!("vertices {i} and {j} coincide"));
                }
            }
        }

        // Face cycles: length, distinctness, in-range indices.
        for (fi, cycle) in self.faces.iter().enumerate() {
            if cycle.len() < 3 {
                diag.push(format!("face {fi} has fewer than 3 vertices"));
                continue;
            }
            let mut seen = cycle.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != cycle.len() {
                diag.push(format!("face {fi} repeats a vertex"));
            }
            if cycle.iter().any(|&i| i >= v) {
                diag.push(format!("face {fi} references a missing vertex"));
            }
        }
        if !diag.ok() {
            return diag;
        }

        // Planarity and convexity of each face cycle, and outwardness.
        let planes = self.face_planes();
        for (fi, cycle) in self.faces.iter().enumerate() {
            let pl = &planes[fi];
            if pl.normal.is_zero() {
                diag.push(format!("face {fi} has zero normal (degenerate cycle)"));
                continue;
            }
            for &vi in cycle {
                if pl.normal.dot(&self.vertices[vi]) != pl.offset {
                    diag.push(format!("face {fi} is not planar at vertex {vi}"));
                }
            }
            // Cycle must turn consistently with the outward normal.
            for k in 0..cycle.len() {
                let a = &self.vertices[cycle[k]];
                let b = &self.vertices[cycle[(k + 1) % cycle.len()]];
                let c = &self.vertices[cycle[(k + 2) % cycle.len()]];
                let turn = (b - a).cross(&(c - b)).dot(&pl.normal);
                if turn.is_negative() {
                    diag.push(format!("face {fi} cycle is not convex/ccw at position {k}"));
                } else if turn.is_zero() {
                    diag.push(format!(
                        "face {fi} has a vertex in the relative interior of an edge at position {k}"
                    ));
                }
            }
        }

        // Global convexity: every vertex weakly inside every face plane.
        for (fi, pl) in planes.iter().enumerate() {
            for (vi, p) in self.vertices.iter().enumerate() {
                let s = pl.normal.dot(p);
                if s > pl.offset {
                    diag.push(format!(
                        "vertex {vi} lies strictly outside face {fi} (orientation or convexity violation)"
                    ));
                }
            }
        }

        // Edge-manifold check: each directed edge used exactly once.
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for cycle in &self.faces {
            for k in 0..cycle.len() {
                let a = cycle[k];
                let b = cycle[(k + 1) % cycle.len()];
                *directed.entry((a, b)).or_insert(0) += 1;
            }
        }
        for (&(a, b), &count) in &directed {
            if count > 1 {
                diag.push(format!("directed edge ({a},{b}) used {count} times"));
            }
            if !directed.contains_key(&(b, a)) {
                diag.push(format!(
                    "directed edge ({a},{b}) has no reversed partner (orientation violation)"
                ));
            }
        }

        // Vertex must sit on at least 3 faces.
        for (vi, fs) in self.vertex_faces().iter().enumerate() {
            if fs.len() < 3 {
                diag.push(format!("vertex {vi} lies on only {} faces", fs.len()));
            }
        }

        // No vertex strictly inside another face's edge segment.
        for &(a, b) in &self.edges {
            let pa = &self.vertices[a];
            let pb = &self.vertices[b];
            let d = pb - pa;
            let len2 = d.norm2();
            for (vi, p) in self.vertices.iter().enumerate() {
                if vi == a || vi == b {
                    continue;
                }
                let w = p - pa;
                if w.cross(&d).is_zero() {
                    let t = w.dot(&d);
                    if t.is_positive() && t < len2 {
                        diag.push(format!(
                            "vertex {vi} lies in the relative interior of edge ({a},{b})"
                        ));
                    }
                }
            }
        }

        if (f + v) as i64 - e as i64 != 2 {
            diag.push(format!("euler identity violated: f+v-e = {}", (f + v) as i64 - e as i64));
        }

        diag
    }

    /// Translated copy.
    pub fn translate(&self, t: &Vec3) -> Polyhedron {
        Polyhedron {
            vertices: self.vertices.iter().map(|p| p + t).collect(),
            faces: self.faces.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Copy with every coordinate snapped to denominators at most
    /// `max_denom` (combinatorics not preserved automatically; callers
    /// re-hull and re-verify).
    pub fn limit_denominators(&self, max_denom: u64) -> Vec<Vec3> {
        self.vertices
            .iter()
            .map(|p| p.map(|c| scalar::limit_denominator(c, max_denom)))
            .collect()
    }
}

pub(crate) fn derive_edges(faces: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut set: Vec<(usize, usize)> = Vec::new();
    for cycle in faces {
        for k in 0..cycle.len() {
            let a = cycle[k];
            let b = cycle[(k + 1) % cycle.len()];
            set.push((a.min(b), a.max(b)));
        }
    }
    set.sort_unstable();
    set.dedup();
    set
}

/// Exact volume and centroid by fanning signed tetrahedra from the first
/// vertex over the triangulated faces; the apex choice keeps the rationals
/// small and the result is apex-independent.
pub fn mass_properties(p: &Polyhedron) -> Result<MassProperties> {
    let diag = p.validate();
    if !diag.ok() {
        return Err(Error::NotConvex(
            diag.violations
                .iter()
                .map(|v| v.what.clone())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    Ok(mass_properties_unchecked(p, 0))
}

/// Same computation without validation, fanning from `apex_index`.
pub fn mass_properties_unchecked(p: &Polyhedron, apex_index: usize) -> MassProperties {
    let apex = &p.vertices[apex_index];
    let six = scalar::int(6);
    let four = scalar::int(4);
    let mut volume = Scalar::zero();
    let mut weighted = Vec3::zero();
    for cycle in &p.faces {
        let base = &p.vertices[cycle[0]];
        for k in 1..cycle.len() - 1 {
            let q = &p.vertices[cycle[k]];
            let r = &p.vertices[cycle[k + 1]];
            let u = base - apex;
            let v = q - apex;
            let w = r - apex;
            let six_vol = u.cross(&v).dot(&w);
            if six_vol.is_zero() {
                continue;
            }
            let tet_vol = &six_vol / &six;
            let tet_centroid = &(&(apex + base) + &(q + r)) * &(Scalar::new(1.into(), 1.into()) / &four);
            weighted = &weighted + &tet_centroid.scale(&tet_vol);
            volume = &volume + &tet_vol;
        }
    }
    let centroid = weighted.scale(&(Scalar::new(1.into(), 1.into()) / &volume));
    MassProperties { volume, centroid }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::hull_from_points;
    use crate::scalar::{int, ratio};

    pub(crate) fn unit_cube() -> Polyhedron {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(Vec3::from_ints(x, y, z));
                }
            }
        }
        hull_from_points(&pts).unwrap()
    }

    fn corner_tetra() -> Polyhedron {
        hull_from_points(&[
            Vec3::zero(),
            Vec3::from_ints(1, 0, 0),
            Vec3::from_ints(0, 1, 0),
            Vec3::from_ints(0, 0, 1),
        ])
        .unwrap()
    }

    #[test]
    fn cube_counts_and_euler() {
        let c = unit_cube();
        assert_eq!(c.face_count(), 6);
        assert_eq!(c.vertex_count(), 8);
        assert_eq!(c.edge_count(), 12);
        assert!(c.validate().ok());
    }

    #[test]
    fn reversed_face_reported() {
        let mut c = unit_cube();
        c.faces[0].reverse();
        let diag = c.validate();
        assert!(!diag.ok());
        assert!(diag
            .violations
            .iter()
            .any(|v| v.what.contains("orientation") || v.what.contains("ccw")));
    }

    #[test]
    fn cube_mass_properties() {
        let c = unit_cube();
        let mp = mass_properties(&c).unwrap();
        assert_eq!(mp.volume, int(1));
        assert_eq!(
            mp.centroid,
            Vec3::new(ratio(1, 2), ratio(1, 2), ratio(1, 2))
        );
    }

    #[test]
    fn tetra_mass_properties() {
        let t = corner_tetra();
        let mp = mass_properties(&t).unwrap();
        assert_eq!(mp.volume, ratio(1, 6));
        assert_eq!(
            mp.centroid,
            Vec3::new(ratio(1, 4), ratio(1, 4), ratio(1, 4))
        );
    }

    #[test]
    fn volume_apex_independent() {
        let c = unit_cube();
        let a = mass_properties_unchecked(&c, 0);
        for apex in 1..c.vertex_count() {
            let b = mass_properties_unchecked(&c, apex);
            assert_eq!(a.volume, b.volume);
            assert_eq!(a.centroid, b.centroid);
        }
    }

    #[test]
    fn translation_equivariance() {
        let t = corner_tetra();
        let shift = Vec3::from_ints(7, -3, 5);
        let moved = t.translate(&shift);
        let a = mass_properties(&t).unwrap();
        let b = mass_properties(&moved).unwrap();
        assert_eq!(a.volume, b.volume);
        assert_eq!(&a.centroid + &shift, b.centroid);
    }
}
