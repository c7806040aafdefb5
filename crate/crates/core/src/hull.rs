//! Exact incremental 3D convex hull over rational coordinates.
//!
//! Points are deduplicated and inserted in lexicographic order, so every
//! inserted point is strictly outside the hull of its predecessors and
//! the construction is deterministic. After the triangulated hull is
//! built, coplanar triangles are merged into maximal facets: triangles
//! are grouped by canonical supporting plane, all input points lying
//! exactly on the plane are collected, and the facet cycle is the strict
//! 2D hull of that set. The output is canonicalized (vertices sorted
//! lexicographically, cycles rotated to their smallest index, faces
//! sorted) and verified against every input point before being returned.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedron::Polyhedron;
use crate::scalar::Scalar;
use crate::vec3::{orient3d, Vec3};

#[derive(Clone)]
struct Tri {
    v: [usize; 3],
    normal: Vec3,
    offset: Scalar,
}

impl Tri {
    fn new(points: &[Vec3], a: usize, b: usize, c: usize) -> Tri {
        let u = &points[b] - &points[a];
        let w = &points[c] - &points[a];
        let normal = u.cross(&w);
        let offset = normal.dot(&points[a]);
        Tri {
            v: [a, b, c],
            normal,
            offset,
        }
    }
}

/// Convex hull of the given points with coplanar faces merged.
///
/// Errors with [`Error::DegenerateInput`] when the points are affinely
/// dependent (fewer than 4 distinct points, collinear, or coplanar).
pub fn hull_from_points(points: &[Vec3]) -> Result<Polyhedron> {
    let mut pts: Vec<Vec3> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    if pts.len() < 4 {
        return Err(Error::DegenerateInput(format!(
            "{} distinct points; need at least 4",
            pts.len()
        )));
    }

    for shift in 0..pts.len() {
        if let Some(tris) = try_build(&pts, shift) {
            let poly = merge_and_canonicalize(&pts, &tris)?;
            verify_hull(&pts, &poly)?;
            return Ok(poly);
        }
    }
    Err(Error::NotConvex(
        "incremental hull failed for every insertion order".to_string(),
    ))
}

/// One incremental run with the point order rotated by `shift`. Returns
/// the live triangles, or None when a horizon failed to close (retried by
/// the caller with another order).
fn try_build(pts: &[Vec3], shift: usize) -> Option<Vec<Tri>> {
    let n = pts.len();
    let order: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();

    // Affinely independent seed: first two distinct, first non-collinear,
    // first non-coplanar point in the rotated order.
    let i0 = order[0];
    let i1 = order[1];
    let mut i2 = usize::MAX;
    for &k in &order[2..] {
        let u = &pts[i1] - &pts[i0];
        let w = &pts[k] - &pts[i0];
        if !u.cross(&w).is_zero() {
            i2 = k;
            break;
        }
    }
    if i2 == usize::MAX {
        return None;
    }
    let mut i3 = usize::MAX;
    for &k in &order[2..] {
        if k == i2 {
            continue;
        }
        if orient3d(&pts[i0], &pts[i1], &pts[i2], &pts[k]) != Ordering::Equal {
            i3 = k;
            break;
        }
    }
    if i3 == usize::MAX {
        return None;
    }

    let mut tris: Vec<Tri> = Vec::new();
    for (a, b, c, d) in [
        (i0, i1, i2, i3),
        (i0, i1, i3, i2),
        (i0, i2, i3, i1),
        (i1, i2, i3, i0),
    ] {
        // orient so the remaining seed point is strictly inside
        if orient3d(&pts[a], &pts[b], &pts[c], &pts[d]) == Ordering::Greater {
            tris.push(Tri::new(pts, a, c, b));
        } else {
            tris.push(Tri::new(pts, a, b, c));
        }
    }

    let seed = [i0, i1, i2, i3];
    for &p in &order {
        if seed.contains(&p) {
            continue;
        }
        if !insert_point(pts, &mut tris, p) {
            return None;
        }
    }
    Some(tris)
}

fn insert_point(pts: &[Vec3], tris: &mut Vec<Tri>, p: usize) -> bool {
    let point = &pts[p];
    let visible: Vec<usize> = (0..tris.len())
        .filter(|&t| tris[t].normal.dot(point) > tris[t].offset)
        .collect();
    if visible.is_empty() {
        return true; // inside or on the current hull; merging recovers boundary cases
    }
    let is_visible = {
        let mut flags = vec![false; tris.len()];
        for &t in &visible {
            flags[t] = true;
        }
        flags
    };

    // Map each directed edge to its triangle.
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (ti, tri) in tris.iter().enumerate() {
        for k in 0..3 {
            owner.insert((tri.v[k], tri.v[(k + 1) % 3]), ti);
        }
    }

    // Horizon: directed edges of visible triangles whose reverse belongs
    // to an invisible triangle.
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    let mut horizon_len = 0usize;
    for &t in &visible {
        let tri = &tris[t];
        for k in 0..3 {
            let a = tri.v[k];
            let b = tri.v[(k + 1) % 3];
            let rev_owner = owner.get(&(b, a)).copied();
            let outside_region = match rev_owner {
                Some(o) => !is_visible[o],
                None => true,
            };
            if outside_region {
                if next.insert(a, b).is_some() {
                    return false; // non-manifold horizon
                }
                horizon_len += 1;
            }
        }
    }
    if horizon_len == 0 {
        return false;
    }
    // The horizon must be one closed cycle.
    let start = *next.keys().next().unwrap();
    let mut cur = start;
    let mut walked = 0usize;
    loop {
        cur = match next.get(&cur) {
            Some(&n) => n,
            None => return false,
        };
        walked += 1;
        if cur == start {
            break;
        }
        if walked > horizon_len {
            return false;
        }
    }
    if walked != horizon_len {
        return false;
    }

    let mut kept: Vec<Tri> = tris
        .iter()
        .enumerate()
        .filter(|(ti, _)| !is_visible[*ti])
        .map(|(_, t)| t.clone())
        .collect();
    let mut cur = start;
    loop {
        let nxt = next[&cur];
        kept.push(Tri::new(pts, cur, nxt, p));
        cur = nxt;
        if cur == start {
            break;
        }
    }
    *tris = kept;
    true
}

/// Canonical integer key of a supporting plane, scaled by a positive
/// factor so the outward side is preserved.
fn plane_key(normal: &Vec3, offset: &Scalar) -> [BigInt; 4] {
    let comps = [&normal.x, &normal.y, &normal.z, offset];
    let mut den = BigInt::from(1);
    for c in comps {
        den = den.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = comps
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if !g.is_zero() {
        for i in &mut ints {
            *i = &*i / &g;
        }
    }
    [
        ints[0].clone(),
        ints[1].clone(),
        ints[2].clone(),
        ints[3].clone(),
    ]
}

fn merge_and_canonicalize(pts: &[Vec3], tris: &[Tri]) -> Result<Polyhedron> {
    // Group triangles by canonical plane.
    let mut groups: BTreeMap<[BigInt; 4], (Vec3, Scalar)> = BTreeMap::new();
    for tri in tris {
        groups
            .entry(plane_key(&tri.normal, &tri.offset))
            .or_insert_with(|| (tri.normal.clone(), tri.offset.clone()));
    }

    // Each facet is the strict 2D hull of every input point on its plane.
    let mut face_cycles: Vec<Vec<Vec3>> = Vec::new();
    for (normal, offset) in groups.values() {
        let on_plane: Vec<usize> = (0..pts.len())
            .filter(|&i| normal.dot(&pts[i]) == *offset)
            .collect();
        if on_plane.len() < 3 {
            return Err(Error::NotConvex("facet with fewer than 3 points".into()));
        }
        let cycle = hull2d_on_plane(pts, &on_plane, normal);
        face_cycles.push(cycle.into_iter().map(|i| pts[i].clone()).collect());
    }

    // Canonical vertex order: lexicographic over the points actually used.
    let mut verts: Vec<Vec3> = face_cycles.iter().flatten().cloned().collect();
    verts.sort_by(|a, b| a.lex_cmp(b));
    verts.dedup();
    let index_of = |p: &Vec3| verts.binary_search_by(|q| q.lex_cmp(p)).unwrap();

    let mut faces: Vec<Vec<usize>> = face_cycles
        .iter()
        .map(|cycle| {
            let idx: Vec<usize> = cycle.iter().map(|p| index_of(p)).collect();
            rotate_to_min(idx)
        })
        .collect();
    faces.sort();

    Ok(Polyhedron::from_parts(verts, faces))
}

fn rotate_to_min(cycle: Vec<usize>) -> Vec<usize> {
    let pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap();
    let mut out = Vec::with_capacity(cycle.len());
    out.extend_from_slice(&cycle[pos..]);
    out.extend_from_slice(&cycle[..pos]);
    out
}

/// Strict 2D hull of coplanar points, counterclockwise around `normal`.
fn hull2d_on_plane(pts: &[Vec3], idx: &[usize], normal: &Vec3) -> Vec<usize> {
    // Drop the axis with the largest |normal| component.
    let abs = [normal.x.abs(), normal.y.abs(), normal.z.abs()];
    let mut axis = 0;
    if abs[1] > abs[axis] {
        axis = 1;
    }
    if abs[2] > abs[axis] {
        axis = 2;
    }
    let (ua, wa) = ((axis + 1) % 3, (axis + 2) % 3);
    let coord = |i: usize, a: usize| -> &Scalar {
        let p = &pts[i];
        match a {
            0 => &p.x,
            1 => &p.y,
            _ => &p.z,
        }
    };

    let mut order: Vec<usize> = idx.to_vec();
    order.sort_by(|&a, &b| {
        coord(a, ua)
            .cmp(coord(b, ua))
            .then_with(|| coord(a, wa).cmp(coord(b, wa)))
    });
    order.dedup();

    let cross = |o: usize, a: usize, b: usize| -> Ordering {
        let t1 = (coord(a, ua) - coord(o, ua)) * (coord(b, wa) - coord(o, wa));
        let t2 = (coord(a, wa) - coord(o, wa)) * (coord(b, ua) - coord(o, ua));
        t1.cmp(&t2)
    };

    let mut lower: Vec<usize> = Vec::new();
    for &p in &order {
        while lower.len() >= 2
            && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) != Ordering::Greater
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &p in order.iter().rev() {
        while upper.len() >= 2
            && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) != Ordering::Greater
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let mut cycle = lower;
    cycle.extend(upper);

    // CCW in the projected (ua, wa) frame is CCW around +axis; flip when
    // the outward normal points the other way.
    let sign_positive = match axis {
        0 => normal.x.is_positive(),
        1 => normal.y.is_positive(),
        _ => normal.z.is_positive(),
    };
    if !sign_positive {
        cycle.reverse();
    }
    cycle
}

fn verify_hull(pts: &[Vec3], poly: &Polyhedron) -> Result<()> {
    let diag = poly.validate();
    if !diag.ok() {
        return Err(Error::NotConvex(format!(
            "hull postcondition failed: {}",
            diag.violations
                .iter()
                .map(|v| v.what.as_str())
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }
    for plane in poly.face_planes() {
        for p in pts {
            if plane.normal.dot(p) > plane.offset {
                return Err(Error::NotConvex(
                    "hull postcondition failed: input point outside".to_string(),
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse, ratio};

    fn v(x: &str, y: &str, z: &str) -> Vec3 {
        Vec3::new(parse(x).unwrap(), parse(y).unwrap(), parse(z).unwrap())
    }

    #[test]
    fn cube_with_interior_and_boundary_noise() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(Vec3::from_ints(x, y, z));
                }
            }
        }
        // interior point, face-interior point, edge-interior point
        pts.push(v("1/2", "1/2", "1/2"));
        pts.push(v("1/2", "1/2", "0"));
        pts.push(v("1/2", "0", "0"));
        let h = hull_from_points(&pts).unwrap();
        assert_eq!(h.vertex_count(), 8);
        assert_eq!(h.face_count(), 6);
        assert_eq!(h.edge_count(), 12);
        assert!(h.faces.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn tetrahedron_from_basis() {
        let h = hull_from_points(&[
            Vec3::zero(),
            Vec3::from_ints(1, 0, 0),
            Vec3::from_ints(0, 1, 0),
            Vec3::from_ints(0, 0, 1),
        ])
        .unwrap();
        assert_eq!(
            (h.face_count(), h.vertex_count(), h.edge_count()),
            (4, 4, 6)
        );
    }

    #[test]
    fn table_row_tetrahedron() {
        // A=(0,0,0), B=(1,0,0), C=(3.2,1.9,0), D=(-2.2,0.3,1.8)
        let pts = [
            Vec3::zero(),
            Vec3::from_ints(1, 0, 0),
            v("3.2", "1.9", "0"),
            v("-2.2", "0.3", "1.8"),
        ];
        let h = hull_from_points(&pts).unwrap();
        assert_eq!(
            (h.face_count(), h.vertex_count(), h.edge_count()),
            (4, 4, 6)
        );
        assert!(h.vertices.contains(&v("16/5", "19/10", "0")));
    }

    #[test]
    fn coplanar_input_rejected() {
        let err = hull_from_points(&[
            Vec3::zero(),
            Vec3::from_ints(1, 0, 0),
            Vec3::from_ints(0, 1, 0),
            Vec3::from_ints(1, 1, 0),
            Vec3::from_ints(2, 3, 0),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
    }

    #[test]
    fn octahedron_counts() {
        let pts = [
            Vec3::from_ints(1, 0, 0),
            Vec3::from_ints(-1, 0, 0),
            Vec3::from_ints(0, 1, 0),
            Vec3::from_ints(0, -1, 0),
            Vec3::from_ints(0, 0, 1),
            Vec3::from_ints(0, 0, -1),
        ];
        let h = hull_from_points(&pts).unwrap();
        assert_eq!(
            (h.face_count(), h.vertex_count(), h.edge_count()),
            (8, 6, 12)
        );
    }

    #[test]
    fn deterministic_output() {
        let pts = [
            v("1/3", "0", "0"),
            v("0", "1/7", "0"),
            v("0", "0", "1/2"),
            v("-1", "-1", "-1"),
            v("2/3", "1/5", "1/9"),
        ];
        let a = hull_from_points(&pts).unwrap();
        let mut rev = pts.to_vec();
        rev.reverse();
        let b = hull_from_points(&rev).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn squashed_lattice_hull_valid() {
        // many coplanar quadruples
        let mut pts = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..2 {
                    pts.push(Vec3::from_ints(x, y, z));
                }
            }
        }
        let h = hull_from_points(&pts).unwrap();
        assert_eq!(h.face_count(), 6);
        assert_eq!(h.vertex_count(), 8);
        assert!(h.validate().ok());
        assert_eq!(h.vertices[0], Vec3::from_ints(0, 0, 0));
        assert!(h.vertices.contains(&Vec3::from_ints(2, 2, 1)));
    }

    #[test]
    fn near_degenerate_sliver() {
        let pts = [
            Vec3::zero(),
            Vec3::from_ints(1, 0, 0),
            Vec3::from_ints(0, 1, 0),
            Vec3::new(ratio(1, 2), ratio(1, 2), ratio(1, 1_000_000)),
        ];
        let h = hull_from_points(&pts).unwrap();
        assert_eq!(h.face_count(), 4);
        assert!(h.validate().ok());
    }
}
