//! Floating-point backend for irrational-coordinate inputs.
//!
//! The exact rational backend is the default and the arbiter everywhere;
//! this module exists only for solids that cannot be written with
//! rational coordinates (midscribed polyhedra) and for the quasi-Newton
//! vertex recentering, which is an inherently numeric iteration. All
//! comparisons here use the relative tolerance [`TOLERANCE`].

use crate::equilibria::EquilibriumKind;
use crate::error::{Error, Result};
use crate::polyhedron::Polyhedron;

/// Relative tolerance of the float backend.
pub const TOLERANCE: f64 = 1e-9;

type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: V3) -> V3 {
    scale(a, 1.0 / norm(a))
}

#[derive(Clone, Debug)]
pub struct FloatPolyhedron {
    pub vertices: Vec<V3>,
    pub faces: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl FloatPolyhedron {
    pub fn from_exact(p: &Polyhedron) -> Self {
        FloatPolyhedron {
            vertices: p.vertices.iter().map(|v| v.to_f64()).collect(),
            faces: p.faces.clone(),
            edges: p.edges.clone(),
        }
    }

    /// Cube with edge midpoints on the unit sphere (side sqrt(2)).
    pub fn midscribed_cube() -> Self {
        let h = (0.5f64).sqrt();
        let mut vertices = Vec::new();
        for x in [-h, h] {
            for y in [-h, h] {
                for z in [-h, h] {
                    vertices.push([x, y, z]);
                }
            }
        }
        // index (x*4 + y*2 + z) with 0=-h, 1=+h; faces ccw from outside
        let faces = vec![
            vec![0, 1, 3, 2], // x = -h
            vec![4, 6, 7, 5], // x = +h
            vec![0, 4, 5, 1], // y = -h
            vec![2, 3, 7, 6], // y = +h
            vec![0, 2, 6, 4], // z = -h
            vec![1, 5, 7, 3], // z = +h
        ];
        let edges = crate::polyhedron::derive_edges(&faces);
        FloatPolyhedron {
            vertices,
            faces,
            edges,
        }
    }

    /// Regular octahedron with edge midpoints on the unit sphere
    /// (vertices at distance sqrt(2)).
    pub fn midscribed_octahedron() -> Self {
        let r = (2.0f64).sqrt();
        let vertices = vec![
            [r, 0.0, 0.0],
            [-r, 0.0, 0.0],
            [0.0, r, 0.0],
            [0.0, -r, 0.0],
            [0.0, 0.0, r],
            [0.0, 0.0, -r],
        ];
        let faces = vec![
            vec![0, 2, 4],
            vec![2, 1, 4],
            vec![1, 3, 4],
            vec![3, 0, 4],
            vec![2, 0, 5],
            vec![1, 2, 5],
            vec![3, 1, 5],
            vec![0, 3, 5],
        ];
        let edges = crate::polyhedron::derive_edges(&faces);
        FloatPolyhedron {
            vertices,
            faces,
            edges,
        }
    }

    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                best = best.max(norm(sub(self.vertices[i], self.vertices[j])));
            }
        }
        best
    }

    /// Outward unit normal and offset of face `f` (Newell).
    fn face_plane(&self, f: usize) -> (V3, f64) {
        let cycle = &self.faces[f];
        let mut n = [0.0; 3];
        for k in 0..cycle.len() {
            let a = self.vertices[cycle[k]];
            let b = self.vertices[cycle[(k + 1) % cycle.len()]];
            n = add(n, cross(a, b));
        }
        let n = normalize(n);
        (n, dot(n, self.vertices[cycle[0]]))
    }

    fn edge_faces(&self) -> Vec<[usize; 2]> {
        let mut map = std::collections::BTreeMap::new();
        for (fi, cycle) in self.faces.iter().enumerate() {
            for k in 0..cycle.len() {
                let a = cycle[k];
                let b = cycle[(k + 1) % cycle.len()];
                map.entry((a.min(b), a.max(b)))
                    .or_insert_with(Vec::new)
                    .push(fi);
            }
        }
        self.edges.iter().map(|e| [map[e][0], map[e][1]]).collect()
    }

    pub fn mass_properties(&self) -> (f64, V3) {
        let apex = self.vertices[0];
        let mut volume = 0.0;
        let mut weighted = [0.0; 3];
        for cycle in &self.faces {
            let base = self.vertices[cycle[0]];
            for k in 1..cycle.len() - 1 {
                let q = self.vertices[cycle[k]];
                let r = self.vertices[cycle[k + 1]];
                let v6 = dot(
                    cross(sub(base, apex), sub(q, apex)),
                    sub(r, apex),
                );
                let vol = v6 / 6.0;
                let centroid = scale(add(add(apex, base), add(q, r)), 0.25);
                weighted = add(weighted, scale(centroid, vol));
                volume += vol;
            }
        }
        (volume, scale(weighted, 1.0 / volume))
    }

    /// Float analogue of the exact classifier; margins are normalized to
    /// the solid's diameter and compared against [`TOLERANCE`].
    pub fn classify_all(&self, reference: V3) -> FloatReport {
        let d = self.diameter();
        let tol = TOLERANCE;
        let planes: Vec<(V3, f64)> = (0..self.faces.len()).map(|f| self.face_plane(f)).collect();
        let edge_faces = self.edge_faces();

        let faces: Vec<EquilibriumKind> = (0..self.faces.len())
            .map(|f| {
                let (n, off) = planes[f];
                let lambda = off - dot(n, reference);
                let foot = add(reference, scale(n, lambda));
                let cycle = &self.faces[f];
                let mut margin = f64::INFINITY;
                for k in 0..cycle.len() {
                    let a = self.vertices[cycle[k]];
                    let b = self.vertices[cycle[(k + 1) % cycle.len()]];
                    let e = normalize(sub(b, a));
                    let turn = dot(cross(e, sub(foot, a)), n) / d;
                    margin = margin.min(turn);
                }
                kind_from_margin(margin, tol, EquilibriumKind::Stable)
            })
            .collect();

        let edges: Vec<EquilibriumKind> = (0..self.edges.len())
            .map(|e| {
                let (ai, bi) = self.edges[e];
                let a = self.vertices[ai];
                let b = self.vertices[bi];
                let dir = sub(b, a);
                let len2 = dot(dir, dir);
                let t = dot(sub(reference, a), dir) / len2;
                let foot = add(a, scale(dir, t));
                let w = sub(foot, reference);
                let wn = norm(w);
                let [f1, f2] = edge_faces[e];
                let n1 = planes[f1].0;
                let n2 = planes[f2].0;
                let g12 = dot(n1, n2);
                let det = 1.0 - g12 * g12;
                let wu = scale(w, 1.0 / wn);
                let alpha = (dot(wu, n1) - dot(wu, n2) * g12) / det;
                let beta = (dot(wu, n2) - dot(wu, n1) * g12) / det;
                let margin = t.min(1.0 - t).min(alpha).min(beta);
                kind_from_margin(margin, tol, EquilibriumKind::Saddle)
            })
            .collect();

        let vertices: Vec<EquilibriumKind> = (0..self.vertices.len())
            .map(|vi| {
                let q = self.vertices[vi];
                let dir = normalize(sub(q, reference));
                let mut margin = f64::INFINITY;
                for (pi, p) in self.vertices.iter().enumerate() {
                    if pi == vi {
                        continue;
                    }
                    let m = -dot(normalize(sub(*p, q)), dir);
                    margin = margin.min(m);
                }
                kind_from_margin(margin, tol, EquilibriumKind::Unstable)
            })
            .collect();

        FloatReport {
            faces,
            edges,
            vertices,
        }
    }
}

fn kind_from_margin(margin: f64, tol: f64, positive: EquilibriumKind) -> EquilibriumKind {
    if margin > tol {
        positive
    } else if margin >= -tol {
        EquilibriumKind::Degenerate
    } else {
        EquilibriumKind::None
    }
}

#[derive(Clone, Debug)]
pub struct FloatReport {
    pub faces: Vec<EquilibriumKind>,
    pub edges: Vec<EquilibriumKind>,
    pub vertices: Vec<EquilibriumKind>,
}

#[derive(Clone, Debug)]
pub struct MidscribedReport {
    /// Worst |distance(o, edge) - 1| over all edges.
    pub tangency_residual: f64,
    /// Sites that fail to carry an equilibrium, as human-readable labels.
    pub failing_sites: Vec<String>,
}

impl MidscribedReport {
    pub fn pass(&self) -> bool {
        self.failing_sites.is_empty()
    }
}

/// Checks the midscribed-equilibrium property: with every edge tangent to
/// the unit sphere centered at the origin, every face, edge, and vertex
/// must carry an equilibrium point with respect to the origin.
pub fn verify_midscribed_equilibria(p: &FloatPolyhedron) -> Result<MidscribedReport> {
    let o = [0.0; 3];
    let mut worst = 0.0f64;
    for &(ai, bi) in &p.edges {
        let a = p.vertices[ai];
        let b = p.vertices[bi];
        let dir = sub(b, a);
        let t = -dot(a, dir) / dot(dir, dir);
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::NotMidscribed { residual: f64::NAN });
        }
        let foot = add(a, scale(dir, t));
        worst = worst.max((norm(foot) - 1.0).abs());
    }
    if worst > TOLERANCE {
        return Err(Error::NotMidscribed { residual: worst });
    }

    let rep = p.classify_all(o);
    let mut failing = Vec::new();
    for (i, k) in rep.faces.iter().enumerate() {
        if *k == EquilibriumKind::None {
            failing.push(format!("face {i}"));
        }
    }
    for (i, k) in rep.edges.iter().enumerate() {
        if *k == EquilibriumKind::None {
            failing.push(format!("edge {i}"));
        }
    }
    for (i, k) in rep.vertices.iter().enumerate() {
        if *k == EquilibriumKind::None {
            failing.push(format!("vertex {i}"));
        }
    }
    Ok(MidscribedReport {
        tangency_residual: worst,
        failing_sites: failing,
    })
}

/// Moves the degree-3 vertex `q` (all of whose faces must be triangles)
/// by a damped quasi-Newton iteration on x -> volume(x)*centroid(x) until
/// the centroid sits at the origin to 1e-12 of the diameter. The face
/// structure is kept; site classifications with respect to the origin are
/// re-checked afterwards.
pub fn recenter_vertex(p: &FloatPolyhedron, q: usize) -> Result<FloatPolyhedron> {
    let deg = p.edges.iter().filter(|&&(a, b)| a == q || b == q).count();
    if deg != 3 {
        return Err(Error::BadSite(format!("vertex {q} has degree {deg}, need 3")));
    }
    for (fi, cycle) in p.faces.iter().enumerate() {
        if cycle.contains(&q) && cycle.len() != 3 {
            return Err(Error::BadSite(format!(
                "face {fi} at vertex {q} is not a triangle"
            )));
        }
    }

    let before = p.classify_all([0.0; 3]);
    let diameter = p.diameter();
    let target = 1e-12 * diameter;
    let mut current = p.clone();

    let objective = |poly: &FloatPolyhedron| -> V3 {
        let (w, c) = poly.mass_properties();
        scale(c, w)
    };

    let mut best_norm = {
        let (_, c) = current.mass_properties();
        norm(c)
    };
    if best_norm <= target {
        return Ok(current);
    }

    let h = 1e-7 * diameter;
    for _ in 0..200 {
        let f0 = objective(&current);
        // numerical Jacobian of w*c with respect to the vertex position
        let mut jac = [[0.0f64; 3]; 3];
        for axis in 0..3 {
            let mut plus = current.clone();
            plus.vertices[q][axis] += h;
            let mut minus = current.clone();
            minus.vertices[q][axis] -= h;
            let fp = objective(&plus);
            let fm = objective(&minus);
            for row in 0..3 {
                jac[row][axis] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        let step = match solve3(jac, f0) {
            Some(s) => s,
            None => return Err(Error::NoConvergence),
        };

        let mut lambda = 1.0;
        let mut advanced = false;
        for _ in 0..30 {
            let mut trial = current.clone();
            trial.vertices[q] = sub(trial.vertices[q], scale(step, lambda));
            let (w, c) = trial.mass_properties();
            if w > 0.0 && norm(c) < best_norm {
                best_norm = norm(c);
                current = trial;
                advanced = true;
                break;
            }
            lambda *= 0.5;
        }
        if !advanced {
            return Err(Error::NoConvergence);
        }
        if best_norm <= target {
            let after = current.classify_all([0.0; 3]);
            let same = before.faces == after.faces
                && before.edges == after.edges
                && before.vertices == after.vertices;
            if !same {
                return Err(Error::ConditionViolated(
                    "site classification changed during recentering".to_string(),
                ));
            }
            return Ok(current);
        }
    }
    Err(Error::NoConvergence)
}

fn solve3(a: [[f64; 3]; 3], b: V3) -> Option<V3> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-300 {
        return None;
    }
    let inv_det = 1.0 / det;
    let x = b[0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (b[1] * a[2][2] - a[1][2] * b[2])
        + a[0][2] * (b[1] * a[2][1] - a[1][1] * b[2]);
    let y = a[0][0] * (b[1] * a[2][2] - a[1][2] * b[2])
        - b[0] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * b[2] - b[1] * a[2][0]);
    let z = a[0][0] * (a[1][1] * b[2] - b[1] * a[2][1])
        - a[0][1] * (a[1][0] * b[2] - b[1] * a[2][0])
        + b[0] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    Some([x * inv_det, y * inv_det, z * inv_det])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midscribed_cube_passes() {
        let cube = FloatPolyhedron::midscribed_cube();
        let rep = verify_midscribed_equilibria(&cube).unwrap();
        assert!(rep.tangency_residual < 1e-12);
        assert!(rep.pass());
    }

    #[test]
    fn midscribed_octahedron_passes() {
        let oct = FloatPolyhedron::midscribed_octahedron();
        let rep = verify_midscribed_equilibria(&oct).unwrap();
        assert!(rep.tangency_residual < 1e-12);
        assert!(rep.pass());
    }

    #[test]
    fn unit_cube_not_midscribed() {
        // cube at {0,1}^3: edges nowhere near tangent
        let mut cube = FloatPolyhedron::midscribed_cube();
        for v in &mut cube.vertices {
            for c in v.iter_mut() {
                *c = (*c > 0.0) as i32 as f64;
            }
        }
        assert!(matches!(
            verify_midscribed_equilibria(&cube),
            Err(Error::NotMidscribed { .. })
        ));
    }

    fn centered_tetra() -> FloatPolyhedron {
        // regular tetrahedron centered at the origin
        let pts = [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ];
        let faces = vec![
            vec![0, 2, 1],
            vec![0, 1, 3],
            vec![0, 3, 2],
            vec![1, 2, 3],
        ];
        let edges = crate::polyhedron::derive_edges(&faces);
        FloatPolyhedron {
            vertices: pts.to_vec(),
            faces,
            edges,
        }
    }

    #[test]
    fn recenter_fixed_point() {
        let t = centered_tetra();
        let out = recenter_vertex(&t, 0).unwrap();
        let (_, c) = out.mass_properties();
        assert!(norm(c) <= 1e-12 * out.diameter());
    }

    #[test]
    fn recenter_recovers_perturbation() {
        let mut t = centered_tetra();
        t.vertices[0][0] += 1e-3;
        t.vertices[0][1] -= 2e-3;
        let out = recenter_vertex(&t, 0).unwrap();
        let (_, c) = out.mass_properties();
        assert!(norm(c) <= 1e-12 * out.diameter());
    }

    #[test]
    fn recenter_rejects_high_degree() {
        let cube = FloatPolyhedron::midscribed_cube();
        // cube vertices have degree 3 but quad faces: must be rejected
        assert!(matches!(
            recenter_vertex(&cube, 0),
            Err(Error::BadSite(_))
        ));
    }
}
