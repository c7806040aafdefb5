//! Local manipulations that move a witness between equilibrium classes.
//!
//! Four families, each a small exact cut or erection near chosen sites:
//!
//! * `truncate_vertex`: shave a degree-3 vertex of a minimal polyhedron,
//!   stepping (S,U) by (+1,+2) and (f,v) by (+1,+2).
//! * `erect_tetrahedron`: raise a shallow apex over a stable triangle,
//!   stepping (+2,+1) / (+2,+1).
//! * `face_truncate`: shave a run of trivalent vertices of one face with
//!   a plane through two points on its bounding saddle edges, stepping
//!   (0,+2) / (+1,+2), or (0,+1) / (+1,+1) in the one-sided variant that
//!   pivots on an unstable vertex.
//! * `vertex_build`: sink a shallow three-plane tent near a stable face's
//!   saddle edge, stepping (+2,0) / (+2,+1), or (+1,0) one-sided.
//!
//! "Sufficiently small" is realized as a geometric shrink schedule, and
//! the two-parameter cut placements as coarse-to-fine grid refinement;
//! every candidate is rebuilt by the exact hull and accepted only when
//! the exact classifier confirms the declared class and face/vertex
//! deltas. Accepted candidates have their coordinates snapped to bounded
//! denominators (re-verified) so chained steps stay fast.

use num_traits::{Signed, Zero};

use crate::equilibria::{analyze, EquilibriumKind, EquilibriumReport};
use crate::error::{Error, Result};
use crate::hull::hull_from_points;
use crate::polyhedron::{mass_properties_unchecked, Polyhedron};
use crate::scalar::{self, int, ratio, Scalar};
use crate::search::SearchParams;
use crate::vec3::Vec3;

use super::verify::{class_violations, ClassCheck};

/// A tuned construction step: the resulting solid plus the parameter
/// vector that reproduces it.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub polyhedron: Polyhedron,
    pub params: Vec<Scalar>,
}

fn measured_class(p: &Polyhedron) -> Result<(u32, u32, bool)> {
    let rep = analyze(p, None)?;
    let counts = rep.counts.ok_or(Error::DegenerateEquilibria)?;
    let minimal = counts.total() as i64 == p.total_k_faces();
    Ok((counts.stable, counts.unstable, minimal))
}

fn snap_cap(scale: &Scalar) -> u64 {
    let s = scalar::to_f64(scale).abs().max(1e-15);
    ((16_777_216.0 / s).max(16_777_216.0)).min(1.0e18) as u64
}

fn snap_point(v: &Vec3, cap: u64) -> Vec3 {
    v.map(|c| scalar::limit_denominator(c, cap))
}

/// Unique neighbor of `v` not on face `f`; requires degree 3.
fn off_face_neighbor(p: &Polyhedron, f: usize, v: usize) -> Result<usize> {
    let cycle = &p.faces[f];
    let pos = cycle
        .iter()
        .position(|&x| x == v)
        .ok_or_else(|| Error::BadSite(format!("vertex {v} not on face {f}")))?;
    let prev = cycle[(pos + cycle.len() - 1) % cycle.len()];
    let next = cycle[(pos + 1) % cycle.len()];
    let mut others: Vec<usize> = p
        .edges
        .iter()
        .filter_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
        .filter(|&w| w != prev && w != next)
        .collect();
    if others.len() != 1 {
        return Err(Error::ConditionViolated(format!(
            "vertex {v} is not trivalent (degree {})",
            others.len() + 2
        )));
    }
    Ok(others.pop().unwrap())
}

/// Intersection parameter of segment [a,b] with the plane n.x = d,
/// requiring a strictly on the positive side and b strictly on the
/// negative side.
fn cut_segment(a: &Vec3, b: &Vec3, n: &Vec3, d: &Scalar) -> Option<Vec3> {
    let sa = n.dot(a);
    let sb = n.dot(b);
    if !(sa > *d && sb < *d) {
        return None;
    }
    let tau = (&sa - d) / (&sa - &sb);
    Some(a + &(b - a).scale(&tau))
}

// ---------------------------------------------------------------------
// truncate_vertex
// ---------------------------------------------------------------------

/// Cuts the degree-3 vertex `q` of the minimal polyhedron `p` with a
/// plane orthogonal to centroid-q at relative depth delta, yielding a
/// minimal polyhedron one class step (+1,+2) away.
pub fn truncate_vertex(p: &Polyhedron, q: usize, sp: &SearchParams) -> Result<StepOutcome> {
    let (s, u, minimal) = measured_class(p)?;
    if !minimal {
        return Err(Error::ConditionViolated("input is not minimal".into()));
    }
    preflight_truncate(p, q)?;
    let mut best: Option<String> = None;
    for delta in sp.shrink_schedule() {
        match build_truncate(p, q, &delta, (s, u)) {
            Ok(poly) => {
                return Ok(StepOutcome {
                    polyhedron: poly,
                    params: vec![delta],
                })
            }
            Err(e) => {
                if best.is_none() {
                    best = Some(e.to_string());
                }
            }
        }
    }
    Err(Error::ClassNotAchieved {
        target_s: s + 1,
        target_u: u + 2,
        achieved: None,
        detail: best.unwrap_or_default(),
    })
}

/// Recipe replay entry: one fixed delta, must verify.
pub fn apply_truncate_vertex(p: &Polyhedron, q: usize, delta: &Scalar) -> Result<Polyhedron> {
    let (s, u, _) = measured_class(p)?;
    preflight_truncate(p, q)?;
    build_truncate(p, q, delta, (s, u))
}

fn preflight_truncate(p: &Polyhedron, q: usize) -> Result<()> {
    let deg = p.vertex_degrees()[q];
    if deg != 3 {
        return Err(Error::BadSite(format!("vertex {q} has degree {deg}")));
    }
    Ok(())
}

fn build_truncate(
    p: &Polyhedron,
    q: usize,
    delta: &Scalar,
    class: (u32, u32),
) -> Result<Polyhedron> {
    let c = mass_properties_unchecked(p, 0).centroid;
    let qp = &p.vertices[q];
    let d = &c - qp;
    let d2 = d.norm2();
    let neighbors: Vec<usize> = p
        .edges
        .iter()
        .filter_map(|&(a, b)| {
            if a == q {
                Some(b)
            } else if b == q {
                Some(a)
            } else {
                None
            }
        })
        .collect();

    let cap = snap_cap(delta);
    let mut pts: Vec<Vec3> = p
        .vertices
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != q)
        .map(|(_, v)| v.clone())
        .collect();
    for &w in &neighbors {
        let wd = (&p.vertices[w] - qp).dot(&d);
        if !wd.is_positive() {
            return Err(Error::ConditionViolated(
                "edge at the vertex does not point past the cutting plane".into(),
            ));
        }
        let t = &(delta * &d2) / &wd;
        if t >= int(1) {
            return Err(Error::ParamsOutOfWindow("cut reaches a neighbor".into()));
        }
        let cut = qp + &(&p.vertices[w] - qp).scale(&t);
        pts.push(snap_point(&cut, cap));
    }
    let poly = hull_from_points(&pts)?;
    let check = ClassCheck::exact(
        class.0 + 1,
        class.1 + 2,
        p.face_count() + 1,
        p.vertex_count() + 2,
    )
    .minimal();
    let violations = class_violations(&poly, &check);
    if violations.is_empty() {
        Ok(poly)
    } else {
        Err(Error::ClassNotAchieved {
            target_s: class.0 + 1,
            target_u: class.1 + 2,
            achieved: analyze(&poly, None).ok().and_then(|r| r.class()),
            detail: violations.join("; "),
        })
    }
}

// ---------------------------------------------------------------------
// erect_tetrahedron
// ---------------------------------------------------------------------

/// Erects a shallow apex over the stable triangular face `f` of the
/// minimal polyhedron `p`, stepping to the minimal class (+2,+1).
pub fn erect_tetrahedron(p: &Polyhedron, f: usize, sp: &SearchParams) -> Result<StepOutcome> {
    let (s, u, minimal) = measured_class(p)?;
    if !minimal {
        return Err(Error::ConditionViolated("input is not minimal".into()));
    }
    preflight_erect(p, f)?;

    let mut best: Option<String> = None;
    for eps in sp.shrink_schedule().into_iter().take(16) {
        let outcome = refine_1d(sp.grid_rounds, |alpha| {
            match build_erect(p, f, &eps, alpha, (s, u)) {
                Ok(poly) => (Vec::new(), Some(poly)),
                Err(e) => (vec![e.to_string()], None),
            }
        });
        match outcome {
            Ok((alpha, poly)) => {
                return Ok(StepOutcome {
                    polyhedron: poly,
                    params: vec![eps, alpha],
                })
            }
            Err(diag) => {
                if best.is_none() {
                    best = Some(diag);
                }
            }
        }
    }
    Err(Error::ClassNotAchieved {
        target_s: s + 2,
        target_u: u + 1,
        achieved: None,
        detail: best.unwrap_or_default(),
    })
}

pub fn apply_erect_tetrahedron(
    p: &Polyhedron,
    f: usize,
    eps: &Scalar,
    alpha: &Scalar,
) -> Result<Polyhedron> {
    let (s, u, _) = measured_class(p)?;
    preflight_erect(p, f)?;
    build_erect(p, f, eps, alpha, (s, u))
}

fn preflight_erect(p: &Polyhedron, f: usize) -> Result<()> {
    if p.faces[f].len() != 3 {
        return Err(Error::BadSite(format!("face {f} is not a triangle")));
    }
    let rep = analyze(p, None)?;
    if rep.faces[f] != EquilibriumKind::Stable {
        return Err(Error::BadSite(format!("face {f} carries no stable point")));
    }
    Ok(())
}

fn build_erect(
    p: &Polyhedron,
    f: usize,
    eps: &Scalar,
    alpha: &Scalar,
    class: (u32, u32),
) -> Result<Polyhedron> {
    let c = mass_properties_unchecked(p, 0).centroid;
    let plane = p.face_plane(f);
    let n = &plane.normal;
    let lambda = (&plane.offset - &n.dot(&c)) / n.norm2();
    let foot = &c + &n.scale(&lambda);
    let cycle = &p.faces[f];
    let third = ratio(1, 3);
    let mean = (&(&p.vertices[cycle[0]] + &p.vertices[cycle[1]]) + &p.vertices[cycle[2]])
        .scale(&third);
    let toward_center = &mean - &foot;
    let apex = &(&foot + &n.scale(eps)) + &toward_center.scale(alpha);

    let cap = snap_cap(eps);
    let mut pts = p.vertices.clone();
    pts.push(snap_point(&apex, cap));
    let poly = hull_from_points(&pts)?;
    let check = ClassCheck::exact(
        class.0 + 2,
        class.1 + 1,
        p.face_count() + 2,
        p.vertex_count() + 1,
    )
    .minimal();
    let mut violations = class_violations(&poly, &check);
    if !poly.faces.iter().any(|c| c.len() == 3) {
        violations.push("no triangular face in the result".into());
    }
    if violations.is_empty() {
        Ok(poly)
    } else {
        Err(Error::ClassNotAchieved {
            target_s: class.0 + 2,
            target_u: class.1 + 1,
            achieved: analyze(&poly, None).ok().and_then(|r| r.class()),
            detail: violations.join("; "),
        })
    }
}

// ---------------------------------------------------------------------
// face_truncate
// ---------------------------------------------------------------------

/// Checks that `run` is a contiguous path on face `f`'s cycle and that
/// the lemma conditions hold; returns the analysis report for reuse.
fn preflight_face_truncate(
    p: &Polyhedron,
    f: usize,
    run: &[usize],
    one_sided: bool,
) -> Result<EquilibriumReport> {
    let cycle = &p.faces[f];
    let m = cycle.len();
    if run.len() < 3 || run.len() > m {
        return Err(Error::BadSite(format!("run of length {}", run.len())));
    }
    let start = cycle
        .iter()
        .position(|&v| v == run[0])
        .ok_or_else(|| Error::BadSite("run does not start on the face".into()))?;
    let forward: Vec<usize> = (0..run.len()).map(|k| cycle[(start + k) % m]).collect();
    let backward: Vec<usize> = (0..run.len())
        .map(|k| cycle[(start + m - (k % m)) % m])
        .collect();
    if run != forward && run != backward {
        return Err(Error::BadSite("run is not contiguous on the face".into()));
    }

    let rep = analyze(p, None)?;
    let edge_index = |a: usize, b: usize| {
        p.edges
            .iter()
            .position(|&e| e == (a.min(b), a.max(b)))
            .expect("edge on face")
    };
    let e_b = edge_index(run[run.len() - 2], run[run.len() - 1]);
    if rep.edges[e_b] != EquilibriumKind::Saddle {
        return Err(Error::ConditionViolated(
            "(ii): far edge of the run carries no saddle".into(),
        ));
    }
    if one_sided {
        if rep.vertices[run[0]] != EquilibriumKind::Unstable {
            return Err(Error::ConditionViolated(
                "(ii): pivot vertex carries no unstable point".into(),
            ));
        }
    } else {
        let e_a = edge_index(run[0], run[1]);
        if rep.edges[e_a] != EquilibriumKind::Saddle {
            return Err(Error::ConditionViolated(
                "(ii): near edge of the run carries no saddle".into(),
            ));
        }
    }
    // (iii) trivalent interior vertices with an off-face edge each
    for &mid in &run[1..run.len() - 1] {
        off_face_neighbor(p, f, mid).map_err(|_| {
            Error::ConditionViolated(format!("(iii): run vertex {mid} is not trivalent"))
        })?;
    }
    // (i) the bounding edge lines must meet at a point farther from the
    // run start than from its second vertex
    let n = p.face_plane(f).normal;
    let a0 = &p.vertices[run[0]];
    let a1 = &p.vertices[run[1]];
    let b0 = &p.vertices[run[run.len() - 2]];
    let b1 = &p.vertices[run[run.len() - 1]];
    let d1 = a1 - a0;
    let d2 = b0 - b1;
    let denom = d1.cross(&d2).dot(&n);
    if denom.is_zero() {
        return Err(Error::ConditionViolated(
            "(i): bounding edge lines are parallel".into(),
        ));
    }
    // q = a0 + xi*d1 with xi = ((b1-a0) x d2 . n) / (d1 x d2 . n)
    let xi = (b1 - a0).cross(&d2).dot(&n) / denom;
    // |q - a0| > |q - a1|  <=>  |xi| > |xi - 1|
    let q_minus_a0 = xi.abs();
    let q_minus_a1 = (&xi - &int(1)).abs();
    if q_minus_a0 <= q_minus_a1 {
        return Err(Error::ConditionViolated(
            "(i): line intersection is on the wrong side".into(),
        ));
    }
    Ok(rep)
}

/// Shaves the interior vertices of `run` on face `f` with a shallow
/// oblique plane through a point on each bounding edge (through the run's
/// first vertex itself in the one-sided variant).
pub fn face_truncate(
    p: &Polyhedron,
    f: usize,
    run: &[usize],
    one_sided: bool,
    sp: &SearchParams,
) -> Result<StepOutcome> {
    let (s, u, _) = measured_class(p)?;
    preflight_face_truncate(p, f, run, one_sided)?;
    let du = if one_sided { 1 } else { 2 };

    let mut best: Option<String> = None;
    for lam in sp.shrink_schedule().into_iter().take(16) {
        let outcome = if one_sided {
            refine_1d(sp.grid_rounds, |t| {
                match build_face_truncate(p, f, run, one_sided, &lam, &int(0), t, (s, u)) {
                    Ok(poly) => (Vec::new(), Some(poly)),
                    Err(e) => (vec![e.to_string()], None),
                }
            })
            .map(|(t, poly)| (vec![lam.clone(), int(0), t], poly))
        } else {
            refine_2d(sp.grid_rounds, |sv, tv| {
                match build_face_truncate(p, f, run, one_sided, &lam, sv, tv, (s, u)) {
                    Ok(poly) => (Vec::new(), Some(poly)),
                    Err(e) => (vec![e.to_string()], None),
                }
            })
            .map(|((sv, tv), poly)| (vec![lam.clone(), sv, tv], poly))
        };
        match outcome {
            Ok((params, polyhedron)) => return Ok(StepOutcome { polyhedron, params }),
            Err(diag) => {
                if best.is_none() {
                    best = Some(diag);
                }
            }
        }
    }
    Err(Error::ClassNotAchieved {
        target_s: s,
        target_u: u + du,
        achieved: None,
        detail: best.unwrap_or_default(),
    })
}

pub fn apply_face_truncate(
    p: &Polyhedron,
    f: usize,
    run: &[usize],
    one_sided: bool,
    lam: &Scalar,
    sv: &Scalar,
    tv: &Scalar,
) -> Result<Polyhedron> {
    let (s, u, _) = measured_class(p)?;
    preflight_face_truncate(p, f, run, one_sided)?;
    build_face_truncate(p, f, run, one_sided, lam, sv, tv, (s, u))
}

#[allow(clippy::too_many_arguments)]
fn build_face_truncate(
    p: &Polyhedron,
    f: usize,
    run: &[usize],
    one_sided: bool,
    lam: &Scalar,
    sv: &Scalar,
    tv: &Scalar,
    class: (u32, u32),
) -> Result<Polyhedron> {
    let j = run.len();
    let q1 = &p.vertices[run[0]];
    let q2 = &p.vertices[run[1]];
    let qjm1 = &p.vertices[run[j - 2]];
    let qj = &p.vertices[run[j - 1]];

    let y_a = if one_sided {
        q1.clone()
    } else {
        q1 + &(q2 - q1).scale(sv)
    };
    let y_b = qj + &(qjm1 - qj).scale(tv);

    let n_f = p.face_plane(f).normal;
    let mut w = (&y_b - &y_a).cross(&n_f);
    let toward_mid = w.dot(&(&p.vertices[run[1]] - &y_a));
    if toward_mid.is_negative() {
        w = -&w;
    } else if toward_mid.is_zero() {
        return Err(Error::ParamsOutOfWindow("cut line passes through the run".into()));
    }
    // normalize the tilt so lam measures dip per unit of in-face offset
    let n_cut = &n_f.scale(&w.norm2()) + &w.scale(&(lam * &n_f.norm2()));
    let d_cut = n_cut.dot(&y_a);

    // the removed side holds the run's interior vertices and nothing else
    let mids = &run[1..j - 1];
    for (vi, v) in p.vertices.iter().enumerate() {
        let side = n_cut.dot(v);
        let is_mid = mids.contains(&vi);
        if is_mid && side <= d_cut {
            return Err(Error::ParamsOutOfWindow("run vertex not separated".into()));
        }
        if !is_mid && side >= d_cut {
            return Err(Error::ParamsOutOfWindow(format!(
                "vertex {vi} clipped by the cut"
            )));
        }
    }

    let cap = snap_cap(&(lam * sv.min(tv).max(&ratio(1, 8)).clone()));
    let mut pts: Vec<Vec3> = p
        .vertices
        .iter()
        .enumerate()
        .filter(|(i, _)| !mids.contains(i))
        .map(|(_, v)| v.clone())
        .collect();
    if !one_sided {
        pts.push(snap_point(&y_a, cap));
    }
    pts.push(snap_point(&y_b, cap));
    for &mid in mids {
        let w_m = off_face_neighbor(p, f, mid)?;
        let cut = cut_segment(&p.vertices[mid], &p.vertices[w_m], &n_cut, &d_cut)
            .ok_or_else(|| Error::ParamsOutOfWindow("cut misses a lateral edge".into()))?;
        pts.push(snap_point(&cut, cap));
    }

    let poly = hull_from_points(&pts)?;
    let (dv, du) = if one_sided { (1, 1) } else { (2, 2) };
    let check = ClassCheck::exact(
        class.0,
        class.1 + du,
        p.face_count() + 1,
        p.vertex_count() + dv,
    );
    let violations = class_violations(&poly, &check);
    if violations.is_empty() {
        Ok(poly)
    } else {
        Err(Error::ClassNotAchieved {
            target_s: class.0,
            target_u: class.1 + du,
            achieved: analyze(&poly, None).ok().and_then(|r| r.class()),
            detail: violations.join("; "),
        })
    }
}

// ---------------------------------------------------------------------
// vertex_build
// ---------------------------------------------------------------------

fn preflight_vertex_build(
    p: &Polyhedron,
    f: usize,
    q1: usize,
    edge: (usize, usize),
) -> Result<()> {
    let cycle = &p.faces[f];
    let m = cycle.len();
    let a = cycle
        .iter()
        .position(|&v| v == q1)
        .ok_or_else(|| Error::BadSite("corner not on face".into()))?;
    let e = cycle
        .iter()
        .position(|&v| v == edge.0)
        .ok_or_else(|| Error::BadSite("edge start not on face".into()))?;
    if cycle[(e + 1) % m] != edge.1 {
        return Err(Error::BadSite("edge is not a forward cycle edge".into()));
    }
    if e == a || (e + 1) % m == a {
        return Err(Error::BadSite("edge is adjacent to the corner".into()));
    }

    let rep = analyze(p, None)?;
    if rep.faces[f] != EquilibriumKind::Stable {
        return Err(Error::ConditionViolated("(i): face carries no stable point".into()));
    }
    let ei = p
        .edges
        .iter()
        .position(|&x| x == (edge.0.min(edge.1), edge.0.max(edge.1)))
        .expect("edge exists");
    if rep.edges[ei] != EquilibriumKind::Saddle {
        return Err(Error::ConditionViolated("(ii): edge carries no saddle".into()));
    }

    // (iii): everything on the ring except q1 and the edge's far endpoint
    let degrees = p.vertex_degrees();
    for (pos, &v) in cycle.iter().enumerate() {
        if v == q1 || pos == (e + 1) % m {
            continue;
        }
        if degrees[v] != 3 {
            return Err(Error::ConditionViolated(format!(
                "(iii): ring vertex {v} has degree {}",
                degrees[v]
            )));
        }
    }

    // (i): the stable foot strictly inside the triangle (q1, edge.0, edge.1)
    let c = mass_properties_unchecked(p, 0).centroid;
    let plane = p.face_plane(f);
    let n = &plane.normal;
    let lambda = (&plane.offset - &n.dot(&c)) / n.norm2();
    let foot = &c + &n.scale(&lambda);
    let ta = &p.vertices[q1];
    let tb = &p.vertices[edge.0];
    let tc = &p.vertices[edge.1];
    let s1 = (tb - ta).cross(&(&foot - ta)).dot(n);
    let s2 = (tc - tb).cross(&(&foot - tb)).dot(n);
    let s3 = (ta - tc).cross(&(&foot - tc)).dot(n);
    let all_pos = s1.is_positive() && s2.is_positive() && s3.is_positive();
    let all_neg = s1.is_negative() && s2.is_negative() && s3.is_negative();
    if !(all_pos || all_neg) {
        return Err(Error::ConditionViolated(
            "(i): stable foot is outside the chosen triangle".into(),
        ));
    }

    // (iv): corner, face foot and edge foot not collinear
    let d = tc - tb;
    let t_num = (&c - tb).dot(&d);
    let e_foot = tb + &d.scale(&(&t_num / &d.norm2()));
    if (&foot - ta).cross(&(&e_foot - ta)).is_zero() {
        return Err(Error::ConditionViolated(
            "(iv): corner, face foot and edge foot are collinear".into(),
        ));
    }
    Ok(())
}

/// Sinks a shallow tent of three planes through the corner `q1` and the
/// saddle edge of face `f`, adding one vertex and two faces and stepping
/// the class by (+2,0), or (+1,0) one-sided.
pub fn vertex_build(
    p: &Polyhedron,
    f: usize,
    q1: usize,
    edge: (usize, usize),
    one_sided: bool,
    sp: &SearchParams,
) -> Result<StepOutcome> {
    let (s, u, _) = measured_class(p)?;
    preflight_vertex_build(p, f, q1, edge)?;
    let ds = if one_sided { 1 } else { 2 };

    let mut best: Option<String> = None;
    for depth in sp.shrink_schedule().into_iter().take(16) {
        let outcome = refine_2d(sp.grid_rounds, |uv, tv| {
            match build_vertex_build(p, f, q1, edge, one_sided, &depth, uv, tv, (s, u)) {
                Ok(poly) => (Vec::new(), Some(poly)),
                Err(e) => (vec![e.to_string()], None),
            }
        });
        match outcome {
            Ok(((uv, tv), polyhedron)) => {
                return Ok(StepOutcome {
                    polyhedron,
                    params: vec![depth, uv, tv],
                })
            }
            Err(diag) => {
                if best.is_none() {
                    best = Some(diag);
                }
            }
        }
    }
    Err(Error::ClassNotAchieved {
        target_s: s + ds,
        target_u: u,
        achieved: None,
        detail: best.unwrap_or_default(),
    })
}

#[allow(clippy::too_many_arguments)]
pub fn apply_vertex_build(
    p: &Polyhedron,
    f: usize,
    q1: usize,
    edge: (usize, usize),
    one_sided: bool,
    depth: &Scalar,
    uv: &Scalar,
    tv: &Scalar,
) -> Result<Polyhedron> {
    let (s, u, _) = measured_class(p)?;
    preflight_vertex_build(p, f, q1, edge)?;
    build_vertex_build(p, f, q1, edge, one_sided, depth, uv, tv, (s, u))
}

#[allow(clippy::too_many_arguments)]
fn build_vertex_build(
    p: &Polyhedron,
    f: usize,
    q1: usize,
    edge: (usize, usize),
    one_sided: bool,
    depth: &Scalar,
    uv: &Scalar,
    tv: &Scalar,
    class: (u32, u32),
) -> Result<Polyhedron> {
    let cycle = &p.faces[f];
    let m = cycle.len();
    let a = cycle.iter().position(|&v| v == q1).unwrap();
    let e = cycle.iter().position(|&v| v == edge.0).unwrap();

    let q1p = &p.vertices[q1];
    let qep = &p.vertices[edge.0];
    let qe1p = &p.vertices[edge.1];
    let n_f = p.face_plane(f).normal;

    // apex: aim at a point of the saddle edge, stop just short of it,
    // then sink into the solid
    let aim = qep + &(qe1p - qep).scale(uv);
    let t = &ratio(3, 4) + &(tv * &ratio(6, 25)); // in (3/4, 0.99)
    let in_plane = q1p + &(&aim - q1p).scale(&t);
    let apex_exact = &in_plane - &n_f.scale(&(depth * &(&int(1) / &n_f.norm2())));
    let cap = snap_cap(depth);
    let apex = snap_point(&apex_exact, cap);

    // tent planes, oriented so the kept side (centroid) is negative
    let c = mass_properties_unchecked(p, 0).centroid;
    let mk_plane = |p1: &Vec3, p2: &Vec3| -> (Vec3, Scalar) {
        let mut n = (p2 - p1).cross(&(&apex - p1));
        let mut d = n.dot(p1);
        if n.dot(&c) > d {
            n = -&n;
            d = -&d;
        }
        (n, d)
    };
    let (n_a, d_a) = mk_plane(q1p, qep);
    let (n_b, d_b) = mk_plane(q1p, qe1p);

    // ring vertices strictly between q1 and the edge move onto the
    // corresponding tent plane along their off-face edges
    let mut pts: Vec<Vec3> = Vec::with_capacity(p.vertex_count() + 1);
    let mut moved = vec![false; p.vertex_count()];
    let mut arc_a = Vec::new(); // positions a+1 .. e-? between corner and edge.0
    let mut arc_b = Vec::new(); // positions e+2 .. a-1 between edge.1 and corner
    {
        let mut k = (a + 1) % m;
        while k != e {
            arc_a.push(cycle[k]);
            k = (k + 1) % m;
        }
        let mut k = (e + 2) % m;
        while k != a {
            arc_b.push(cycle[k]);
            k = (k + 1) % m;
        }
    }
    for (arc, plane) in [(&arc_a, (&n_a, &d_a)), (&arc_b, (&n_b, &d_b))] {
        for &mid in arc.iter() {
            let w_m = off_face_neighbor(p, f, mid)?;
            let cut = cut_segment(&p.vertices[mid], &p.vertices[w_m], plane.0, plane.1)
                .ok_or_else(|| Error::ParamsOutOfWindow("tent misses a lateral edge".into()))?;
            pts.push(snap_point(&cut, cap));
            moved[mid] = true;
        }
    }
    for (vi, v) in p.vertices.iter().enumerate() {
        if !moved[vi] {
            // everything kept must be strictly on the kept side of all
            // three tent planes (the edge plane is checked implicitly by
            // the exact verification)
            pts.push(v.clone());
        }
    }
    pts.push(apex);

    let poly = hull_from_points(&pts)?;
    let ds = if one_sided { 1 } else { 2 };
    let check = ClassCheck::exact(
        class.0 + ds,
        class.1,
        p.face_count() + 2,
        p.vertex_count() + 1,
    );
    let violations = class_violations(&poly, &check);
    if violations.is_empty() {
        Ok(poly)
    } else {
        Err(Error::ClassNotAchieved {
            target_s: class.0 + ds,
            target_u: class.1,
            achieved: analyze(&poly, None).ok().and_then(|r| r.class()),
            detail: violations.join("; "),
        })
    }
}

// ---------------------------------------------------------------------
// displace_vertex (symmetry breaking)
// ---------------------------------------------------------------------

/// Moves one vertex by an exact offset and re-verifies that the class and
/// the combinatorial counts are unchanged. Used to break symmetries
/// before chain steps that need non-collinear sites.
pub fn displace_vertex(p: &Polyhedron, v: usize, offset: &Vec3) -> Result<Polyhedron> {
    let (s, u, _) = measured_class(p)?;
    let mut pts = p.vertices.clone();
    pts[v] = &pts[v] + offset;
    let poly = hull_from_points(&pts)?;
    let check = ClassCheck::exact(s, u, p.face_count(), p.vertex_count());
    let violations = class_violations(&poly, &check);
    if violations.is_empty() {
        Ok(poly)
    } else {
        Err(Error::ClassNotAchieved {
            target_s: s,
            target_u: u,
            achieved: analyze(&poly, None).ok().and_then(|r| r.class()),
            detail: violations.join("; "),
        })
    }
}

// ---------------------------------------------------------------------
// grid refinement drivers
// ---------------------------------------------------------------------

type Eval1 = (Vec<String>, Option<Polyhedron>);

/// 9-point refinement over (0,1): returns the first passing parameter,
/// or the best near-miss diagnostics.
fn refine_1d(
    rounds: u32,
    mut eval: impl FnMut(&Scalar) -> Eval1,
) -> std::result::Result<(Scalar, Polyhedron), String> {
    let mut center = ratio(1, 2);
    let mut half = ratio(1, 2);
    let mut best_diag = String::new();
    let mut best_score = usize::MAX;
    for _ in 0..rounds.max(1) {
        let lo = clamp_unit(&(&center - &half));
        let hi = clamp_unit(&(&center + &half));
        let width = &hi - &lo;
        let mut best_here = center.clone();
        for i in 0..9 {
            let x = &lo + &(&width * &ratio(i, 8));
            let (violations, poly) = eval(&x);
            if violations.is_empty() {
                return Ok((x, poly.expect("passing eval returns polyhedron")));
            }
            if violations.len() < best_score {
                best_score = violations.len();
                best_diag = violations.join("; ");
                best_here = x;
            }
        }
        center = best_here;
        half = &half * &ratio(1, 3);
    }
    Err(best_diag)
}

/// 9x9 coarse-to-fine refinement over (0,1)^2.
fn refine_2d(
    rounds: u32,
    mut eval: impl FnMut(&Scalar, &Scalar) -> Eval1,
) -> std::result::Result<((Scalar, Scalar), Polyhedron), String> {
    let mut center = (ratio(1, 2), ratio(1, 2));
    let mut half = ratio(1, 2);
    let mut best_diag = String::new();
    let mut best_score = usize::MAX;
    for _ in 0..rounds.max(1) {
        let slo = clamp_unit(&(&center.0 - &half));
        let shi = clamp_unit(&(&center.0 + &half));
        let tlo = clamp_unit(&(&center.1 - &half));
        let thi = clamp_unit(&(&center.1 + &half));
        let sw = &shi - &slo;
        let tw = &thi - &tlo;
        let mut best_here = center.clone();
        for i in 0..9 {
            for jj in 0..9 {
                let x = &slo + &(&sw * &ratio(i, 8));
                let y = &tlo + &(&tw * &ratio(jj, 8));
                let (violations, poly) = eval(&x, &y);
                if violations.is_empty() {
                    return Ok(((x, y), poly.expect("passing eval returns polyhedron")));
                }
                if violations.len() < best_score {
                    best_score = violations.len();
                    best_diag = violations.join("; ");
                    best_here = (x, y);
                }
            }
        }
        center = best_here;
        half = &half * &ratio(1, 3);
    }
    Err(best_diag)
}

fn clamp_unit(x: &Scalar) -> Scalar {
    let lo = ratio(1, 100);
    let hi = ratio(99, 100);
    if *x < lo {
        lo
    } else if *x > hi {
        hi
    } else {
        x.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::mechanical_complexity;
    use crate::constructions::catalog::{catalog, pyramid};

    fn first_degree3(p: &Polyhedron) -> usize {
        p.vertex_degrees().iter().position(|&d| d == 3).unwrap()
    }

    #[test]
    fn truncate_pyramid_base_vertex() {
        let p = pyramid(4, &int(1)).unwrap();
        let out = truncate_vertex(&p, first_degree3(&p), &SearchParams::default()).unwrap();
        let rep = analyze(&out.polyhedron, None).unwrap();
        assert_eq!(rep.class(), Some((5, 6)));
        assert_eq!(mechanical_complexity(&out.polyhedron).unwrap(), 0);
    }

    #[test]
    fn truncate_twice_reaches_6_8() {
        let p = pyramid(4, &int(1)).unwrap();
        let sp = SearchParams::default();
        let once = truncate_vertex(&p, first_degree3(&p), &sp).unwrap();
        let twice =
            truncate_vertex(&once.polyhedron, first_degree3(&once.polyhedron), &sp).unwrap();
        let rep = analyze(&twice.polyhedron, None).unwrap();
        assert_eq!(rep.class(), Some((6, 8)));
        assert_eq!(mechanical_complexity(&twice.polyhedron).unwrap(), 0);
    }

    #[test]
    fn truncate_rejects_high_degree_vertex() {
        let p = pyramid(6, &int(1)).unwrap();
        // apex of a pyramid over a pentagon has degree 5
        let apex = p
            .vertex_degrees()
            .iter()
            .position(|&d| d == 5)
            .expect("apex");
        assert!(matches!(
            truncate_vertex(&p, apex, &SearchParams::default()),
            Err(Error::BadSite(_))
        ));
    }

    #[test]
    fn erect_on_pyramid_face() {
        let p = pyramid(4, &int(1)).unwrap();
        let out = erect_tetrahedron(&p, 0, &SearchParams::default()).unwrap();
        let rep = analyze(&out.polyhedron, None).unwrap();
        assert_eq!(rep.class(), Some((6, 5)));
        assert_eq!(mechanical_complexity(&out.polyhedron).unwrap(), 0);
    }

    #[test]
    fn replay_truncate_is_deterministic() {
        let p = pyramid(4, &int(1)).unwrap();
        let q = first_degree3(&p);
        let out = truncate_vertex(&p, q, &SearchParams::default()).unwrap();
        let replayed = apply_truncate_vertex(&p, q, &out.params[0]).unwrap();
        assert_eq!(out.polyhedron, replayed);
    }

    #[test]
    fn face_truncate_tetrahedron_2_4() {
        // catalog (2,4) has saddles on AB and BD among others; scan runs
        let p = catalog(2, 4).unwrap();
        let rep = analyze(&p, None).unwrap();
        let sp = SearchParams::default();
        let mut done = None;
        'outer: for f in 0..p.face_count() {
            let cycle = p.faces[f].clone();
            for start in 0..3 {
                let run = vec![
                    cycle[start % 3],
                    cycle[(start + 1) % 3],
                    cycle[(start + 2) % 3],
                ];
                if preflight_face_truncate(&p, f, &run, false).is_err() {
                    continue;
                }
                if let Ok(out) = face_truncate(&p, f, &run, false, &sp) {
                    done = Some(out);
                    break 'outer;
                }
            }
        }
        let out = done.expect("some run succeeds");
        let rep2 = analyze(&out.polyhedron, None).unwrap();
        assert_eq!(rep2.class(), Some((2, 6)));
        assert_eq!(out.polyhedron.face_count(), 5);
        assert_eq!(out.polyhedron.vertex_count(), 6);
        assert_eq!(mechanical_complexity(&out.polyhedron).unwrap(), 6);
        drop(rep);
    }

    #[test]
    fn displace_preserves_class() {
        let p = catalog(4, 4).unwrap();
        let moved = displace_vertex(
            &p,
            0,
            &Vec3::new(ratio(1, 100), ratio(1, 200), ratio(0, 1)),
        )
        .unwrap();
        let rep = analyze(&moved, None).unwrap();
        assert_eq!(rep.class(), Some((4, 4)));
    }
}
