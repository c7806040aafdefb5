//! Witness constructions: catalog solids, pyramids, local manipulations,
//! the spiral monostatic family, and the class router that picks a chain
//! for every supported equilibrium class.

pub mod catalog;
pub mod conway;
pub mod manipulate;
pub mod recipe;
pub mod trig;
pub mod verify;

pub use catalog::{catalog, pyramid, regular_tetrahedron, square_pyramid};
pub use conway::{conway_solid, mono_unstable_pyramid, ConwayOutput, ConwayParams};
pub use manipulate::{
    displace_vertex, erect_tetrahedron, face_truncate, truncate_vertex, vertex_build, StepOutcome,
};
pub use recipe::{BaseSolid, Recipe, Step, StepKind};

use crate::complexity::is_polyhedral_pair;
use crate::equilibria::{analyze, EquilibriumKind, EquilibriumReport};
use crate::error::{Error, Result};
use crate::floatgeom::{recenter_vertex, FloatPolyhedron};
use crate::polar::polar_dual;
use crate::polyhedron::{mass_properties_unchecked, Polyhedron};
use crate::scalar::{int, ratio};
use crate::search::SearchParams;
use crate::vec3::Vec3;

/// Builds a witness polyhedron in class (S,U) together with the recipe
/// that replays it. Supported: S,U >= 2; (1,U) for U >= 4; (S,1) for
/// S >= 2 except the open cells (1,1), (1,2), (1,3).
pub fn build_class(s: u32, u: u32) -> Result<(Polyhedron, Recipe)> {
    build_class_with(s, u, &SearchParams::default())
}

pub fn build_class_with(s: u32, u: u32, sp: &SearchParams) -> Result<(Polyhedron, Recipe)> {
    if s >= 2 && u >= 2 {
        positive_class(s, u, sp)
    } else if s == 1 && u >= 4 {
        monostable_chain(u, sp)
    } else if u == 1 && s >= 2 {
        monounstable_chain(s, sp)
    } else {
        Err(Error::Unsupported(s, u))
    }
}

fn catalog_covers(s: u32, u: u32) -> bool {
    let small = (2..=4).contains(&s) && (2..=4).contains(&u);
    let penta = (s == 5 && (2..=4).contains(&u)) || (u == 5 && (2..=4).contains(&s));
    small || penta || (s, u) == (4, 4) || (s, u) == (5, 5)
}

/// Minimal base of class (S0,S0) for the pair chains.
fn minimal_base(s0: u32, sp: &SearchParams) -> Result<(Polyhedron, Recipe)> {
    let _ = sp;
    match s0 {
        4 | 5 => {
            let p = catalog::catalog(s0, s0)?;
            Ok((p, Recipe::new((s0, s0), BaseSolid::Catalog { s: s0, u: s0 })))
        }
        _ => {
            let (p, h) = catalog::pyramid_tuned(s0, &int(1))?;
            Ok((p, Recipe::new((s0, s0), BaseSolid::Pyramid { s: s0, h })))
        }
    }
}

fn positive_class(s: u32, u: u32, sp: &SearchParams) -> Result<(Polyhedron, Recipe)> {
    if is_polyhedral_pair(s as i64, u as i64) {
        if s == u {
            return minimal_base(s, sp).map(|(p, mut r)| {
                r.target = (s, u);
                (p, r)
            });
        }
        if s < u {
            // repeated vertex truncation from (2S-U, 2S-U)
            let k = u - s;
            let s0 = s - k;
            let (mut poly, mut recipe) = minimal_base(s0, sp)?;
            recipe.target = (s, u);
            for _ in 0..k {
                step_truncate(&mut poly, &mut recipe, sp)?;
            }
            return Ok((poly, recipe));
        }
        // repeated erection from (2U-S, 2U-S)
        let k = s - u;
        let s0 = u - k;
        let (mut poly, mut recipe) = minimal_base(s0, sp)?;
        recipe.target = (s, u);
        for _ in 0..k {
            step_erect(&mut poly, &mut recipe, sp)?;
        }
        return Ok((poly, recipe));
    }

    if catalog_covers(s, u) {
        let p = catalog::catalog(s, u)?;
        return Ok((p, Recipe::new((s, u), BaseSolid::Catalog { s, u })));
    }

    if u as i64 > 2 * s as i64 - 4 {
        // unstable-heavy: grow U two at a time by face truncation
        let (mut poly, mut recipe, u0) = if s <= 4 {
            let p = catalog::catalog(s, 4)?;
            (p, Recipe::new((s, u), BaseSolid::Catalog { s, u: 4 }), 4)
        } else {
            let u0 = 2 * s - 4;
            let (p, mut r) = positive_class(s, u0, sp)?;
            r.target = (s, u);
            (p, r, u0)
        };
        for _ in 0..(u - u0) / 2 {
            step_face_truncate(&mut poly, &mut recipe, false, sp)?;
        }
        if (u - u0) % 2 == 1 {
            step_face_truncate(&mut poly, &mut recipe, true, sp)?;
        }
        return Ok((poly, recipe));
    }

    // stable-heavy: grow S two at a time by vertex building
    let (mut poly, mut recipe, s0) = if u <= 4 {
        let s0 = if (s - 4) % 2 == 0 { 4 } else { 5 };
        let p = catalog::catalog(s0, u)?;
        (p, Recipe::new((s, u), BaseSolid::Catalog { s: s0, u }), s0)
    } else {
        let s0 = 2 * u - 4;
        let (p, mut r) = positive_class(s0, u, sp)?;
        r.target = (s, u);
        (p, r, s0)
    };
    let offset = s - s0;
    if offset % 2 == 1 {
        step_vertex_build(&mut poly, &mut recipe, true, sp)?;
    }
    for _ in 0..offset / 2 {
        step_vertex_build(&mut poly, &mut recipe, false, sp)?;
    }
    Ok((poly, recipe))
}

/// Default cap shear used when a chain needs the two short bottom edges
/// of the spiral prism to be non-parallel.
fn default_twist() -> crate::scalar::Scalar {
    ratio(1, 64)
}

fn monostable_chain(u: u32, sp: &SearchParams) -> Result<(Polyhedron, Recipe)> {
    let twist = if u == 4 { int(0) } else { default_twist() };
    let params = ConwayParams {
        cap_twist: twist.clone(),
        ..ConwayParams::default()
    };
    let out = conway::conway_solid(&params)?;
    let mut poly = out.polyhedron;
    let mut recipe = Recipe::new(
        (1, u),
        BaseSolid::Conway {
            m: params.m,
            r0: params.r0.clone(),
            a: params.a.clone(),
            b: params.b.clone(),
            twist,
        },
    );
    for _ in 0..(u - 4) / 2 {
        step_face_truncate(&mut poly, &mut recipe, false, sp)?;
    }
    if (u - 4) % 2 == 1 {
        step_face_truncate(&mut poly, &mut recipe, true, sp)?;
    }
    Ok((poly, recipe))
}

fn monounstable_chain(s: u32, sp: &SearchParams) -> Result<(Polyhedron, Recipe)> {
    let params = ConwayParams::default();
    let symmetric = s != 2;
    let (mut poly, apex) = conway::mono_unstable_pyramid(&params, symmetric)?;
    let mut recipe = Recipe::new(
        (s, 1),
        BaseSolid::MonoPyramid {
            m: params.m,
            r0: params.r0.clone(),
            apex,
        },
    );
    if s <= 3 {
        return Ok((poly, recipe));
    }

    // break the mirror symmetry: slide the unique unstable vertex within
    // the base plane so the chain sites stop being collinear
    let rep = analyze(&poly, None)?;
    let unstable = rep
        .vertices
        .iter()
        .position(|k| *k == EquilibriumKind::Unstable)
        .expect("class (3,1) has an unstable vertex");
    let offset = Vec3::new(ratio(1, 64), int(0), int(0));
    poly = manipulate::displace_vertex(&poly, unstable, &offset)?;
    recipe.push(
        StepKind::DisplaceVertex,
        vec![unstable],
        vec![offset.x.clone(), offset.y.clone(), offset.z.clone()],
    );

    if s % 2 == 0 {
        step_vertex_build(&mut poly, &mut recipe, true, sp)?;
    }
    let done = if s % 2 == 0 { 4 } else { 3 };
    for _ in 0..(s - done) / 2 {
        step_vertex_build(&mut poly, &mut recipe, false, sp)?;
    }
    Ok((poly, recipe))
}

// ---------------------------------------------------------------------
// chain steps with site scanning
// ---------------------------------------------------------------------

const SITE_TRY_LIMIT: usize = 40;

fn step_truncate(poly: &mut Polyhedron, recipe: &mut Recipe, sp: &SearchParams) -> Result<()> {
    let degrees = poly.vertex_degrees();
    let mut last: Option<Error> = None;
    for q in (0..poly.vertex_count()).filter(|&v| degrees[v] == 3).take(SITE_TRY_LIMIT) {
        match manipulate::truncate_vertex(poly, q, sp) {
            Ok(out) => {
                recipe.push(StepKind::TruncateVertex, vec![q], out.params);
                *poly = out.polyhedron;
                return Ok(());
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::BadSite("no degree-3 vertex".into())))
}

fn step_erect(poly: &mut Polyhedron, recipe: &mut Recipe, sp: &SearchParams) -> Result<()> {
    let rep = analyze(poly, None)?;
    let mut last: Option<Error> = None;
    let candidates: Vec<usize> = (0..poly.face_count())
        .filter(|&f| poly.faces[f].len() == 3 && rep.faces[f] == EquilibriumKind::Stable)
        .take(SITE_TRY_LIMIT)
        .collect();
    for f in candidates {
        match manipulate::erect_tetrahedron(poly, f, sp) {
            Ok(out) => {
                recipe.push(StepKind::ErectTetrahedron, vec![f], out.params);
                *poly = out.polyhedron;
                return Ok(());
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::BadSite("no stable triangular face".into())))
}

/// Candidate runs for face truncation: contiguous paths of length 3 or 4
/// whose interior is trivalent and whose end sites carry the right
/// equilibria.
fn face_truncate_runs(
    p: &Polyhedron,
    rep: &EquilibriumReport,
    one_sided: bool,
) -> Vec<(usize, Vec<usize>)> {
    let degrees = p.vertex_degrees();
    let edge_kind = |a: usize, b: usize| {
        let idx = p
            .edges
            .iter()
            .position(|&e| e == (a.min(b), a.max(b)))
            .expect("cycle edge");
        rep.edges[idx]
    };
    let mut out = Vec::new();
    for (f, cycle) in p.faces.iter().enumerate() {
        let m = cycle.len();
        for len in [3usize, 4] {
            if len > m {
                continue;
            }
            for start in 0..m {
                for dir in [1isize, -1] {
                    let run: Vec<usize> = (0..len)
                        .map(|k| {
                            let pos =
                                (start as isize + dir * k as isize).rem_euclid(m as isize);
                            cycle[pos as usize]
                        })
                        .collect();
                    if run[1..len - 1].iter().any(|&v| degrees[v] != 3) {
                        continue;
                    }
                    if edge_kind(run[len - 2], run[len - 1]) != EquilibriumKind::Saddle {
                        continue;
                    }
                    let front_ok = if one_sided {
                        rep.vertices[run[0]] == EquilibriumKind::Unstable
                    } else {
                        edge_kind(run[0], run[1]) == EquilibriumKind::Saddle
                    };
                    if front_ok {
                        out.push((f, run));
                    }
                }
            }
        }
    }
    out
}

fn step_face_truncate(
    poly: &mut Polyhedron,
    recipe: &mut Recipe,
    one_sided: bool,
    sp: &SearchParams,
) -> Result<()> {
    let rep = analyze(poly, None)?;
    let mut last: Option<Error> = None;
    for (f, run) in face_truncate_runs(poly, &rep, one_sided)
        .into_iter()
        .take(SITE_TRY_LIMIT)
    {
        match manipulate::face_truncate(poly, f, &run, one_sided, sp) {
            Ok(out) => {
                let mut site = vec![f];
                site.extend(&run);
                let kind = if one_sided {
                    StepKind::FaceTruncateOneSided
                } else {
                    StepKind::FaceTruncate
                };
                recipe.push(kind, site, out.params);
                *poly = out.polyhedron;
                return Ok(());
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::ConditionViolated("no admissible run".into())))
}

/// Candidate (face, corner, edge) triples for vertex building.
fn vertex_build_sites(
    p: &Polyhedron,
    rep: &EquilibriumReport,
) -> Vec<(usize, usize, (usize, usize))> {
    let degrees = p.vertex_degrees();
    let mut out = Vec::new();
    for (f, cycle) in p.faces.iter().enumerate() {
        if rep.faces[f] != EquilibriumKind::Stable {
            continue;
        }
        let m = cycle.len();
        for a in 0..m {
            for e in 0..m {
                if e == a || (e + 1) % m == a {
                    continue;
                }
                let edge = (cycle[e], cycle[(e + 1) % m]);
                let idx = p
                    .edges
                    .iter()
                    .position(|&x| x == (edge.0.min(edge.1), edge.0.max(edge.1)))
                    .expect("cycle edge");
                if rep.edges[idx] != EquilibriumKind::Saddle {
                    continue;
                }
                let ring_ok = cycle
                    .iter()
                    .enumerate()
                    .all(|(pos, &v)| v == cycle[a] || pos == (e + 1) % m || degrees[v] == 3);
                if ring_ok {
                    out.push((f, cycle[a], edge));
                }
            }
        }
    }
    out
}

fn step_vertex_build(
    poly: &mut Polyhedron,
    recipe: &mut Recipe,
    one_sided: bool,
    sp: &SearchParams,
) -> Result<()> {
    let rep = analyze(poly, None)?;
    let mut last: Option<Error> = None;
    for (f, q1, edge) in vertex_build_sites(poly, &rep)
        .into_iter()
        .take(SITE_TRY_LIMIT)
    {
        match manipulate::vertex_build(poly, f, q1, edge, one_sided, sp) {
            Ok(out) => {
                let kind = if one_sided {
                    StepKind::VertexBuildOneSided
                } else {
                    StepKind::VertexBuild
                };
                recipe.push(kind, vec![f, q1, edge.0, edge.1], out.params);
                *poly = out.polyhedron;
                return Ok(());
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::ConditionViolated("no admissible site".into())))
}

// ---------------------------------------------------------------------
// polar + recenter route (float-only, behind its own entry point)
// ---------------------------------------------------------------------

/// Alternative route for stable-heavy classes: build the swapped class
/// (U,S), polarize about its centroid so the equilibria swap roles, and
/// recenter the dual numerically. The result is verified by the float
/// backend only; the exact chains remain the default.
pub fn build_class_polar_route(s: u32, u: u32) -> Result<FloatPolyhedron> {
    let (witness, _) = build_class(u, s)?;
    let o = mass_properties_unchecked(&witness, 0).centroid;
    let dual = polar_dual(&witness, &o)?;
    let centered = dual.translate(&-&o);
    let fp = FloatPolyhedron::from_exact(&centered);

    // a degree-3 vertex whose faces are all triangles
    let degrees = centered.vertex_degrees();
    let vf = centered.vertex_faces();
    let q = (0..centered.vertex_count())
        .find(|&v| degrees[v] == 3 && vf[v].iter().all(|&f| centered.faces[f].len() == 3))
        .ok_or_else(|| Error::BadSite("dual has no trivalent simplicial vertex".into()))?;
    let recentered = recenter_vertex(&fp, q)?;

    let rep = recentered.classify_all([0.0; 3]);
    let s_got = rep
        .faces
        .iter()
        .filter(|k| **k == EquilibriumKind::Stable)
        .count() as u32;
    let u_got = rep
        .vertices
        .iter()
        .filter(|k| **k == EquilibriumKind::Unstable)
        .count() as u32;
    if (s_got, u_got) != (s, u) {
        return Err(Error::ClassNotAchieved {
            target_s: s,
            target_u: u,
            achieved: Some((s_got, u_got)),
            detail: "polar route verified by float backend".into(),
        });
    }
    Ok(recentered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::{mechanical_complexity, min_excess};

    #[test]
    fn pair_cells_by_chains() {
        for (s, u) in [(5u32, 6u32), (6, 5), (6, 7), (7, 6)] {
            let (p, recipe) = build_class(s, u).unwrap();
            let rep = analyze(&p, None).unwrap();
            assert_eq!(rep.class(), Some((s, u)), "({s},{u})");
            assert_eq!(mechanical_complexity(&p).unwrap(), 0);
            assert_eq!(recipe.target, (s, u));
        }
    }

    #[test]
    fn face_truncate_chain_cell() {
        let (p, _) = build_class(2, 6).unwrap();
        let rep = analyze(&p, None).unwrap();
        assert_eq!(rep.class(), Some((2, 6)));
        assert_eq!(
            mechanical_complexity(&p).unwrap(),
            2 * min_excess(2, 6)
        );
    }

    #[test]
    fn vertex_build_chain_cell() {
        let (p, _) = build_class(6, 2).unwrap();
        let rep = analyze(&p, None).unwrap();
        assert_eq!(rep.class(), Some((6, 2)));
        assert_eq!(
            mechanical_complexity(&p).unwrap(),
            2 * min_excess(6, 2)
        );
    }

    #[test]
    fn recipes_replay_identically() {
        let (p, recipe) = build_class(5, 6).unwrap();
        let replayed = recipe.replay().unwrap();
        assert_eq!(p, replayed);
        let text = recipe.to_text();
        let parsed = Recipe::parse(&text).unwrap();
        assert_eq!(parsed.replay().unwrap(), p);
    }

    #[test]
    fn unsupported_cells() {
        for (s, u) in [(1u32, 1u32), (1, 2), (1, 3)] {
            assert!(matches!(
                build_class(s, u).unwrap_err(),
                Error::Unsupported(_, _)
            ));
        }
    }
}
