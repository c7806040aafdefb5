//! The discretized-spiral monostatic solids: the oblique prism over the
//! spiral polygon (one stable equilibrium) and the flat spiral pyramids
//! (one unstable equilibrium).
//!
//! The spiral polygon is mirror-symmetric: two fans of m similar right
//! triangles around the center point, each with apex angle pi/m, the
//! smallest pair sharing the vertical cathetus above the bottom edge.
//! Its boundary has 2m-1 vertices; m = 9 gives the 17-gon. Radii grow by
//! sec(pi/m) per step, so after a full sweep the polygon closes with a
//! single top vertex on the axis.
//!
//! The prism is truncated by two oblique cap planes with half-width
//! a + b*(z_top - z): wide at the bottom, narrow at the top. Large b
//! drops the center of mass below the spiral center, which is exactly
//! the rolling condition r < r0, and stretches the solid so the cap feet
//! fall outside the caps. A small y-shear of the caps breaks the
//! parallelism of the two short bottom edges when chain steps need
//! non-parallel saddled edges.

use num_traits::{Signed, Zero};

use crate::equilibria::analyze;
use crate::error::{Error, Result};
use crate::hull::hull_from_points;
use crate::polyhedron::{mass_properties_unchecked, Polyhedron};
use crate::scalar::{self, int, ratio, Scalar};
use crate::vec3::Vec3;

use super::trig;
use super::verify::{class_violations, ClassCheck};

#[derive(Clone, Debug)]
pub struct ConwayParams {
    /// Triangles per spiral side; the base polygon has 2m-1 vertices.
    pub m: u32,
    /// Smallest cathetus (height of the center over the bottom edge).
    pub r0: Scalar,
    /// Cap half-width at the top vertex.
    pub a: Scalar,
    /// Cap half-width growth per unit of drop below the top vertex.
    pub b: Scalar,
    /// y-shear of the cap planes; zero keeps the mirror symmetry.
    pub cap_twist: Scalar,
    /// Apex override for the pyramid variants (tuned when absent).
    pub apex: Option<Vec3>,
}

impl Default for ConwayParams {
    fn default() -> Self {
        ConwayParams {
            m: 9,
            r0: int(1),
            a: ratio(4, 5),
            b: int(20),
            cap_twist: Scalar::zero(),
            apex: None,
        }
    }
}

/// Boundary of the spiral polygon, counterclockwise in (y,z), starting
/// at the bottom-left vertex. Coordinates are rationalized to 1e-7.
pub fn spiral_polygon(m: u32, r0: &Scalar) -> Vec<(Scalar, Scalar)> {
    assert!(m >= 2);
    let m = m as i64;
    let den = 2 * m; // angle step is one 2m-th of a turn
    let mut right: Vec<(Scalar, Scalar)> = Vec::new();
    for i in 1..=m {
        let (sin, cos) = trig::rational_sincos_turn(i, den);
        let radius = r0 * &trig::rational_sec_power(1, den, i as u32);
        let y = scalar::limit_denominator(&(&radius * &sin), 100_000_000);
        let z = scalar::limit_denominator(&(-&(&radius * &cos)), 100_000_000);
        right.push((y, z));
    }
    // right = a_1 .. a_m (a_m on the axis); mirror for the left side
    let mut cycle = Vec::with_capacity(2 * right.len() - 1);
    cycle.push((-&right[0].0, right[0].1.clone())); // a_1'
    for (y, z) in &right {
        cycle.push((y.clone(), z.clone())); // a_1 .. a_m
    }
    for (y, z) in right.iter().rev().skip(1) {
        if y.is_zero() {
            continue;
        }
        cycle.push((-y, z.clone())); // a_{m-1}' .. a_2'
    }
    cycle
}

/// Exact area moments (M0, M1, M2) of the polygon with respect to z,
/// fanned from the interior center point.
pub fn polygon_z_moments(cycle: &[(Scalar, Scalar)]) -> (Scalar, Scalar, Scalar) {
    let mut m0 = Scalar::zero();
    let mut m1 = Scalar::zero();
    let mut m2 = Scalar::zero();
    for k in 0..cycle.len() {
        let (py, pz) = &cycle[k];
        let (qy, qz) = &cycle[(k + 1) % cycle.len()];
        let area2 = py * qz - qy * pz;
        m0 = &m0 + &(&area2 / &int(2));
        m1 = &m1 + &(&(&area2 * &(pz + qz)) / &int(6));
        m2 = &m2 + &(&(&area2 * &(&(&(pz * pz) + &(qz * qz)) + &(pz * qz))) / &int(12));
    }
    (m0, m1, m2)
}

/// Center-of-mass height over the bottom edge of the uniform plate
/// (b = 0 limit); exceeds r0 for every m, so the plate is never
/// monostatic.
pub fn plate_height(m: u32, r0: &Scalar) -> (Scalar, Scalar) {
    let cycle = spiral_polygon(m, r0);
    let (m0, m1, _) = polygon_z_moments(&cycle);
    let z_bottom = cycle[0].1.clone();
    let zbar = &m1 / &m0;
    (&zbar - &z_bottom, -&z_bottom)
}

/// Center-of-mass height in the sharp-wedge limit (a = 0); drops below
/// r0 once m >= 9.
pub fn wedge_height(m: u32, r0: &Scalar) -> (Scalar, Scalar) {
    let cycle = spiral_polygon(m, r0);
    let (m0, m1, m2) = polygon_z_moments(&cycle);
    let z_top = cycle
        .iter()
        .map(|(_, z)| z.clone())
        .max()
        .expect("nonempty");
    let z_bottom = cycle[0].1.clone();
    let zbar = &(&(&z_top * &m1) - &m2) / &(&(&z_top * &m0) - &m1);
    (&zbar - &z_bottom, -&z_bottom)
}

#[derive(Clone, Debug)]
pub struct ConwayOutput {
    pub polyhedron: Polyhedron,
    /// Standing height of the center of mass.
    pub r: f64,
    /// Standing height of the spiral center.
    pub r0: f64,
    /// Exact comparison r < r0.
    pub r_below_r0: bool,
}

/// Builds the monostable oblique prism and verifies, exactly, membership
/// in class (1,4), the combinatorial class (2m+1, 4m-2), and the rolling
/// inequality r < r0 in the standing orientation.
pub fn conway_solid(params: &ConwayParams) -> Result<ConwayOutput> {
    if params.m < 9 {
        return Err(Error::ParamsOutOfWindow(format!(
            "m = {} < 9 cannot be monostatic",
            params.m
        )));
    }
    if !params.a.is_positive() || !params.b.is_positive() {
        return Err(Error::ParamsOutOfWindow("need a > 0 and b > 0".into()));
    }
    let cycle = spiral_polygon(params.m, &params.r0);
    let z_top = cycle
        .iter()
        .map(|(_, z)| z.clone())
        .max()
        .expect("nonempty");
    let h = &params.a + &(&params.b * &z_top);

    let mut pts = Vec::with_capacity(2 * cycle.len());
    for (y, z) in &cycle {
        // cap planes: x = +-(h - b z - twist*y)
        let half = &(&h - &(&params.b * z)) - &(&params.cap_twist * y);
        if !half.is_positive() {
            return Err(Error::ParamsOutOfWindow(
                "cap planes meet inside the prism".into(),
            ));
        }
        pts.push(Vec3::new(half.clone(), y.clone(), z.clone()));
        pts.push(Vec3::new(-&half, y.clone(), z.clone()));
    }
    let poly = hull_from_points(&pts)?;

    let m = params.m as usize;
    let check = ClassCheck::exact(1, 4, 2 * m + 1, 4 * m - 2);
    let violations = class_violations(&poly, &check);
    if !violations.is_empty() {
        return Err(Error::NotMonostatic(violations.join("; ")));
    }

    // standing data: heights over the bottom face plane
    let bottom = bottom_face_plane(&poly)?;
    let c = mass_properties_unchecked(&poly, 0).centroid;
    let n_len = scalar::to_f64(&bottom.0.norm2()).sqrt();
    let height = |p: &Vec3| scalar::to_f64(&(&bottom.1 - &bottom.0.dot(p))) / n_len;
    let r = height(&c);
    let r0 = height(&Vec3::zero());
    let r_below_r0 = bottom.0.dot(&c) > Scalar::zero(); // n points down, o at 0
    if !r_below_r0 {
        return Err(Error::NotMonostatic(format!(
            "center of mass is not below the spiral center (r={r}, r0={r0})"
        )));
    }
    Ok(ConwayOutput {
        polyhedron: poly,
        r,
        r0,
        r_below_r0,
    })
}

/// Outward plane of the lowest horizontal face.
fn bottom_face_plane(p: &Polyhedron) -> Result<(Vec3, Scalar)> {
    for f in 0..p.face_count() {
        let pl = p.face_plane(f);
        if pl.normal.x.is_zero() && pl.normal.y.is_zero() && pl.normal.z.is_negative() {
            return Ok((pl.normal, pl.offset));
        }
    }
    Err(Error::NotConvex("no horizontal bottom face".into()))
}

/// Flat pyramid over the spiral polygon with apex near the bottom edge:
/// class (3,1) when the apex stays on the symmetry plane, (2,1) when it
/// is pushed off it. Both land in the combinatorial class (2m, 2m).
pub fn mono_unstable_pyramid(
    params: &ConwayParams,
    symmetric: bool,
) -> Result<(Polyhedron, Vec3)> {
    let cycle = spiral_polygon(params.m, &params.r0);
    let m = params.m as usize;
    let target = if symmetric { (3u32, 1u32) } else { (2u32, 1u32) };
    let check = ClassCheck::exact(target.0, target.1, 2 * m, 2 * m);

    let build = |apex: &Vec3| -> Result<Polyhedron> {
        let mut pts: Vec<Vec3> = cycle
            .iter()
            .map(|(y, z)| Vec3::new(y.clone(), z.clone(), int(0)))
            .collect();
        pts.push(apex.clone());
        let poly = hull_from_points(&pts)?;
        let violations = class_violations(&poly, &check);
        if violations.is_empty() {
            Ok(poly)
        } else {
            Err(Error::ClassNotAchieved {
                target_s: target.0,
                target_u: target.1,
                achieved: analyze(&poly, None).ok().and_then(|r| r.class()),
                detail: violations.join("; "),
            })
        }
    };

    if let Some(apex) = &params.apex {
        let poly = build(apex)?;
        return Ok((poly, apex.clone()));
    }

    let etas = [
        ratio(1, 16),
        ratio(1, 24),
        ratio(1, 32),
        ratio(3, 32),
        ratio(1, 12),
        ratio(1, 8),
    ];
    let heights = [ratio(1, 8), ratio(1, 16), ratio(1, 4), ratio(1, 32), ratio(3, 16)];
    let offsets: Vec<Scalar> = if symmetric {
        vec![Scalar::zero()]
    } else {
        vec![ratio(1, 64), ratio(1, 32), ratio(1, 128), ratio(1, 16), ratio(1, 48)]
    };

    let mut best: Option<String> = None;
    for eta in &etas {
        for h in &heights {
            for xi in &offsets {
                let apex = Vec3::new(xi.clone(), eta - &params.r0, h.clone());
                match build(&apex) {
                    Ok(poly) => return Ok((poly, apex)),
                    Err(e) => {
                        if best.is_none() {
                            best = Some(e.to_string());
                        }
                    }
                }
            }
        }
    }
    Err(Error::ClassNotAchieved {
        target_s: target.0,
        target_u: target.1,
        achieved: None,
        detail: best.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::mechanical_complexity;
    use crate::scalar::to_f64;

    #[test]
    fn spiral_polygon_has_2m_minus_1_vertices() {
        for m in [9u32, 10, 12] {
            let cycle = spiral_polygon(m, &int(1));
            assert_eq!(cycle.len(), (2 * m - 1) as usize);
        }
    }

    #[test]
    fn plate_is_never_monostatic() {
        for m in [9u32, 10, 11, 12] {
            let (r2, r0) = plate_height(m, &int(1));
            assert!(r2 > r0, "plate m={m}");
        }
    }

    #[test]
    fn wedge_drops_below_center_for_m_at_least_9() {
        for m in [9u32, 10, 11, 12] {
            let (r1, r0) = wedge_height(m, &int(1));
            assert!(r1 < r0, "wedge m={m}");
        }
    }

    #[test]
    fn wedge_limit_value_m9() {
        // r1/r0 should be just under 1 at the threshold
        let (r1, r0) = wedge_height(9, &int(1));
        let ratio = to_f64(&r1) / to_f64(&r0);
        assert!(ratio > 0.97 && ratio < 1.0, "got {ratio}");
    }

    #[test]
    fn conway_solid_default_is_1_4() {
        let out = conway_solid(&ConwayParams::default()).unwrap();
        assert_eq!(out.polyhedron.face_count(), 19);
        assert_eq!(out.polyhedron.vertex_count(), 34);
        assert!(out.r_below_r0);
        assert!(out.r < out.r0);
        assert_eq!(mechanical_complexity(&out.polyhedron).unwrap(), 96);
    }

    #[test]
    fn twisted_caps_keep_class() {
        let params = ConwayParams {
            cap_twist: ratio(1, 64),
            ..ConwayParams::default()
        };
        let out = conway_solid(&params).unwrap();
        assert_eq!(mechanical_complexity(&out.polyhedron).unwrap(), 96);
    }

    #[test]
    fn small_m_rejected() {
        let params = ConwayParams {
            m: 8,
            ..ConwayParams::default()
        };
        assert!(matches!(
            conway_solid(&params),
            Err(Error::ParamsOutOfWindow(_))
        ));
    }

    #[test]
    fn symmetric_pyramid_is_3_1() {
        let (p, _) = mono_unstable_pyramid(&ConwayParams::default(), true).unwrap();
        assert_eq!(p.face_count(), 18);
        assert_eq!(p.vertex_count(), 18);
        assert_eq!(mechanical_complexity(&p).unwrap(), 64);
    }

    #[test]
    fn asymmetric_pyramid_is_2_1() {
        let (p, _) = mono_unstable_pyramid(&ConwayParams::default(), false).unwrap();
        assert_eq!(mechanical_complexity(&p).unwrap(), 66);
    }
}
