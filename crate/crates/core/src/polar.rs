//! Polar duality with respect to an interior reference point.

use crate::error::{Error, Result};
use crate::hull::hull_from_points;
use crate::polyhedron::Polyhedron;
use crate::scalar::{int, Scalar};
use crate::vec3::Vec3;

/// Polar dual of `p` with respect to the strictly interior point `o`.
///
/// Working in the frame with `o` at the origin, each facet plane
/// `n . x = c` (with `c > 0`) contributes the pole `n / c`; the dual is
/// the hull of the poles, translated back by `o`. Faces and vertices
/// swap roles, and applying the operation twice returns the original
/// polyhedron exactly.
pub fn polar_dual(p: &Polyhedron, o: &Vec3) -> Result<Polyhedron> {
    let poles = facet_poles(p, o)?;
    let dual = hull_from_points(&poles)?;
    Ok(dual)
}

/// Poles (o-translated back) of every facet plane; errors when `o` is not
/// strictly interior.
pub fn facet_poles(p: &Polyhedron, o: &Vec3) -> Result<Vec<Vec3>> {
    let mut poles = Vec::with_capacity(p.face_count());
    for plane in p.face_planes() {
        let c = &plane.offset - &plane.normal.dot(o);
        if c <= Scalar::from_integer(0.into()) {
            return Err(Error::ReferenceOutside);
        }
        let pole = plane.normal.scale(&(int(1) / &c));
        poles.push(&pole + o);
    }
    Ok(poles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn centered_cube() -> Polyhedron {
        let mut pts = Vec::new();
        for x in [-1i64, 1] {
            for y in [-1i64, 1] {
                for z in [-1i64, 1] {
                    pts.push(Vec3::from_ints(x, y, z));
                }
            }
        }
        hull_from_points(&pts).unwrap()
    }

    #[test]
    fn cube_dual_is_octahedron() {
        let cube = centered_cube();
        let dual = polar_dual(&cube, &Vec3::zero()).unwrap();
        assert_eq!(dual.vertex_count(), 6);
        assert_eq!(dual.face_count(), 8);
        for e in [
            Vec3::from_ints(1, 0, 0),
            Vec3::from_ints(-1, 0, 0),
            Vec3::from_ints(0, 0, 1),
        ] {
            assert!(dual.vertices.contains(&e));
        }
    }

    #[test]
    fn double_dual_is_identity() {
        let cube = centered_cube();
        let o = Vec3::new(ratio(1, 8), ratio(-1, 16), ratio(1, 32));
        let dd = polar_dual(&polar_dual(&cube, &o).unwrap(), &o).unwrap();
        assert_eq!(dd, cube);
    }

    #[test]
    fn outside_reference_rejected() {
        let cube = centered_cube();
        let err = polar_dual(&cube, &Vec3::from_ints(5, 0, 0)).unwrap_err();
        assert!(matches!(err, Error::ReferenceOutside));
        // boundary point is also not strictly interior
        let err = polar_dual(&cube, &Vec3::from_ints(1, 0, 0)).unwrap_err();
        assert!(matches!(err, Error::ReferenceOutside));
    }
}
