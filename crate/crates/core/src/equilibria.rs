//! Exact classification of face/edge/vertex equilibria.
//!
//! A boundary point q is an equilibrium with respect to the reference
//! point c when the plane through q perpendicular to q-c supports the
//! solid. Faces can carry stable points (the orthogonal projection of c
//! falls in the relative interior), edges saddle points (the foot on the
//! edge line is interior and the offset c-to-foot lies strictly inside
//! the edge's normal cone), vertices unstable points (the supporting
//! plane at the vertex perpendicular to q-c touches nothing else).
//!
//! Every test reduces to signs of rationals. A site whose deciding
//! quantities are all nonnegative with at least one exact zero is
//! Degenerate: an equilibrium exists in the closed sense but is not
//! stable under perturbation, and counts are withheld.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedron::{mass_properties_unchecked, FacePlane, Polyhedron};
use crate::scalar::Scalar;
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquilibriumKind {
    Stable,
    Saddle,
    Unstable,
    None,
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteId {
    Face(usize),
    Edge(usize),
    Vertex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquilibriumCounts {
    pub stable: u32,
    pub unstable: u32,
    pub saddle: u32,
}

impl EquilibriumCounts {
    pub fn total(&self) -> u32 {
        self.stable + self.unstable + self.saddle
    }
}

#[derive(Clone, Debug)]
pub struct EquilibriumReport {
    pub reference: Vec3,
    pub faces: Vec<EquilibriumKind>,
    pub edges: Vec<EquilibriumKind>,
    pub vertices: Vec<EquilibriumKind>,
    pub degenerate: bool,
    /// Present only when no site is degenerate.
    pub counts: Option<EquilibriumCounts>,
}

impl EquilibriumReport {
    /// (S, U) pair; None for degenerate reports.
    pub fn class(&self) -> Option<(u32, u32)> {
        self.counts.map(|c| (c.stable, c.unstable))
    }

    pub fn counts_or_err(&self) -> Result<EquilibriumCounts> {
        self.counts.ok_or(Error::DegenerateEquilibria)
    }
}

struct Classifier<'a> {
    poly: &'a Polyhedron,
    planes: Vec<FacePlane>,
    edge_faces: Vec<[usize; 2]>,
    reference: Vec3,
}

impl<'a> Classifier<'a> {
    fn new(poly: &'a Polyhedron, reference: Vec3) -> Result<Self> {
        let planes = poly.face_planes();
        for pl in &planes {
            if pl.normal.dot(&reference) >= pl.offset {
                return Err(Error::ReferenceOutside);
            }
        }
        Ok(Classifier {
            poly,
            planes,
            edge_faces: poly.edge_faces(),
            reference,
        })
    }

    /// Kind from the minimum of a site's deciding quantities: strictly
    /// positive means a nondegenerate equilibrium, an exact zero (with the
    /// rest nonnegative) a degenerate one.
    fn kind_from_margin(margin: &Scalar, positive_kind: EquilibriumKind) -> EquilibriumKind {
        if margin.is_positive() {
            positive_kind
        } else if margin.is_zero() {
            EquilibriumKind::Degenerate
        } else {
            EquilibriumKind::None
        }
    }

    fn classify_face(&self, f: usize) -> EquilibriumKind {
        let plane = &self.planes[f];
        let n = &plane.normal;
        let lambda = (&plane.offset - &n.dot(&self.reference)) / n.norm2();
        let foot = &self.reference + &n.scale(&lambda);
        let cycle = &self.poly.faces[f];
        let mut margin: Option<Scalar> = None;
        for k in 0..cycle.len() {
            let a = &self.poly.vertices[cycle[k]];
            let b = &self.poly.vertices[cycle[(k + 1) % cycle.len()]];
            let turn = (b - a).cross(&(&foot - a)).dot(n);
            margin = Some(match margin {
                Some(m) => m.min(turn),
                None => turn,
            });
        }
        Self::kind_from_margin(&margin.unwrap(), EquilibriumKind::Stable)
    }

    fn classify_edge(&self, e: usize) -> EquilibriumKind {
        let (ai, bi) = self.poly.edges[e];
        let a = &self.poly.vertices[ai];
        let b = &self.poly.vertices[bi];
        let d = b - a;
        let len2 = d.norm2();
        let t_num = (&self.reference - a).dot(&d);
        let foot = a + &d.scale(&(&t_num / &len2));
        let w = &foot - &self.reference;

        let [f1, f2] = self.edge_faces[e];
        let n1 = &self.planes[f1].normal;
        let n2 = &self.planes[f2].normal;
        // w = alpha*n1 + beta*n2 in the plane orthogonal to the edge;
        // solve the Gram system, signs carried by the numerators.
        let g11 = n1.norm2();
        let g12 = n1.dot(n2);
        let g22 = n2.norm2();
        let wn1 = w.dot(n1);
        let wn2 = w.dot(n2);
        let alpha_num = &wn1 * &g22 - &wn2 * &g12;
        let beta_num = &wn2 * &g11 - &wn1 * &g12;

        let margin = t_num
            .clone()
            .min(&len2 - &t_num)
            .min(alpha_num)
            .min(beta_num);
        Self::kind_from_margin(&margin, EquilibriumKind::Saddle)
    }

    fn classify_vertex(&self, vi: usize) -> EquilibriumKind {
        let q = &self.poly.vertices[vi];
        let dir = q - &self.reference;
        let mut margin: Option<Scalar> = None;
        for (pi, p) in self.poly.vertices.iter().enumerate() {
            if pi == vi {
                continue;
            }
            let m = -(p - q).dot(&dir);
            margin = Some(match margin {
                Some(cur) => cur.min(m),
                None => m,
            });
        }
        Self::kind_from_margin(&margin.unwrap(), EquilibriumKind::Unstable)
    }
}

/// Classifies a single face, edge, or vertex with respect to `c`.
pub fn classify_site(poly: &Polyhedron, c: &Vec3, site: SiteId) -> Result<EquilibriumKind> {
    let cls = Classifier::new(poly, c.clone())?;
    Ok(match site {
        SiteId::Face(f) => cls.classify_face(f),
        SiteId::Edge(e) => cls.classify_edge(e),
        SiteId::Vertex(v) => cls.classify_vertex(v),
    })
}

/// Classifies every site of `poly` with respect to `reference`, which
/// defaults to the center of mass. The polyhedron is assumed valid.
pub fn analyze(poly: &Polyhedron, reference: Option<&Vec3>) -> Result<EquilibriumReport> {
    let c = match reference {
        Some(c) => c.clone(),
        None => mass_properties_unchecked(poly, 0).centroid,
    };
    let cls = Classifier::new(poly, c)?;

    let faces: Vec<EquilibriumKind> = (0..poly.face_count()).map(|f| cls.classify_face(f)).collect();
    let edges: Vec<EquilibriumKind> = (0..poly.edge_count()).map(|e| cls.classify_edge(e)).collect();
    let vertices: Vec<EquilibriumKind> =
        (0..poly.vertex_count()).map(|v| cls.classify_vertex(v)).collect();

    let degenerate = faces
        .iter()
        .chain(&edges)
        .chain(&vertices)
        .any(|k| *k == EquilibriumKind::Degenerate);
    let counts = if degenerate {
        None
    } else {
        Some(EquilibriumCounts {
            stable: faces.iter().filter(|k| **k == EquilibriumKind::Stable).count() as u32,
            saddle: edges.iter().filter(|k| **k == EquilibriumKind::Saddle).count() as u32,
            unstable: vertices
                .iter()
                .filter(|k| **k == EquilibriumKind::Unstable)
                .count() as u32,
        })
    };

    Ok(EquilibriumReport {
        reference: cls.reference,
        faces,
        edges,
        vertices,
        degenerate,
        counts,
    })
}

#[derive(Clone, Debug)]
pub struct BalanceCheck {
    /// S + U - H - 2
    pub poincare_residual: i64,
    /// f + v - e - 2
    pub euler_residual: i64,
    /// (n - N) - 2(f + v - S - U)
    pub complexity_residual: i64,
    pub pass: bool,
}

/// Asserts the Poincare-Hopf and Euler identities and their consequence
/// C(P) = 2(f+v-S-U); returns all three residuals.
pub fn check_balance_identities(poly: &Polyhedron, rep: &EquilibriumReport) -> Result<BalanceCheck> {
    let counts = rep.counts_or_err()?;
    let (s, u, h) = (counts.stable as i64, counts.unstable as i64, counts.saddle as i64);
    let (f, v, e) = (
        poly.face_count() as i64,
        poly.vertex_count() as i64,
        poly.edge_count() as i64,
    );
    let poincare = s + u - h - 2;
    let euler = f + v - e - 2;
    let complexity = (f + v + e - s - u - h) - 2 * (f + v - s - u);
    Ok(BalanceCheck {
        poincare_residual: poincare,
        euler_residual: euler,
        complexity_residual: complexity,
        pass: poincare == 0 && euler == 0 && complexity == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::hull_from_points;
    use crate::scalar::ratio;

    fn unit_cube() -> Polyhedron {
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

    #[test]
    fn cube_all_sites_carry_equilibria() {
        let cube = unit_cube();
        let rep = analyze(&cube, None).unwrap();
        assert!(!rep.degenerate);
        assert!(rep.faces.iter().all(|k| *k == EquilibriumKind::Stable));
        assert!(rep.edges.iter().all(|k| *k == EquilibriumKind::Saddle));
        assert!(rep.vertices.iter().all(|k| *k == EquilibriumKind::Unstable));
        let counts = rep.counts.unwrap();
        assert_eq!((counts.stable, counts.unstable, counts.saddle), (6, 8, 12));
        let check = check_balance_identities(&cube, &rep).unwrap();
        assert!(check.pass);
    }

    #[test]
    fn regular_tetrahedron_class() {
        // alternating cube corners form a regular tetrahedron with
        // rational coordinates
        let t = hull_from_points(&[
            Vec3::from_ints(0, 0, 0),
            Vec3::from_ints(1, 1, 0),
            Vec3::from_ints(1, 0, 1),
            Vec3::from_ints(0, 1, 1),
        ])
        .unwrap();
        let rep = analyze(&t, None).unwrap();
        let counts = rep.counts.unwrap();
        assert_eq!((counts.stable, counts.unstable, counts.saddle), (4, 4, 6));
    }

    #[test]
    fn off_center_reference_shifts_classes() {
        let cube = unit_cube();
        // reference near a corner: some far sites lose their equilibria
        let c = Vec3::new(ratio(1, 10), ratio(1, 10), ratio(1, 10));
        let rep = analyze(&cube, Some(&c)).unwrap();
        assert!(!rep.degenerate);
        let counts = rep.counts.unwrap();
        assert!(counts.unstable < 8);
        assert_eq!(
            counts.stable as i64 + counts.unstable as i64 - counts.saddle as i64,
            2
        );
    }

    fn octahedron() -> Polyhedron {
        hull_from_points(&[
            Vec3::from_ints(1, 0, 0),
            Vec3::from_ints(-1, 0, 0),
            Vec3::from_ints(0, 1, 0),
            Vec3::from_ints(0, -1, 0),
            Vec3::from_ints(0, 0, 1),
            Vec3::from_ints(0, 0, -1),
        ])
        .unwrap()
    }

    #[test]
    fn exact_cone_tie_reports_degenerate() {
        // For the regular octahedron and reference (t,0,0), the offset
        // from reference to the foot on an equatorial edge such as
        // [(0,0,1),(0,1,0)] decomposes against the two adjacent face
        // normals (1,1,1), (-1,1,1) with coefficient (1/2 - t)/2 on the
        // far normal. t = 1/2 is an exact tie.
        let oct = octahedron();
        let c = Vec3::new(ratio(1, 2), ratio(0, 1), ratio(0, 1));
        let rep = analyze(&oct, Some(&c)).unwrap();
        assert!(rep.degenerate);
        assert!(rep.counts.is_none());
        assert!(rep
            .edges
            .iter()
            .any(|k| *k == EquilibriumKind::Degenerate));
        assert!(matches!(
            rep.counts_or_err().unwrap_err(),
            Error::DegenerateEquilibria
        ));

        // strictly inside the tie the same edges are honest saddles
        let c = Vec3::new(ratio(1, 4), ratio(0, 1), ratio(0, 1));
        let rep = analyze(&oct, Some(&c)).unwrap();
        assert!(!rep.degenerate);
    }

    #[test]
    fn classify_single_sites_match_analyze() {
        let oct = octahedron();
        let c = Vec3::new(ratio(1, 8), ratio(1, 16), ratio(1, 32));
        let rep = analyze(&oct, Some(&c)).unwrap();
        for f in 0..oct.face_count() {
            assert_eq!(
                classify_site(&oct, &c, SiteId::Face(f)).unwrap(),
                rep.faces[f]
            );
        }
        for e in 0..oct.edge_count() {
            assert_eq!(
                classify_site(&oct, &c, SiteId::Edge(e)).unwrap(),
                rep.edges[e]
            );
        }
        for v in 0..oct.vertex_count() {
            assert_eq!(
                classify_site(&oct, &c, SiteId::Vertex(v)).unwrap(),
                rep.vertices[v]
            );
        }
    }

    #[test]
    fn boundary_reference_rejected() {
        let oct = octahedron();
        assert!(matches!(
            analyze(&oct, Some(&Vec3::from_ints(1, 0, 0))).unwrap_err(),
            Error::ReferenceOutside
        ));
        assert!(matches!(
            analyze(&oct, Some(&Vec3::from_ints(3, 0, 0))).unwrap_err(),
            Error::ReferenceOutside
        ));
    }
}
