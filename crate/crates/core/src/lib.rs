//! Exact-arithmetic classification of the static equilibria of convex
//! polyhedra, mechanical complexity of equilibrium classes, and
//! constructions of minimal-complexity and monostatic witness solids.
//!
//! Everything geometric is carried by arbitrary-precision rationals, so
//! every predicate (stability of a face, saddle on an edge, instability
//! of a vertex) is a sign test with no tolerance. A small floating-point
//! backend exists only for irrational-coordinate inputs such as
//! midscribed (edge-tangent) solids and for the vertex recentering
//! iteration.

pub mod complexity;
pub mod constructions;
pub mod equilibria;
pub mod error;
pub mod floatgeom;
pub mod hull;
pub mod polar;
pub mod polyhedron;
pub mod scalar;
pub mod search;
pub mod vec3;

pub use complexity::{class_bounds, grid, mechanical_complexity, BoundStatus, ClassBounds};
pub use constructions::{build_class, catalog, conway_solid, mono_unstable_pyramid, pyramid};
pub use equilibria::{
    analyze, check_balance_identities, classify_site, EquilibriumKind, EquilibriumReport, SiteId,
};
pub use error::Error;
pub use floatgeom::{recenter_vertex, verify_midscribed_equilibria, FloatPolyhedron};
pub use hull::hull_from_points;
pub use polar::polar_dual;
pub use polyhedron::{mass_properties, MassProperties, Polyhedron};
pub use scalar::Scalar;
pub use search::{random_polyhedron, tetrahedron_survey, SearchParams, SurveyResult};
pub use vec3::Vec3;
