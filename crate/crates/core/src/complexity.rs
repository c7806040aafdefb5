//! Mechanical complexity arithmetic on equilibrium and combinatorial
//! classes.
//!
//! The complexity of a polyhedron is n - N, the count of its k-faces
//! minus the count of its equilibria. Over an equilibrium class (S,U)
//! the infimum is governed by the minimal excess f+v-S-U reachable over
//! realizable (f,v) pairs; `min_excess` is the closed form and
//! `min_excess_bruteforce` the finite-scan oracle for it.

use crate::equilibria::analyze;
use crate::error::Result;
use crate::polyhedron::Polyhedron;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquilibriumClassId {
    pub stable: u32,
    pub unstable: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CombinatorialClassId {
    pub faces: u32,
    pub vertices: u32,
}

/// Steinitz realizability of (faces, vertices): x >= 4 and
/// x/2 + 2 <= y <= 2x - 4, compared exactly (no integer rounding of x/2).
pub fn is_polyhedral_pair(x: i64, y: i64) -> bool {
    x >= 4 && x + 4 <= 2 * y && y <= 2 * x - 4
}

/// Closed form of the minimal excess f+v-S-U over polyhedral pairs
/// dominating (S,U).
pub fn min_excess(s: i64, u: i64) -> i64 {
    assert!(s >= 1 && u >= 1);
    if s > 4 && s > 2 * u - 4 {
        (s + 1) / 2 - u + 2
    } else if u > 4 && u > 2 * s - 4 {
        (u + 1) / 2 - s + 2
    } else if s <= 4 && u <= 4 {
        8 - s - u
    } else {
        0
    }
}

/// Finite-scan oracle for [`min_excess`]: minimizes f+v-S-U over
/// polyhedral pairs with f >= S and v >= U. Beyond f = 2*max(S,U)+8 the
/// excess can only grow: for f past both S and the feasibility corner,
/// every admissible v is at least max(U, f/2+2), so f+v increases with f.
pub fn min_excess_bruteforce(s: i64, u: i64) -> i64 {
    assert!(s >= 1 && u >= 1);
    let f_max = 2 * s.max(u) + 8;
    let mut best: Option<i64> = None;
    for f in 4..=f_max {
        if f < s {
            continue;
        }
        // smallest admissible v for this f: ceil(f/2 + 2)
        let v_lo = u.max((f + 5) / 2);
        let v_hi = 2 * f - 4;
        if v_lo > v_hi {
            continue;
        }
        let excess = f + v_lo - s - u;
        best = Some(match best {
            Some(b) => b.min(excess),
            None => excess,
        });
    }
    best.expect("scan range always contains a polyhedral pair")
}

/// n(P) - N(P); errors when any site is degenerate.
pub fn mechanical_complexity(p: &Polyhedron) -> Result<i64> {
    let rep = analyze(p, None)?;
    let counts = rep.counts_or_err()?;
    Ok(p.total_k_faces() - counts.total() as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    /// C(S,U) known exactly (S,U >= 2).
    Exact,
    /// Lower and proved upper bound.
    Bounded,
    /// Only the universal lower bound.
    LowerOnly,
}

#[derive(Clone, Debug)]
pub struct ClassBounds {
    pub class: EquilibriumClassId,
    pub lower: i64,
    pub upper: Option<i64>,
    pub status: BoundStatus,
    pub notes: Vec<String>,
}

/// Complexity bounds for class (S,U): the universal lower bound
/// 2*min_excess everywhere, exact for S,U >= 2, and the proved monostatic
/// upper bounds on the S=1 row and U=1 column. Known witnesses and
/// literature values ride along as notes.
pub fn class_bounds(s: i64, u: i64) -> ClassBounds {
    assert!(s >= 1 && u >= 1);
    let lower = 2 * min_excess(s, u);
    let class = EquilibriumClassId {
        stable: s as u32,
        unstable: u as u32,
    };
    let mut notes = Vec::new();

    if s >= 2 && u >= 2 {
        return ClassBounds {
            class,
            lower,
            upper: Some(lower),
            status: BoundStatus::Exact,
            notes,
        };
    }

    if s == 1 && u >= 4 {
        let upper = 90 + 2 * min_excess(1, u);
        if u == 4 {
            notes.push("witness: Conway-Guy solid, C=96".to_string());
        }
        return ClassBounds {
            class,
            lower,
            upper: Some(upper),
            status: BoundStatus::Bounded,
            notes,
        };
    }

    if u == 1 && s >= 4 {
        let upper = 59 + if s % 2 == 0 { 1 } else { -1 } + 2 * min_excess(s, 1);
        if s % 2 == 0 {
            notes.push(format!(
                "constructed chain achieves C={} (S+64); differs from the stated bound by 2",
                s + 64
            ));
        } else {
            notes.push(format!("constructed chain achieves C={} (S+61)", s + 61));
        }
        return ClassBounds {
            class,
            lower,
            upper: Some(upper),
            status: BoundStatus::Bounded,
            notes,
        };
    }

    // leftover monostatic corners
    match (s, u) {
        (3, 1) => {
            notes.push("witness: symmetric spiral pyramid, C=64".to_string());
            ClassBounds {
                class,
                lower,
                upper: Some(64),
                status: BoundStatus::Bounded,
                notes,
            }
        }
        (2, 1) => {
            notes.push("witness: asymmetric spiral pyramid, C=66".to_string());
            ClassBounds {
                class,
                lower,
                upper: Some(66),
                status: BoundStatus::Bounded,
                notes,
            }
        }
        (1, 3) => {
            notes.push("literature: Bezdek 2011 reports C=64 (coordinates unpublished)".to_string());
            ClassBounds {
                class,
                lower,
                upper: None,
                status: BoundStatus::LowerOnly,
                notes,
            }
        }
        (1, 2) | (1, 1) => {
            if s == 1 && u == 1 {
                notes.push("open; prize class".to_string());
            }
            ClassBounds {
                class,
                lower,
                upper: None,
                status: BoundStatus::LowerOnly,
                notes,
            }
        }
        _ => ClassBounds {
            class,
            lower,
            upper: None,
            status: BoundStatus::LowerOnly,
            notes,
        },
    }
}

#[derive(Clone, Debug)]
pub struct GridCell {
    pub bounds: ClassBounds,
    pub pair: bool,
}

/// Dense table of class bounds for 1 <= S <= s_max, 1 <= U <= u_max,
/// row-major by S then U.
pub fn grid(s_max: i64, u_max: i64) -> Vec<GridCell> {
    let mut cells = Vec::with_capacity((s_max * u_max) as usize);
    for s in 1..=s_max {
        for u in 1..=u_max {
            cells.push(GridCell {
                bounds: class_bounds(s, u),
                pair: is_polyhedral_pair(s, u),
            });
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_predicate() {
        assert!(is_polyhedral_pair(4, 4));
        assert!(!is_polyhedral_pair(4, 3));
        assert!(is_polyhedral_pair(19, 34));
        assert!(!is_polyhedral_pair(3, 4));
        assert!(is_polyhedral_pair(5, 5)); // 5/2+2 = 4.5 <= 5 <= 6
        assert!(!is_polyhedral_pair(5, 7));
    }

    #[test]
    fn closed_form_spot_values() {
        assert_eq!(min_excess(2, 2), 4);
        assert_eq!(min_excess(10, 3), 4);
        assert_eq!(min_excess(5, 5), 0);
        assert_eq!(min_excess(1, 1), 6);
        assert_eq!(min_excess(1, 4), 3);
        assert_eq!(min_excess(2, 9), 5);
    }

    #[test]
    fn scan_matches_closed_form_exhaustively() {
        for s in 1..=30 {
            for u in 1..=30 {
                assert_eq!(
                    min_excess(s, u),
                    min_excess_bruteforce(s, u),
                    "mismatch at ({s},{u})"
                );
            }
        }
    }

    #[test]
    fn zero_excess_iff_pair() {
        for s in 1..=30 {
            for u in 1..=30 {
                assert_eq!(min_excess(s, u) == 0, is_polyhedral_pair(s, u));
            }
        }
    }

    #[test]
    fn scan_witness_examples() {
        assert_eq!(min_excess_bruteforce(2, 2), 4); // via (4,4)
        assert_eq!(min_excess_bruteforce(1, 4), 3); // via (4,4)
    }

    #[test]
    fn bounds_statuses() {
        let b = class_bounds(2, 2);
        assert_eq!(b.status, BoundStatus::Exact);
        assert_eq!(b.upper, Some(8));

        let b = class_bounds(1, 4);
        assert_eq!(b.status, BoundStatus::Bounded);
        assert_eq!(b.lower, 6);
        assert_eq!(b.upper, Some(96));

        let b = class_bounds(1, 1);
        assert_eq!(b.status, BoundStatus::LowerOnly);
        assert_eq!(b.lower, 12);

        let b = class_bounds(5, 1);
        assert_eq!(b.upper, Some(59 - 1 + 2 * min_excess(5, 1)));
    }

    #[test]
    fn lower_bounds_even_and_nonnegative() {
        for cell in grid(12, 12) {
            assert!(cell.bounds.lower >= 0);
            assert_eq!(cell.bounds.lower % 2, 0);
            if let Some(up) = cell.bounds.upper {
                assert!(cell.bounds.lower <= up);
            }
        }
    }

    #[test]
    fn grid_spot_cells() {
        let g = grid(10, 10);
        let cell = |s: i64, u: i64| &g[((s - 1) * 10 + (u - 1)) as usize];
        assert!(cell(4, 4).pair);
        assert_eq!(cell(4, 4).bounds.upper, Some(0));
        assert_eq!(cell(2, 9).bounds.upper, Some(10));
        assert_eq!(cell(10, 3).bounds.upper, Some(8));
    }
}
