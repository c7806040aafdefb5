//! Post-condition checks shared by the construction steps.

use crate::equilibria::analyze;
use crate::error::{Error, Result};
use crate::polyhedron::Polyhedron;

/// What a construction step must have produced.
#[derive(Clone, Debug)]
pub struct ClassCheck {
    pub s: u32,
    pub u: u32,
    pub faces: Option<usize>,
    pub vertices: Option<usize>,
    /// Every site must carry an equilibrium (C = 0).
    pub minimal: bool,
}

impl ClassCheck {
    pub fn exact(s: u32, u: u32, faces: usize, vertices: usize) -> Self {
        ClassCheck {
            s,
            u,
            faces: Some(faces),
            vertices: Some(vertices),
            minimal: false,
        }
    }

    pub fn class_only(s: u32, u: u32) -> Self {
        ClassCheck {
            s,
            u,
            faces: None,
            vertices: None,
            minimal: false,
        }
    }

    pub fn minimal(mut self) -> Self {
        self.minimal = true;
        self
    }
}

/// Violations of the check, empty when satisfied. The polyhedron is
/// assumed structurally valid (hull output).
pub fn class_violations(p: &Polyhedron, check: &ClassCheck) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(f) = check.faces {
        if p.face_count() != f {
            out.push(format!("face count {} != {}", p.face_count(), f));
        }
    }
    if let Some(v) = check.vertices {
        if p.vertex_count() != v {
            out.push(format!("vertex count {} != {}", p.vertex_count(), v));
        }
    }
    let rep = match analyze(p, None) {
        Ok(r) => r,
        Err(e) => {
            out.push(e.to_string());
            return out;
        }
    };
    match rep.counts {
        None => out.push("degenerate site".to_string()),
        Some(counts) => {
            if (counts.stable, counts.unstable) != (check.s, check.u) {
                out.push(format!(
                    "class ({},{}) != ({},{})",
                    counts.stable, counts.unstable, check.s, check.u
                ));
            }
            if check.minimal && counts.total() as i64 != p.total_k_faces() {
                out.push(format!(
                    "not minimal: N={} < n={}",
                    counts.total(),
                    p.total_k_faces()
                ));
            }
        }
    }
    out
}

pub fn check_class(p: &Polyhedron, check: &ClassCheck) -> Result<()> {
    let violations = class_violations(p, check);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::ClassNotAchieved {
            target_s: check.s,
            target_u: check.u,
            achieved: analyze(p, None).ok().and_then(|r| r.class()),
            detail: violations.join("; "),
        })
    }
}
