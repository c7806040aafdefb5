//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("polyhedron failed convexity validation: {0}")]
    NotConvex(String),

    #[error("reference point is not strictly interior")]
    ReferenceOutside,

    #[error("degenerate equilibria present; counts are undefined")]
    DegenerateEquilibria,

    #[error("edges are not tangent to the unit sphere (worst residual {residual:e})")]
    NotMidscribed { residual: f64 },

    #[error("bad site for this manipulation: {0}")]
    BadSite(String),

    #[error("lemma precondition violated: {0}")]
    ConditionViolated(String),

    #[error("target class ({target_s},{target_u}) not achieved{}", achieved_note(.achieved))]
    ClassNotAchieved {
        target_s: u32,
        target_u: u32,
        achieved: Option<(u32, u32)>,
        detail: String,
    },

    #[error("no catalog entry for class ({0},{1})")]
    UnknownCatalogEntry(u32, u32),

    #[error("construction parameters outside the validated window: {0}")]
    ParamsOutOfWindow(String),

    #[error("solid is not monostatic: {0}")]
    NotMonostatic(String),

    #[error("iteration did not converge within the budget")]
    NoConvergence,

    #[error("search budget exhausted; best near-miss: {diagnostics}")]
    BudgetExhausted { diagnostics: String },

    #[error("class ({0},{1}) is not supported by any implemented construction")]
    Unsupported(u32, u32),

    #[error("counterexample to a proved statement (this indicates a bug): {0}")]
    CounterexampleFound(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn achieved_note(achieved: &Option<(u32, u32)>) -> String {
    match achieved {
        Some((s, u)) => format!(" (achieved ({s},{u}))"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
