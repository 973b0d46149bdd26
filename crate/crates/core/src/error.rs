use thiserror::Error;

/// Errors produced by the polyhedron kernel and the analyses built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("degenerate cut: {0}")]
    DegenerateCut(&'static str),

    #[error("invalid polyhedron: {0}")]
    InvalidPolyhedron(String),

    #[error("center lies outside the polyhedron (facet distance {distance:e})")]
    CenterOutside { distance: f64 },

    #[error("facet {facet} is not castable")]
    NotCastable { facet: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("point cap {cap} reached; best ratio {best_ratio}")]
    CapExceeded { cap: usize, best_ratio: f64 },

    #[error("perturbation failed to reach general position after {attempts} attempts")]
    PerturbationFailed { attempts: usize },

    #[error("OFF parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
