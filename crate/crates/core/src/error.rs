use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// `e + 1 < N`: there are not enough labels in {0..e} for an injection.
    #[error("graph with {n_vertices} vertices and {n_edges} edges is not graceful (e + 1 < N)")]
    TooManyVertices { n_vertices: usize, n_edges: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("step {step} exceeds the stability bound {max}")]
    StepTooLarge { step: f64, max: f64 },

    #[error("norm drift {drift:e} exceeds 1e-6; retry with a smaller step")]
    IntegrationAccuracy { drift: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate design: {0}")]
    DegenerateDesign(String),
}

pub type Result<T> = std::result::Result<T, Error>;
