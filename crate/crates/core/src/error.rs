use thiserror::Error;

/// Errors raised by the geometric and rigidity routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("invalid framework: {0}")]
    InvalidFramework(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("vertex {vertex} is mapped to the plane at infinity")]
    VertexAtInfinity { vertex: usize },

    #[error("projective map is singular (|det| = {det:e})")]
    SingularMap { det: f64 },

    #[error(
        "configuration spans only a {dim}-dimensional affine subspace; rigidity in lower dimension is not supported"
    )]
    LowDimensional { dim: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("stress is not in equilibrium (max residual {residual:e})")]
    NotEquilibrium { residual: f64 },

    #[error("stress is not proper on edge ({i}, {j}) with value {value:e}")]
    NotProper { i: usize, j: usize, value: f64 },

    #[error("stress vanishes on edge ({i}, {j})")]
    ZeroStressOnEdge { i: usize, j: usize },

    #[error("tetrahedron {index} is not realizable with the given edge lengths")]
    InfeasibleTetrahedron { index: usize },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("not star-shaped from vertex {apex}: faces {blocked:?} are not visible")]
    NotStarShaped { apex: usize, blocked: Vec<usize> },

    #[error("sign graph: {0}")]
    SignGraph(String),

    #[error("instance too large: {edges} edges (limit {limit})")]
    TooLarge { edges: usize, limit: usize },

    #[error("out of hypothesis scope: {0}")]
    OutOfScope(String),

    /// An internal consistency check failed. This is a bug signal, not a user error.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("{pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
