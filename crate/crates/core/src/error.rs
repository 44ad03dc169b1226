use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("matrix dimensions must be at least 1x1")]
    EmptyMatrix,

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("tolerance {0:e} is below double-precision unit roundoff")]
    InvalidTolerance(f64),

    #[error("rank-deficient least-squares system: numerical rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("operands belong to different Fock spaces")]
    SpaceMismatch,

    #[error("total degree {degree} exceeds the symmetrization limit of {limit}")]
    DegreeTooLarge { degree: u32, limit: u32 },

    #[error("coherent amplitude |alpha|^2 = {norm_sqr} exceeds truncation bound {bound}")]
    AlphaTooLarge { norm_sqr: f64, bound: f64 },

    #[error("index {0} is out of range (expected 1 or 2)")]
    BadIndex(usize),

    #[error("expected a dynamical operator in {expected} form")]
    WrongForm { expected: &'static str },

    #[error("Hamiltonian symbol has a complex coefficient on q^{qexp} p^{pexp}")]
    ComplexHamiltonian { qexp: u32, pexp: u32 },

    #[error("grid too small for the finite-difference stencil: {0}")]
    GridTooSmall(String),

    #[error("derivative order {order} along {axis} is not supported on the grid (max 2)")]
    DerivativeOrder { axis: &'static str, order: u32 },

    #[error("grid mismatch between symbols")]
    GridMismatch,

    #[error("step-size guard violated: {0}")]
    StepGuard(String),

    #[error("c_pq must be non-zero for the mass map m = -1/c_pq")]
    ZeroCpq,

    #[error("configuration error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("I/O error on {path}: {reason}")]
    Io { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config { path: path.into(), reason: reason.into() }
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io { path: path.display().to_string(), reason: err.to_string() }
    }
}
