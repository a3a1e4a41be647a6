use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow in {0}")]
    Overflow(&'static str),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("jacobi sweep limit of {sweeps} reached with off-diagonal mass {off_diagonal:e}")]
    SweepLimit { sweeps: usize, off_diagonal: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable tag used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Overflow(_) => "overflow",
            Error::IndexOutOfRange(_) => "index_out_of_range",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Divergent(_) => "divergent",
            Error::NonConvergence(_) => "non_convergence",
            Error::SweepLimit { .. } => "sweep_limit",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
