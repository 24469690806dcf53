use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |m - m^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid matrix entries: {0}")]
    InvalidEntries(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    /// The stacked steady-state system does not determine a unique solution.
    #[error("degenerate system: {0}")]
    Degenerate(String),

    #[error("time step {dt} is unstable (trace drift {drift:e}); try a smaller step")]
    Unstable { dt: f64, drift: f64 },

    #[error("limit-cycle class does not fit the state: {0}")]
    ClassMismatch(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
