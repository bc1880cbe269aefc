use thiserror::Error;

/// Errors raised by the numerical kernels and the dilation construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {threshold:.3e}")]
    NotHermitian { defect: f64, threshold: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:.6e} below {threshold:.3e}")]
    NotPsd { min_eig: f64, threshold: f64 },

    #[error("polynomial coefficients do not commute: defect {defect:.3e}")]
    NotCommuting { defect: f64 },

    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),

    #[error("fixed-point iteration did not converge after {iterations} iterations (last step {step:.3e})")]
    FixedPointDiverged { iterations: usize, step: f64 },

    #[error("invalid weight rule: {0}")]
    InvalidRule(String),

    #[error("exact window exhausted: corner of size {size} loses {lost} rows")]
    WindowExhausted { size: usize, lost: usize },

    #[error("no bounded diagonal solution: {0}")]
    Q0Unbounded(String),

    #[error("sesquilinear form is not well defined: residual {residual:.3e} exceeds {threshold:.3e}")]
    IllDefinedForm { residual: f64, threshold: f64 },

    #[error("representing operator is not negative: max eigenvalue {max_eig:.6e} above {threshold:.3e}")]
    NotNegative { max_eig: f64, threshold: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid spec: {0}")]
    Validation(String),

    #[error("unknown demo {0:?}")]
    UnknownDemo(String),
}

/// Coarse grouping used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or invalid input.
    Input,
    /// The operator does not meet the hypotheses of any construction path.
    Precondition,
    /// A numerical kernel failed.
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Self::Parse(_) | Self::Validation(_) | Self::UnknownDemo(_) | Self::InvalidRule(_) => ErrorKind::Input,
            Self::Precondition(_)
            | Self::Q0Unbounded(_)
            | Self::NotPsd { .. }
            | Self::IllDefinedForm { .. }
            | Self::NotNegative { .. }
            | Self::WindowExhausted { .. } => ErrorKind::Precondition,
            _ => ErrorKind::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
