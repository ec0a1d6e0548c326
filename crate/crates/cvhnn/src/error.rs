use crate::complex::ComplexValue;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid activation parameters: {0}")]
    InvalidActivation(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("weight matrix is not Hermitian (max |W_ij - conj(W_ji)| = {max_violation})")]
    NotHermitian { max_violation: f64 },

    #[error("energy is not real: imaginary residual {imag} against real part {real}")]
    ComplexEnergy { real: f64, imag: f64 },

    #[error("{0} is not a member of the activation's image set")]
    NotInImageSet(ComplexValue),

    #[error("at least one pattern is required")]
    NoPatterns,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
