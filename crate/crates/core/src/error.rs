use thiserror::Error;

/// Errors raised by the band-energy library.
///
/// Variants split into precondition failures (bad input, reported before any
/// compute starts) and numerical failures (something went wrong mid-run).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("band width b = {b} must satisfy 1 <= b < n/2 for n = {n}")]
    BandWidth { n: usize, b: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("distribution {0} has no bounded support [0, R]; this operation needs R")]
    UnboundedSupport(String),

    #[error("exact enumeration limited to b <= {cap}, got b = {b}")]
    EnumerationCap { b: usize, cap: usize },

    #[error("dense eigensolver limited to n <= {cap}, got n = {n}")]
    SizeCap { n: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    #[error("FFT imaginary residual {residual:e} exceeds tolerance {tol:e}")]
    ImaginaryResidual { residual: f64, tol: f64 },

    #[error("QL iteration failed to converge at index {0}")]
    NoConvergence(usize),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by the caller's inputs rather than the numerics.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::BandWidth { .. }
                | Error::InvalidDistribution(_)
                | Error::UnboundedSupport(_)
                | Error::EnumerationCap { .. }
                | Error::SizeCap { .. }
                | Error::InvalidArgument(_)
                | Error::NotSymmetric { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
