//! Shared error type.

use std::fmt;

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid parameter values (nonpositive scales, bad exponents, ...).
    InvalidParameter(String),
    /// Result not representable (overflow, series cap exceeded).
    Range(String),
    /// Operation undefined in the requested regime (e.g. Gaussian decay
    /// has no algebraic exponent).
    Mode(String),
    /// Quadrature or iteration failed to meet the accuracy target; carries
    /// the best available estimate and its error bound (as `f64`).
    Accuracy {
        message: String,
        best: f64,
        err_est: f64,
    },
    /// A structural invariant was violated by the inputs.
    Invariant(String),
    /// A documented precondition was violated.
    Precondition(String),
    /// Matrix too ill-conditioned to trust.
    Conditioning(String),
    /// Iterative scheme did not converge.
    Convergence(String),
    /// Constraints removed every degree of freedom.
    EmptyProblem(String),
    /// Requested combination is not supported.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            Error::Range(m) => write!(f, "range error: {m}"),
            Error::Mode(m) => write!(f, "mode error: {m}"),
            Error::Accuracy {
                message,
                best,
                err_est,
            } => write!(
                f,
                "accuracy error: {message} (best estimate {best:e}, err_est {err_est:e})"
            ),
            Error::Invariant(m) => write!(f, "invariant violation: {m}"),
            Error::Precondition(m) => write!(f, "precondition violation: {m}"),
            Error::Conditioning(m) => write!(f, "conditioning error: {m}"),
            Error::Convergence(m) => write!(f, "convergence error: {m}"),
            Error::EmptyProblem(m) => write!(f, "empty problem: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
