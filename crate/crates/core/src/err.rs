//! Error type shared by all modules.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the numerical pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument left the mathematical domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// A precondition on a field or configuration was violated.
    Precondition(&'static str),
    /// Adaptive quadrature stopped above its tolerance; the achieved
    /// error estimate is reported.
    QuadratureNonConverged { value: f64, error: f64, tol: f64 },
    /// An asymptotic fit had too little data or too poor a window.
    FitWindow(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => {
                write!(f, "domain error: {what} (got {value})")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::QuadratureNonConverged { value, error, tol } => write!(
                f,
                "quadrature did not converge: value {value}, error estimate {error} > tol {tol}"
            ),
            Error::FitWindow(msg) => write!(f, "fit window error: {msg}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}
