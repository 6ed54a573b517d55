use thiserror::Error;

/// Failure modes of the evaluation and verification routines.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the requested operation.
    #[error("domain error: {param} = {value} ({reason})")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// The unscaled result is larger than the largest finite double.
    #[error("overflow: unscaled {what} exceeds f64 range at nu = {nu}, u = {u}; use the scaled form")]
    Overflow { what: &'static str, nu: f64, u: f64 },
    /// The unscaled result is smaller than the smallest positive double.
    #[error("underflow: unscaled {what} is below f64 range at nu = {nu}, u = {u}; use the scaled form")]
    Underflow { what: &'static str, nu: f64, u: f64 },
    /// An iterative method ran out of iterations.
    #[error("{method} did not converge after {iterations} iterations")]
    NoConvergence { method: &'static str, iterations: usize },
    /// Quadrature stopped at the evaluation cap before meeting the tolerance.
    #[error("quadrature did not converge: value {value}, error estimate {abs_err} after {evaluations} evaluations")]
    Quadrature {
        value: f64,
        abs_err: f64,
        evaluations: usize,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(param: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain { param, value, reason }
}
