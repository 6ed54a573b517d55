//! Read-only record of the precision constants used across the crate.

use crate::bessel;
use crate::quad;
use crate::verdict;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Precision {
    /// Target relative error of `I`, `K` and `P` in the validated window.
    pub rel_target: f64,
    /// Bound on the Wronskian residual.
    pub wronskian: f64,
    /// Bound on the recurrence residuals.
    pub recurrence: f64,
    /// Relative disagreement that flags a derivative.
    pub cancellation_flag: f64,
    /// Relative error target of the J/Y modulus.
    pub jy_modulus: f64,
    /// Multiple of the combined error estimate that forms the deadband.
    pub deadband_factor: f64,
    /// Smallest tolerance accepted by the quadrature engine.
    pub quad_min_tol: f64,
    /// Evaluation cap of the quadrature engine.
    pub quad_max_evals: usize,
}

pub const PRECISION: Precision = Precision {
    rel_target: 1e-12,
    wronskian: 5e-13,
    recurrence: 1e-12,
    cancellation_flag: bessel::CANCELLATION_FLAG,
    jy_modulus: 1e-10,
    deadband_factor: verdict::DEADBAND_FACTOR,
    quad_min_tol: quad::MIN_TOL,
    quad_max_evals: quad::MAX_EVALS,
};
