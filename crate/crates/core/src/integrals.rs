//! Integral representations checked against direct evaluation: the
//! `γ_nu` form of `K_{nu-1}/K_nu`, Nicholson's formula for `J² + Y²`,
//! and the `γ_nu` forms of `φ_nu` and `φ'_nu`.
//!
//! Here `γ_nu(t) = 1 / (t (J_nu²(t) + Y_nu²(t)))`.

use core::f64::consts::PI;

use crate::bessel::{self, OrderArg};
use crate::error::{domain, Result};
use crate::quad::{self, QuadResult, X_MIN};
use crate::special::rgamma;
use crate::turan;
use crate::verdict::InequalityVerdict;
use crate::wide::Wide;

const EPS: f64 = f64::EPSILON;

/// Tolerance handed to the quadrature, relative to the check tolerance.
const QUAD_SHARE: f64 = 1e-3;

fn quad_tol(tol: f64) -> f64 {
    (tol * QUAD_SHARE).max(quad::MIN_TOL)
}

fn verdict(label: &str, p: OrderArg, lhs: f64, rhs: f64, tol: f64, comb: f64) -> InequalityVerdict {
    let diff = ((lhs - rhs) / lhs).abs();
    InequalityVerdict::with_budget(label, p, tol.max(comb) - diff, 0.0)
}

fn gamma_or_nan(nu: f64, t: f64) -> f64 {
    bessel::gamma_nu(nu, t).unwrap_or(f64::NAN)
}

/// `∫_0^{X_MIN} t^{2nu-1+extra}` times the leading coefficient of `γ_nu`,
/// `π² / (Γ(nu)² 4^nu)`; `extra` is the power the rest of the integrand
/// adds at `t = 0`.
fn gamma_lower_tail(nu: f64, extra: f64) -> f64 {
    let g = rgamma(nu);
    let c = PI * PI * g * g / libm::pow(4.0, nu);
    let s = 2.0 * nu + extra;
    c * Wide::powf(X_MIN, s).to_f64() / s
}

fn check_order(nu: f64) -> Result<()> {
    if !(nu > 0.0 && nu <= bessel::JY_NU_MAX) {
        return Err(domain("nu", nu, "order must lie in (0, 10]"));
    }
    Ok(())
}

/// `(4/π²) ∫ γ_nu(t) / (u + t²) dt`, including the analytic part below
/// [`X_MIN`].
pub fn k_ratio_integral(nu: f64, u: f64, tol: f64) -> Result<QuadResult> {
    check_order(nu)?;
    let q = quad::exp_sinh(|t| gamma_or_nan(nu, t) / (u + t * t), tol)?;
    let tail = gamma_lower_tail(nu, 0.0) / u;
    let k = 4.0 / (PI * PI);
    Ok(QuadResult {
        value: k * (q.value + tail),
        abs_err_est: k * q.abs_err_est,
        evaluations: q.evaluations,
    })
}

/// `K_{nu-1}(√u) / (√u K_nu(√u))` against [`k_ratio_integral`].
pub fn k_ratio_integral_check(nu: f64, u: f64, tol: f64) -> Result<InequalityVerdict> {
    let s = libm::sqrt(u);
    let p = OrderArg::new(nu, u)?;
    let r = bessel::scaled_k(nu - 1.0, s)?.div(bessel::scaled_k(nu, s)?);
    let lhs = r.value.to_f64() / s;
    let q = k_ratio_integral(nu, u, quad_tol(tol))?;
    let comb = r.rel_err + 2.0 * EPS + q.abs_err_est / q.value.abs();
    Ok(verdict("gamma-ratio", p, lhs, q.value, tol, comb))
}

/// `(8/π²) ∫ K_0(2u sinh t) cosh(2 nu t) dt`.
///
/// `K_0` is taken scaled and `e^{±2 nu t - z}` reassembled, so the
/// integrand decays without overflow; it is zero once `z` leaves the
/// double range.
pub fn nicholson_integral(nu: f64, u: f64, tol: f64) -> Result<QuadResult> {
    if !(0.0..=5.0).contains(&nu) {
        return Err(domain("nu", nu, "order must lie in [0, 5]"));
    }
    let f = |t: f64| -> f64 {
        let z = 2.0 * u * libm::sinh(t);
        if !(z < 1e250) {
            return 0.0;
        }
        let Ok(sk) = bessel::scaled_k(0.0, z) else {
            return f64::NAN;
        };
        let e = libm::exp(2.0 * nu * t - z) + libm::exp(-2.0 * nu * t - z);
        0.5 * sk.value.to_f64() * e
    };
    let q = quad::exp_sinh(f, tol)?;
    let k = 8.0 / (PI * PI);
    Ok(QuadResult {
        value: k * q.value,
        abs_err_est: k * q.abs_err_est,
        evaluations: q.evaluations,
    })
}

/// `J_nu²(u) + Y_nu²(u)` from the direct evaluator against
/// [`nicholson_integral`].
pub fn nicholson_check(nu: f64, u: f64, tol: f64) -> Result<InequalityVerdict> {
    let p = OrderArg::new(nu, u)?;
    let (j, y) = bessel::eval_jy(p)?;
    let lhs = j.value * j.value + y.value * y.value;
    let lhs_err = 2.0 * j.abs_err_est / libm::hypot(j.value, y.value);
    let q = nicholson_integral(nu, u, quad_tol(tol))?;
    let comb = lhs_err + q.abs_err_est / q.value.abs();
    Ok(verdict("nicholson", p, lhs, q.value, tol, comb))
}

/// `-(4/π²) ∫ 2t² γ_nu(t) / (u² + t²)² dt`.
pub fn phi_integral(nu: f64, u: f64, tol: f64) -> Result<QuadResult> {
    check_order(nu)?;
    let u2 = u * u;
    let q = quad::exp_sinh(
        |t| {
            let d = u2 + t * t;
            2.0 * t * t * gamma_or_nan(nu, t) / (d * d)
        },
        tol,
    )?;
    let tail = 2.0 * gamma_lower_tail(nu, 2.0) / (u2 * u2);
    let k = -4.0 / (PI * PI);
    Ok(QuadResult {
        value: k * (q.value + tail),
        abs_err_est: -k * q.abs_err_est,
        evaluations: q.evaluations,
    })
}

/// `(32/π²) ∫ u t² γ_nu(t) / (u² + t²)³ dt`.
pub fn phi_prime_integral(nu: f64, u: f64, tol: f64) -> Result<QuadResult> {
    check_order(nu)?;
    let u2 = u * u;
    let q = quad::exp_sinh(
        |t| {
            let d = u2 + t * t;
            u * t * t * gamma_or_nan(nu, t) / (d * d * d)
        },
        tol,
    )?;
    let tail = u * gamma_lower_tail(nu, 2.0) / (u2 * u2 * u2);
    let k = 32.0 / (PI * PI);
    Ok(QuadResult {
        value: k * (q.value + tail),
        abs_err_est: k * q.abs_err_est,
        evaluations: q.evaluations,
    })
}

/// Tolerance for the `φ'` comparison, limited by the difference quotient.
pub const PHI_PRIME_TOL: f64 = 1e-6;

/// Two verdicts: direct `φ_nu(u)` against [`phi_integral`] to `tol`, and
/// a centred difference of direct `φ_nu` (step `u ε^{1/3}`) against
/// [`phi_prime_integral`] to [`PHI_PRIME_TOL`].
pub fn phi_integral_check(nu: f64, u: f64, tol: f64) -> Result<(InequalityVerdict, InequalityVerdict)> {
    let p = OrderArg::new(nu, u)?;
    let direct = turan::phi(p)?;
    let q = phi_integral(nu, u, quad_tol(tol))?;
    let comb = direct.err / direct.value.abs() + q.abs_err_est / q.value.abs();
    let v1 = verdict("phi", p, direct.value, q.value, tol, comb);

    let h = u * libm::cbrt(EPS);
    let hi = turan::phi(OrderArg::new(nu, u + h)?)?;
    let lo = turan::phi(OrderArg::new(nu, u - h)?)?;
    let fd = (hi.value - lo.value) / (2.0 * h);
    let fd_err = (hi.err + lo.err) / (2.0 * h);
    let q2 = phi_prime_integral(nu, u, quad_tol(PHI_PRIME_TOL))?;
    let comb2 = fd_err / fd.abs() + q2.abs_err_est / q2.value.abs();
    let v2 = verdict("phi-prime", p, fd, q2.value, PHI_PRIME_TOL, comb2);
    Ok((v1, v2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs()
    }

    #[test]
    fn constant_gamma_surrogate() {
        // ∫ 2t² (π/2) / (u² + t²)² dt = π²/(4u)
        for u in [0.5, 1.0, 3.0] {
            let q = quad::exp_sinh(|t| PI * t * t / ((u * u + t * t) * (u * u + t * t)), 1e-12).unwrap();
            assert!(close(q.value, PI * PI / (4.0 * u), 1e-12));
        }
    }

    #[test]
    fn half_order_exact_cases() {
        // K_{-1/2} = K_{1/2}, φ_{1/2}(u) = -1/u and J² + Y² = 2/(πu).
        for u in [0.1, 1.0, 4.0, 10.0] {
            assert!(close(
                k_ratio_integral(0.5, u, 1e-12).unwrap().value,
                1.0 / libm::sqrt(u),
                1e-11
            ));
            assert!(close(phi_integral(0.5, u, 1e-12).unwrap().value, -1.0 / u, 1e-11));
            assert!(close(
                nicholson_integral(0.5, u, 1e-12).unwrap().value,
                2.0 / (PI * u),
                1e-11
            ));
        }
        assert!(close(k_ratio_integral(1.5, 1.0, 1e-12).unwrap().value, 0.5, 1e-11));
    }

    #[test]
    fn reference_values() {
        // K_0(1)/K_1(1), φ_1(1) and φ'_1(1).
        let q = k_ratio_integral(1.0, 1.0, 1e-12).unwrap();
        assert!(close(q.value, 0.699_483_935_593_772_34, 1e-10));
        let q = phi_integral(1.0, 1.0, 1e-12).unwrap();
        assert!(close(q.value, -0.888_245_647_341_297_34, 1e-10));
        let q = phi_prime_integral(1.0, 1.0, 1e-12).unwrap();
        assert!(close(q.value, 0.757_372_877_647_342_69, 1e-10));
    }

    #[test]
    fn checks_pass() {
        for &(nu, u) in &[(1.0, 4.0), (0.01, 1.0), (2.5, 0.3), (10.0, 10.0), (0.3, 4.0)] {
            let v = k_ratio_integral_check(nu, u, 1e-8).unwrap();
            assert!(v.holds(), "gamma-ratio {nu} {u}: {}", v.slack);
            let (a, b) = phi_integral_check(nu, u.clamp(0.1, 10.0), 1e-8).unwrap();
            assert!(a.holds(), "phi {nu} {u}: {}", a.slack);
            assert!(b.holds(), "phi' {nu} {u}: {}", b.slack);
        }
        for &(nu, u) in &[(0.0, 1.0), (0.5, 1.0), (2.0, 0.1), (5.0, 0.1), (5.0, 10.0)] {
            let v = nicholson_check(nu, u, 1e-8).unwrap();
            assert!(v.holds(), "nicholson {nu} {u}: {}", v.slack);
        }
    }

    #[test]
    fn small_order_needs_the_tail() {
        let nu = 0.01;
        let with = k_ratio_integral(nu, 1.0, 1e-12).unwrap().value;
        let tail = 4.0 / (PI * PI) * gamma_lower_tail(nu, 0.0);
        assert!(tail > 1e-8 * with);
    }

    #[test]
    fn gamma_decreases_in_order() {
        for t in [0.1, 1.0, 3.0, 20.0] {
            let mut prev = f64::INFINITY;
            for k in 0..=20 {
                let g = bessel::gamma_nu(k as f64 * 0.5, t).unwrap();
                assert!(g < prev, "t={t}, nu={}", k as f64 * 0.5);
                prev = g;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn phi_signs(nu in 0.05f64..10.0, lu in -1.0f64..1.0) {
            let u = libm::pow(10.0, lu);
            prop_assert!(phi_integral(nu, u, 1e-10).unwrap().value < 0.0);
            prop_assert!(phi_prime_integral(nu, u, 1e-10).unwrap().value > 0.0);
        }
    }
}
