//! Closed-form bounds for `I_nu/I_{nu-1}`, `K_nu/K_{nu-1}` and the
//! logarithmic derivatives `u I'/I`, `u K'/K`.
//!
//! A side that is not valid at the requested order is `-inf` (lower) or
//! `+inf` (upper), so containment tests need no special casing.

use alloc::vec::Vec;

use crate::bessel::{self, OrderArg};
use crate::error::{domain, Result};
use crate::verdict::InequalityVerdict;

const EPS: f64 = f64::EPSILON;

/// Orders in `(1, 1 + NEAR_ONE]` get no `(l4)`/`(b4)` side: `ν/(ν-1)` blows up.
pub const NEAR_ONE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetKind {
    /// `I_nu / I_{nu-1}`
    IRatio,
    /// `K_nu / K_{nu-1}`
    KRatio,
    /// `u I'_nu / I_nu`
    ILogDeriv,
    /// `u K'_nu / K_nu`
    KLogDeriv,
}

impl TargetKind {
    pub const ALL: [TargetKind; 4] = [
        TargetKind::IRatio,
        TargetKind::KRatio,
        TargetKind::ILogDeriv,
        TargetKind::KLogDeriv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TargetKind::IRatio => "I_ratio",
            TargetKind::KRatio => "K_ratio",
            TargetKind::ILogDeriv => "I_logderiv",
            TargetKind::KLogDeriv => "K_logderiv",
        }
    }

    /// Labels of the (lower, upper) inequalities.
    pub fn labels(self) -> (&'static str, &'static str) {
        match self {
            TargetKind::IRatio => ("l1", "l3"),
            TargetKind::KRatio => ("l4", "l2"),
            TargetKind::ILogDeriv => ("b3", "b1"),
            TargetKind::KLogDeriv => ("b4", "b2"),
        }
    }

    /// Whether the lower side is a valid inequality at order `nu`.
    ///
    /// `(l1)` and `(b3)` are restricted to `nu >= 0`: for `nu` in `(-1, 0)`
    /// `I_{nu-1}` is negative at small `u` and `u I'/I < 0`, so neither
    /// holds literally there.
    pub fn lower_applies(self, nu: f64) -> bool {
        match self {
            TargetKind::IRatio | TargetKind::ILogDeriv => nu >= 0.0,
            TargetKind::KRatio | TargetKind::KLogDeriv => nu > 1.0 + NEAR_ONE,
        }
    }

    /// Whether the upper side is a valid inequality at order `nu`.
    pub fn upper_applies(self, nu: f64) -> bool {
        match self {
            TargetKind::IRatio => nu > 0.0,
            TargetKind::ILogDeriv => nu > -1.0,
            TargetKind::KRatio | TargetKind::KLogDeriv => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichInterval {
    pub lower: f64,
    pub upper: f64,
    pub target_kind: TargetKind,
    /// Both sides are valid at this order.
    pub domain_ok: bool,
}

impl SandwichInterval {
    fn new(kind: TargetKind, nu: f64, lower: f64, upper: f64) -> SandwichInterval {
        let lower = if kind.lower_applies(nu) {
            lower
        } else {
            f64::NEG_INFINITY
        };
        let upper = if kind.upper_applies(nu) { upper } else { f64::INFINITY };
        SandwichInterval {
            lower,
            upper,
            target_kind: kind,
            domain_ok: kind.lower_applies(nu) && kind.upper_applies(nu),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }
}

/// `(l1)` lower `(-ν + √(u²+ν²))/u` and `(l3)` upper
/// `(-ν + √(c u² + ν²))/(c u)` with `c = ν/(ν+1)`.
pub fn i_ratio_bounds(p: OrderArg) -> SandwichInterval {
    let (nu, u) = (p.nu(), p.u());
    let lower = l1(nu, u);
    let upper = if nu > 0.0 {
        let c = nu / (nu + 1.0);
        u / (nu + libm::hypot(u * libm::sqrt(c), nu))
    } else {
        f64::INFINITY
    };
    SandwichInterval::new(TargetKind::IRatio, nu, lower, upper)
}

/// `(l1)` in a form without cancellation for either sign of `nu`.
pub fn l1(nu: f64, u: f64) -> f64 {
    let s = libm::hypot(u, nu);
    if nu >= 0.0 {
        u / (nu + s)
    } else {
        (s - nu) / u
    }
}

/// `(l2)` upper `(ν + √(u²+ν²))/u` and `(l4)` lower
/// `(ν + √(c u² + ν²))/(c u)` with `c = ν/(ν-1)`, `ν > 1`.
pub fn k_ratio_bounds(p: OrderArg) -> SandwichInterval {
    let (nu, u) = (p.nu(), p.u());
    let s = libm::hypot(u, nu);
    let upper = if nu >= 0.0 { (nu + s) / u } else { u / (s - nu) };
    let lower = if nu > 1.0 + NEAR_ONE {
        let c = nu / (nu - 1.0);
        (nu + libm::hypot(u * libm::sqrt(c), nu)) / (c * u)
    } else {
        f64::NEG_INFINITY
    };
    SandwichInterval::new(TargetKind::KRatio, nu, lower, upper)
}

/// `(b1)` upper `√(u²+ν²)` and `(b3)` lower `√(u² ν/(ν+1) + ν²)`.
pub fn i_logderiv_bounds(p: OrderArg) -> SandwichInterval {
    let (nu, u) = (p.nu(), p.u());
    let upper = libm::hypot(u, nu);
    let lower = if nu >= 0.0 {
        libm::hypot(u * libm::sqrt(nu / (nu + 1.0)), nu)
    } else {
        f64::NEG_INFINITY
    };
    SandwichInterval::new(TargetKind::ILogDeriv, nu, lower, upper)
}

/// The `(b3)` expression where it is real, for any `nu > -1`; `None` where
/// the radicand is negative.
pub fn b3_literal(nu: f64, u: f64) -> Option<f64> {
    let r = u * u * nu / (nu + 1.0) + nu * nu;
    (r >= 0.0).then(|| libm::sqrt(r))
}

/// `(b2)` upper `-√(u²+ν²)` and `(b4)` lower `-√(u² ν/(ν-1) + ν²)`.
pub fn k_logderiv_bounds(p: OrderArg) -> SandwichInterval {
    let (nu, u) = (p.nu(), p.u());
    let upper = -libm::hypot(u, nu);
    let lower = if nu > 1.0 + NEAR_ONE {
        -libm::hypot(u * libm::sqrt(nu / (nu - 1.0)), nu)
    } else {
        f64::NEG_INFINITY
    };
    SandwichInterval::new(TargetKind::KLogDeriv, nu, lower, upper)
}

pub fn bounds(kind: TargetKind, p: OrderArg) -> SandwichInterval {
    match kind {
        TargetKind::IRatio => i_ratio_bounds(p),
        TargetKind::KRatio => k_ratio_bounds(p),
        TargetKind::ILogDeriv => i_logderiv_bounds(p),
        TargetKind::KLogDeriv => k_logderiv_bounds(p),
    }
}

/// The bounded quantity and an absolute error estimate for it.
pub fn target_value(kind: TargetKind, p: OrderArg) -> Result<(f64, f64)> {
    let (nu, u) = (p.nu(), p.u());
    match kind {
        TargetKind::IRatio => {
            if nu - 1.0 < bessel::NU_MIN {
                return Err(domain("nu", nu, "I ratio needs nu >= -19"));
            }
            let r = bessel::scaled_i(nu, u)?.div(bessel::scaled_i(nu - 1.0, u)?);
            let v = r.value.to_f64();
            Ok((v, r.rel_err * v.abs()))
        }
        TargetKind::KRatio => {
            let r = bessel::scaled_k(nu, u)?.div(bessel::scaled_k(nu - 1.0, u)?);
            let v = r.value.to_f64();
            Ok((v, r.rel_err * v.abs()))
        }
        TargetKind::ILogDeriv => bessel::i_log_derivative(nu, u),
        TargetKind::KLogDeriv => bessel::k_log_derivative(nu, u),
    }
}

/// Verdicts for every side of the sandwich that applies at `p`, oriented
/// so positive slack means the bound holds.
pub fn sandwich_verdicts(kind: TargetKind, p: OrderArg) -> Result<Vec<InequalityVerdict>> {
    let b = bounds(kind, p);
    let (v, err) = target_value(kind, p)?;
    let (lo_label, hi_label) = kind.labels();
    let mut out = Vec::with_capacity(2);
    if b.lower.is_finite() {
        let e = err + 4.0 * EPS * b.lower.abs();
        out.push(InequalityVerdict::new(lo_label, p, v - b.lower, e));
    }
    if b.upper.is_finite() {
        let e = err + 4.0 * EPS * b.upper.abs();
        out.push(InequalityVerdict::new(hi_label, p, b.upper - v, e));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(nu: f64, u: f64) -> OrderArg {
        OrderArg::new(nu, u).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn half_order_i_ratio() {
        let b = i_ratio_bounds(pt(0.5, 1.0));
        assert!(close(b.lower, libm::sqrt(1.25) - 0.5, 1e-15));
        assert!(close(b.upper, (libm::sqrt(1.0 / 3.0 + 0.25) - 0.5) * 3.0, 1e-15));
        assert!(b.domain_ok && b.contains(libm::tanh(1.0)));
        let (v, _) = target_value(TargetKind::IRatio, pt(0.5, 1.0)).unwrap();
        assert!(close(v, libm::tanh(1.0), 1e-15));
    }

    #[test]
    fn i_ratio_at_two_three() {
        let b = i_ratio_bounds(pt(2.0, 3.0));
        let (v, _) = target_value(TargetKind::IRatio, pt(2.0, 3.0)).unwrap();
        assert!(close(b.lower, (libm::sqrt(13.0) - 2.0) / 3.0, 1e-15));
        assert!(close(b.upper, (libm::sqrt(10.0) - 2.0) / 2.0, 1e-15));
        // I_2(3)/I_1(3)
        assert!(close(v, 0.567_923_649_307_266_4, 1e-14));
        assert!(b.contains(v));
    }

    #[test]
    fn k_ratio_closed_forms() {
        let b = k_ratio_bounds(pt(0.5, 1.0));
        assert!(!b.domain_ok && b.lower == f64::NEG_INFINITY);
        assert!(close(b.upper, 0.5 + libm::sqrt(1.25), 1e-15));
        let b = k_ratio_bounds(pt(1.5, 1.0));
        assert!(close(b.upper, 1.5 + libm::sqrt(3.25), 1e-15));
        assert!(close(b.lower, (1.5 + libm::sqrt(5.25)) / 3.0, 1e-15));
        let (v, _) = target_value(TargetKind::KRatio, pt(1.5, 1.0)).unwrap();
        assert!(close(v, 2.0, 1e-15) && b.contains(v));
    }

    #[test]
    fn logderiv_closed_forms() {
        let (v, _) = target_value(TargetKind::ILogDeriv, pt(0.5, 1.0)).unwrap();
        assert!(close(v, 1.0 / libm::tanh(1.0) - 0.5, 1e-15));
        assert!(i_logderiv_bounds(pt(0.5, 1.0)).contains(v));
        let b = i_logderiv_bounds(pt(0.0, 1.0));
        assert_eq!((b.lower, b.upper), (0.0, 1.0));
        let (v, _) = target_value(TargetKind::KLogDeriv, pt(0.5, 1.0)).unwrap();
        assert!(close(v, -1.5, 1e-15));
        assert!(k_logderiv_bounds(pt(0.5, 1.0)).contains(v));
        let b = k_logderiv_bounds(pt(2.0, 1.0));
        assert!(close(b.lower, -libm::sqrt(6.0), 1e-15));
        assert!(close(b.upper, -libm::sqrt(5.0), 1e-15));
        let (v, _) = target_value(TargetKind::KLogDeriv, pt(2.0, 1.0)).unwrap();
        assert!(close(v, -2.370_441_174_631_418, 1e-14) && b.contains(v));
    }

    #[test]
    fn near_one_has_no_lower_side() {
        let b = k_ratio_bounds(pt(1.0 + 5e-7, 1.0));
        assert!(!b.domain_ok && b.lower == f64::NEG_INFINITY);
        let b = k_logderiv_bounds(pt(1.0 + 5e-7, 1.0));
        assert!(!b.domain_ok && b.lower == f64::NEG_INFINITY);
        assert!(k_logderiv_bounds(pt(1.0 + 2e-6, 1.0)).domain_ok);
    }

    #[test]
    fn small_argument_bounds_meet() {
        // Both sides tend to u/(2ν); their gap is O(u³), O(u²) relative.
        let nu = 1.0;
        let mut prev: Option<f64> = None;
        for &u in &[1e-2, 1e-3, 1e-4] {
            let b = i_ratio_bounds(pt(nu, u));
            let lead = u / (2.0 * nu);
            assert!(close(b.lower, lead, 1e-3 * u / 1e-3) && close(b.upper, lead, 1e-3 * u / 1e-3));
            let gap = (b.upper - b.lower) / lead;
            if let Some(g) = prev {
                let rate = libm::log10(g / gap);
                assert!((rate - 2.0).abs() < 0.05, "relative gap order {rate}");
            }
            prev = Some(gap);
        }
    }

    #[test]
    fn literal_l1_and_b3_fail_below_zero() {
        // ν = -1/2, small u: I_{-3/2} < 0 and u I'/I < 0.
        let p = pt(-0.5, 0.1);
        let (ratio, _) = target_value(TargetKind::IRatio, p).unwrap();
        assert!(ratio < 0.0 && ratio < l1(-0.5, 0.1));
        let (y, _) = target_value(TargetKind::ILogDeriv, p).unwrap();
        assert!(y < b3_literal(-0.5, 0.1).unwrap());
        assert!(sandwich_verdicts(TargetKind::IRatio, p).unwrap().is_empty());
    }

    #[test]
    fn bound_hierarchy_half_order_y() {
        // uI'/I for ν = 1/2 is u coth u - 1/2.
        for &u in &[1e-3, 0.1, 1.0, 10.0, 300.0] {
            let y = u / libm::tanh(u) - 0.5;
            let b = i_logderiv_bounds(pt(0.5, u));
            assert!(b.contains(y) || (y - b.lower).abs() < 1e-15 * y, "u={u}");
        }
    }

    proptest! {
        #[test]
        fn sandwiches_hold(nu in 0.0f64..40.0, lu in -3.0f64..2.7) {
            let p = pt(nu, libm::pow(10.0, lu));
            for kind in TargetKind::ALL {
                for v in sandwich_verdicts(kind, p).unwrap() {
                    prop_assert!(!v.fails(), "{:?} {:?}", kind, v);
                }
            }
        }

        #[test]
        fn k_sandwich_for_negative_orders(nu in -20.0f64..0.0, lu in -3.0f64..2.7) {
            let p = pt(nu, libm::pow(10.0, lu));
            for kind in [TargetKind::KRatio, TargetKind::KLogDeriv] {
                for v in sandwich_verdicts(kind, p).unwrap() {
                    prop_assert!(!v.fails(), "{:?} {:?}", kind, v);
                }
            }
        }
    }
}
