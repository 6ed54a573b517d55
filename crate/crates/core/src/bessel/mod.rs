//! Overflow-safe evaluation of `I_nu`, `K_nu`, their derivatives, and the
//! restricted-range `J_nu`, `Y_nu` for real order.

pub mod ik;
pub mod jy;

use core::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::wide::Wide;
pub use ik::Approx;

const EPS: f64 = f64::EPSILON;

/// Supported order window.
pub const NU_MIN: f64 = -20.0;
pub const NU_MAX: f64 = 100.0;
/// Window in which error estimates are validated against the oracle.
pub const VALIDATED_NU: (f64, f64) = (-1.0, 100.0);
pub const VALIDATED_U_UNSCALED: f64 = 700.0;
/// Window of the J/Y evaluator.
pub const JY_NU_MAX: f64 = 10.0;
pub const JY_U_MAX: f64 = 1e4;
/// Relative disagreement between the two recurrence forms of a derivative
/// above which the result is flagged.
pub const CANCELLATION_FLAG: f64 = 1e-10;

/// A validated evaluation point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderArg {
    nu: f64,
    u: f64,
}

impl OrderArg {
    pub fn new(nu: f64, u: f64) -> Result<OrderArg> {
        if !(u > 0.0) || !u.is_finite() {
            return Err(domain("u", u, "argument must be finite and positive"));
        }
        if !nu.is_finite() || !(NU_MIN..=NU_MAX).contains(&nu) {
            return Err(domain("nu", nu, "order must lie in [-20, 100]"));
        }
        Ok(OrderArg { nu, u })
    }

    pub fn nu(self) -> f64 {
        self.nu
    }

    pub fn u(self) -> f64 {
        self.u
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FuncKind {
    I,
    K,
    J,
    Y,
    P,
    ScaledI,
    ScaledK,
    /// `d/du I_nu(u)`
    DI,
    /// `d/du K_nu(u)`
    DK,
}

impl FuncKind {
    pub fn name(self) -> &'static str {
        match self {
            FuncKind::I => "I",
            FuncKind::K => "K",
            FuncKind::J => "J",
            FuncKind::Y => "Y",
            FuncKind::P => "P",
            FuncKind::ScaledI => "scaledI",
            FuncKind::ScaledK => "scaledK",
            FuncKind::DI => "dI",
            FuncKind::DK => "dK",
        }
    }
}

/// A double-precision function value with an error estimate.
///
/// `abs_err_est` is `f64::INFINITY` outside the validated window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FuncValue {
    pub kind: FuncKind,
    pub value: f64,
    pub abs_err_est: f64,
    /// `e^{-u} I` or `e^{u} K` convention.
    pub scaled: bool,
    /// Set on derivatives when the two recurrence forms disagree beyond
    /// [`CANCELLATION_FLAG`].
    pub cancellation: bool,
}

fn in_window_i(nu: f64) -> bool {
    (VALIDATED_NU.0..=VALIDATED_NU.1).contains(&nu)
}

fn in_window_k(nu: f64) -> bool {
    nu.abs() <= VALIDATED_NU.1
}

fn to_f64(w: Wide, what: &'static str, nu: f64, u: f64) -> Result<f64> {
    if !w.is_finite() {
        return Err(Error::Overflow { what, nu, u });
    }
    let v = w.to_f64();
    if v.is_infinite() {
        return Err(Error::Overflow { what, nu, u });
    }
    if !w.is_zero() && v.abs() < f64::MIN_POSITIVE {
        return Err(Error::Underflow { what, nu, u });
    }
    Ok(v)
}

fn func_value(kind: FuncKind, a: Approx, unscale: Option<f64>, validated: bool, nu: f64, u: f64) -> Result<FuncValue> {
    let what = kind.name();
    let (value, scaled) = match unscale {
        None => (to_f64(a.value, what, nu, u)?, true),
        Some(exponent) => {
            // Round the scaled value first so scaled·e^{±u} reproduces
            // the unscaled value.
            let factor = libm::exp(exponent);
            let s = a.value.to_f64();
            let direct = s * factor;
            let v = if factor.is_finite()
                && s.abs() >= f64::MIN_POSITIVE
                && direct.is_finite()
                && direct.abs() >= f64::MIN_POSITIVE
            {
                direct
            } else {
                to_f64(a.value.mul(Wide::exp(exponent)), what, nu, u)?
            };
            (v, false)
        }
    };
    let abs_err_est = if validated {
        (a.rel_err + 0.5 * EPS) * value.abs()
    } else {
        f64::INFINITY
    };
    Ok(FuncValue {
        kind,
        value,
        abs_err_est,
        scaled,
        cancellation: false,
    })
}

/// `e^{-u} I_nu(u)` with its relative error, no window check beyond `u > 0`.
pub fn scaled_i(nu: f64, u: f64) -> Result<Approx> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain("u", u, "argument must be finite and positive"));
    }
    ik::i_scaled(nu, u)
}

/// `e^{u} K_nu(u)` with its relative error; exactly even in `nu`.
pub fn scaled_k(nu: f64, u: f64) -> Result<Approx> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain("u", u, "argument must be finite and positive"));
    }
    ik::k_scaled(nu, u)
}

/// `P_nu(u) = I_nu(u) K_nu(u)` from scaled factors.
pub fn product(nu: f64, u: f64) -> Result<Approx> {
    Ok(scaled_i(nu, u)?.mul(scaled_k(nu, u)?))
}

/// `u I'_nu / I_nu = nu + u I_{nu+1}/I_nu`.
pub fn i_log_derivative(nu: f64, u: f64) -> Result<(f64, f64)> {
    let r = scaled_i(nu + 1.0, u)?.div(scaled_i(nu, u)?);
    let t = u * r.value.to_f64();
    let v = nu + t;
    let err = t.abs() * (r.rel_err + EPS) + EPS * v.abs();
    Ok((v, err))
}

/// `u K'_nu / K_nu = -|nu| - u K_{|nu|-1}/K_{|nu|}`.
pub fn k_log_derivative(nu: f64, u: f64) -> Result<(f64, f64)> {
    let a = nu.abs();
    let r = scaled_k(a - 1.0, u)?.div(scaled_k(a, u)?);
    let t = u * r.value.to_f64();
    let v = -a - t;
    let err = t.abs() * (r.rel_err + EPS) + EPS * v.abs();
    Ok((v, err))
}

/// `I_nu(u)`, or `e^{-u} I_nu(u)` when `scaled`.
pub fn eval_i(p: OrderArg, scaled: bool) -> Result<FuncValue> {
    let a = scaled_i(p.nu, p.u)?;
    let validated = in_window_i(p.nu) && (scaled || p.u <= VALIDATED_U_UNSCALED);
    if scaled {
        func_value(FuncKind::ScaledI, a, None, validated, p.nu, p.u)
    } else {
        func_value(FuncKind::I, a, Some(p.u), validated, p.nu, p.u)
    }
}

/// `K_nu(u)`, or `e^{u} K_nu(u)` when `scaled`.
pub fn eval_k(p: OrderArg, scaled: bool) -> Result<FuncValue> {
    let a = scaled_k(p.nu, p.u)?;
    let validated = in_window_k(p.nu) && (scaled || p.u <= VALIDATED_U_UNSCALED);
    if scaled {
        func_value(FuncKind::ScaledK, a, None, validated, p.nu, p.u)
    } else {
        func_value(FuncKind::K, a, Some(-p.u), validated, p.nu, p.u)
    }
}

/// `e^{-u} I'_nu(u)` by the recurrence without cancellation for the sign
/// of `nu`, together with the other recurrence form.
pub fn scaled_di(nu: f64, u: f64) -> Result<(Approx, Approx)> {
    let mid = scaled_i(nu, u)?.scale(nu / u);
    let up = scaled_i(nu + 1.0, u)?;
    let down = scaled_i(nu - 1.0, u)?;
    let plus_form = up.add(mid); // I_{nu+1} + (nu/u) I_nu
    let minus_form = down.add(Approx::new(mid.value.neg(), mid.rel_err)); // I_{nu-1} - (nu/u) I_nu
    if nu >= 0.0 {
        Ok((plus_form, minus_form))
    } else {
        Ok((minus_form, plus_form))
    }
}

/// `e^{u} K'_nu(u)`; both forms as in [`scaled_di`]. Even in `nu`.
pub fn scaled_dk(nu: f64, u: f64) -> Result<(Approx, Approx)> {
    let a = nu.abs();
    let mid = scaled_k(a, u)?.scale(a / u);
    let up = scaled_k(a + 1.0, u)?;
    let down = scaled_k(a - 1.0, u)?;
    // -K_{a-1} - (a/u) K_a and -K_{a+1} + (a/u) K_a
    let minus_form = down.add(mid);
    let plus_form = up.add(Approx::new(mid.value.neg(), mid.rel_err));
    Ok((
        Approx::new(minus_form.value.neg(), minus_form.rel_err),
        Approx::new(plus_form.value.neg(), plus_form.rel_err),
    ))
}

fn disagree(a: Approx, b: Approx) -> bool {
    let d = a.value.sub(b.value).abs();
    let bound = a.value.abs().scale(CANCELLATION_FLAG);
    d.cmp_abs(bound) == core::cmp::Ordering::Greater
}

/// `I'_nu(u)`; requires `nu >= -19`.
pub fn eval_di(p: OrderArg) -> Result<FuncValue> {
    if p.nu < NU_MIN + 1.0 {
        return Err(domain("nu", p.nu, "derivative of I needs nu >= -19"));
    }
    let (main, alt) = scaled_di(p.nu, p.u)?;
    let validated = in_window_i(p.nu - 1.0) && p.u <= VALIDATED_U_UNSCALED;
    let mut v = func_value(FuncKind::DI, main, Some(p.u), validated, p.nu, p.u)?;
    v.cancellation = disagree(main, alt);
    Ok(v)
}

/// `K'_nu(u)`, always negative.
pub fn eval_dk(p: OrderArg) -> Result<FuncValue> {
    let (main, alt) = scaled_dk(p.nu, p.u)?;
    let validated = in_window_k(p.nu) && p.u <= VALIDATED_U_UNSCALED;
    let mut v = func_value(FuncKind::DK, main, Some(-p.u), validated, p.nu, p.u)?;
    v.cancellation = disagree(main, alt);
    Ok(v)
}

/// `(J_nu(u), Y_nu(u))` for `nu` in `[0, 10]`, `u` in `(0, 1e4]`.
///
/// The error estimate refers to the modulus `J² + Y²`; individual values
/// near their zeros carry larger relative error.
pub fn eval_jy(p: OrderArg) -> Result<(FuncValue, FuncValue)> {
    if !(0.0..=JY_NU_MAX).contains(&p.nu) {
        return Err(domain("nu", p.nu, "J/Y order must lie in [0, 10]"));
    }
    if p.u > JY_U_MAX || p.u < 1e-300 {
        return Err(domain("u", p.u, "J/Y argument must lie in [1e-300, 1e4]"));
    }
    let (j, y) = jy::jy(p.nu, p.u)?;
    let jv = to_f64(j, "J", p.nu, p.u).or_else(|e| match e {
        Error::Underflow { .. } => Ok(0.0),
        other => Err(other),
    })?;
    let yv = to_f64(y, "Y", p.nu, p.u)?;
    let modulus = libm::hypot(jv, yv);
    let err = 1e-12 * modulus;
    let mk = |kind, value| FuncValue {
        kind,
        value,
        abs_err_est: err,
        scaled: false,
        cancellation: false,
    };
    Ok((mk(FuncKind::J, jv), mk(FuncKind::Y, yv)))
}

/// `γ_nu(t) = 1 / (t (J_nu²(t) + Y_nu²(t)))` for `nu` in `[0, 10]`, any `t > 0`.
pub fn gamma_nu(nu: f64, t: f64) -> Result<f64> {
    if !(0.0..=JY_NU_MAX).contains(&nu) {
        return Err(domain("nu", nu, "J/Y order must lie in [0, 10]"));
    }
    if !(t > 0.0) {
        return Err(domain("t", t, "must be positive"));
    }
    if t.is_infinite() {
        return Ok(PI / 2.0);
    }
    if t < 1e-280 {
        // Y dominates: γ ≈ π² t^{2ν-1} / (Γ(ν)² 4^ν).
        if nu == 0.0 {
            let l = libm::log(0.5 * t) + 0.577_215_664_901_532_9;
            return Ok(PI * PI / (4.0 * t * l * l));
        }
        let g = crate::special::rgamma(nu);
        let w = Wide::powf(t, 2.0 * nu - 1.0)
            .scale(PI * PI * g * g)
            .div(Wide::powf(4.0, nu));
        return Ok(w.to_f64());
    }
    let m = jy::modulus(nu, t)?;
    Ok(m.scale(t).recip().to_f64())
}

/// Residuals of the cross-check identities at one point.
///
/// Each recurrence residual is relative to the largest term of its
/// identity, so a near-zero left-hand side does not inflate it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    /// `|u (I_nu K_{nu+1} + I_{nu+1} K_nu) - 1|`
    pub wronskian: f64,
    /// `I_{nu-1} = (nu/u) I_nu + I'_nu`
    pub r1: f64,
    /// `K_{nu-1} = -(nu/u) K_nu - K'_nu`
    pub r2: f64,
    /// `K_{nu+1} = -K'_nu + (nu/u) K_nu`
    pub r3: f64,
}

fn residual(terms: [Wide; 3]) -> f64 {
    let sum = terms[0].add(terms[1]).add(terms[2]);
    let big = terms
        .iter()
        .map(|t| t.abs())
        .fold(Wide::ZERO, |m, t| if t.cmp_abs(m).is_gt() { t } else { m });
    if big.is_zero() {
        return 0.0;
    }
    sum.div(big).abs().to_f64()
}

/// Evaluates [`Residuals`] from scaled values, so the exponentials cancel.
pub fn residuals(nu: f64, u: f64) -> Result<Residuals> {
    let i0 = scaled_i(nu, u)?.value;
    let i1 = scaled_i(nu + 1.0, u)?.value;
    let im = scaled_i(nu - 1.0, u)?.value;
    let k0 = scaled_k(nu, u)?.value;
    let k1 = scaled_k(nu + 1.0, u)?.value;
    let km = scaled_k(nu - 1.0, u)?.value;
    let di = scaled_di(nu, u)?.0.value;
    let dk = scaled_dk(nu, u)?.0.value;
    let w = i0.mul(k1).add(i1.mul(k0)).scale(u);
    let wronskian = w.sub(Wide::ONE).abs().to_f64();
    let c = nu / u;
    Ok(Residuals {
        wronskian,
        r1: residual([im, i0.scale(-c), di.neg()]),
        r2: residual([km, k0.scale(c), dk]),
        r3: residual([k1, dk, k0.scale(-c)]),
    })
}
