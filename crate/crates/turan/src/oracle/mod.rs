//! Slow extended-precision reference values for `I_nu`, `K_nu` and their
//! product.
//!
//! `I_nu` is the ascending series with a computed tail bound. `K_nu` comes
//! from `K_nu = (π/2)(I_{-nu} - I_nu)/sin(nu π)`; the subtraction cancels
//! roughly `2u log2(e)` bits, so the working precision adapts until the
//! error bound certifies the target digit count. Orders within `1e-8` of
//! an integer are handled by evaluating at `nu ± δ, ±2δ, ±4δ, ±8δ` and
//! Richardson-extrapolating the even function of `δ`.

mod big;
pub mod resolve;

use astro_float::BigFloat;
use turan_core::bessel::{FuncKind, OrderArg};
use turan_core::wide::Wide;

use big::{ascending, gamma, mag, Ctx};

/// Digits the adaptive precision loop aims for.
pub const TARGET_DIGITS: u32 = 40;
/// Fewer certified digits than this is an error.
pub const MIN_DIGITS: u32 = 30;
/// Distance to an integer order below which the perturbation path is used.
pub const NEAR_INTEGER: f64 = 1e-8;
/// Base perturbation of the order on that path.
pub const PERTURBATION: f64 = 1e-6;
/// Largest supported argument.
pub const U_MAX: f64 = 1000.0;

const BASE_BITS: usize = 192;
const MAX_ATTEMPTS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle domain error: {0}")]
    Domain(&'static str),
    #[error("oracle series did not converge within {0} terms")]
    NoConvergence(usize),
    #[error("oracle precision loss: only {digits} digits certified")]
    PrecisionLoss { digits: u32 },
}

/// An extended-precision reference value.
#[derive(Debug, Clone)]
pub struct OracleValue {
    pub value: BigFloat,
    pub certified_digits: u32,
    pub kind: FuncKind,
}

impl OracleValue {
    /// Nearest double; saturates outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        big::to_f64(&self.value)
    }

    pub fn to_wide(&self) -> Wide {
        big::to_wide(&self.value)
    }

    /// `|x - self| / |self|`.
    pub fn rel_diff(&self, x: Wide) -> f64 {
        let r = self.to_wide();
        x.sub(r).div(r).abs().to_f64()
    }

    /// Product with interval-style digit accounting.
    pub fn product(&self, other: &OracleValue, kind: FuncKind) -> OracleValue {
        let p = self
            .value
            .precision()
            .unwrap_or(BASE_BITS)
            .max(other.value.precision().unwrap_or(BASE_BITS));
        let value = self.value.mul(&other.value, p, big::RM);
        let digits = self.certified_digits.min(other.certified_digits).saturating_sub(1);
        OracleValue {
            value,
            certified_digits: digits,
            kind,
        }
    }
}

fn check(p: OrderArg) -> Result<(), OracleError> {
    if p.u() > U_MAX {
        return Err(OracleError::Domain("u must not exceed 1000"));
    }
    if p.nu() <= -20.0 {
        return Err(OracleError::Domain("nu must exceed -20"));
    }
    Ok(())
}

fn digits(v: &BigFloat, err: Wide, p: usize) -> u32 {
    let cap = (p as f64 * core::f64::consts::LOG10_2 - 2.0).max(0.0);
    if v.is_zero() {
        return 0;
    }
    if err.is_zero() {
        return cap as u32;
    }
    let d = (mag(v).ln_abs() - err.ln_abs()) / core::f64::consts::LN_10;
    libm::floor(d.min(cap)).max(0.0) as u32
}

fn round_bits(p: usize) -> usize {
    p.div_ceil(64) * 64
}

/// Runs `eval` at increasing precision until the bound certifies `target`
/// digits.
fn certified<F>(p0: usize, target: u32, mut eval: F) -> Result<(BigFloat, u32), OracleError>
where
    F: FnMut(&mut Ctx) -> Result<(BigFloat, Wide), OracleError>,
{
    let mut p = round_bits(p0);
    let mut best: Option<(BigFloat, u32)> = None;
    for _ in 0..MAX_ATTEMPTS {
        let mut ctx = Ctx::new(p);
        let (v, e) = eval(&mut ctx)?;
        let d = digits(&v, e, p);
        if d >= target {
            return Ok((v, d));
        }
        let deficit = f64::from(target - d) * 3.33;
        best = Some((v, d));
        p = round_bits(p + deficit as usize + 64);
    }
    let (v, d) = best.expect("at least one attempt");
    if d >= MIN_DIGITS {
        Ok((v, d))
    } else {
        Err(OracleError::PrecisionLoss { digits: d })
    }
}

struct Args {
    x: BigFloat,
    z: BigFloat,
    z_approx: f64,
    ln_x: BigFloat,
}

fn args(ctx: &mut Ctx, u: f64) -> Args {
    let x = ctx.f(0.5 * u);
    let z = ctx.mul(&x, &x);
    let ln_x = ctx.ln(&x);
    Args {
        x,
        z,
        z_approx: 0.25 * u * u,
        ln_x,
    }
}

/// `x^nu` with a relative error bound.
fn power(ctx: &mut Ctx, a: &Args, nu: &BigFloat, nu_approx: f64) -> (BigFloat, Wide) {
    let e = ctx.mul(nu, &a.ln_x);
    let v = ctx.exp(&e);
    let scale = (nu_approx * libm::log(big::to_f64(&a.x))).abs() * 2.0 + 4.0;
    (v, ctx.unit().scale(scale))
}

/// `sin(π a)` and `π a` with the relative error bound of the sine.
fn sin_pi(ctx: &mut Ctx, a: &BigFloat, a_approx: f64) -> (BigFloat, BigFloat, Wide) {
    let pi = ctx.pi();
    let pia = ctx.mul(&pi, a);
    let s = ctx.sin(&pia);
    let rel = ctx
        .unit()
        .scale(core::f64::consts::PI * a_approx.abs() + 4.0)
        .div(mag(&s));
    (s, pia, rel)
}

/// `I_nu(u)` with an absolute error bound.
fn i_value(ctx: &mut Ctx, nu: &BigFloat, nu_approx: f64, u: f64) -> Result<(BigFloat, Wide), OracleError> {
    if nu_approx < 0.0 && nu_approx == libm::round(nu_approx) {
        return i_value(ctx, &nu.neg(), -nu_approx, u);
    }
    let a = args(ctx, u);
    let abs_nu = nu.abs();
    let one = ctx.int(1);
    let s = ctx.add(&one, &abs_nu);
    let (g, dg) = gamma(ctx, &s, 1.0 + nu_approx.abs())?;
    let (rg, drg) = if nu_approx >= 0.0 {
        (ctx.div(&one, &g), dg.add(ctx.unit()))
    } else {
        let (sn, pia, ds) = sin_pi(ctx, &abs_nu, nu_approx);
        let rg = ctx.div(&ctx.mul(&g, &sn), &pia);
        (rg, dg.add(ds).add(ctx.unit().scale(4.0)))
    };
    let (xnu, dx) = power(ctx, &a, nu, nu_approx);
    let (sum, es) = ascending(ctx, nu, nu_approx, &a.z, a.z_approx)?;
    let lead = ctx.mul(&xnu, &rg);
    let v = ctx.mul(&lead, &sum);
    let rel = drg.add(dx).add(ctx.unit().scale(4.0));
    let err = mag(&v).mul(rel).add(mag(&lead).mul(es));
    Ok((v, err))
}

/// `K_a(u)` for `a > 0` away from integers, with an absolute error bound.
fn k_value(ctx: &mut Ctx, a_big: &BigFloat, a: f64, u: f64) -> Result<(BigFloat, Wide), OracleError> {
    let args = args(ctx, u);
    let one = ctx.int(1);
    let s = ctx.add(&one, a_big);
    let (g, dg) = gamma(ctx, &s, 1.0 + a)?;
    let (sn, pia, ds) = sin_pi(ctx, a_big, a);
    let unit = ctx.unit();

    let (xa, dx) = power(ctx, &args, a_big, a);
    let x_ma = ctx.div(&one, &xa);
    let (s_plus, e_plus) = ascending(ctx, a_big, a, &args.z, args.z_approx)?;
    let (s_minus, e_minus) = ascending(ctx, &a_big.neg(), -a, &args.z, args.z_approx)?;

    let lead_plus = ctx.div(&xa, &g);
    let i_plus = ctx.mul(&lead_plus, &s_plus);
    let rg_minus = ctx.div(&ctx.mul(&g, &sn), &pia);
    let lead_minus = ctx.mul(&x_ma, &rg_minus);
    let i_minus = ctx.mul(&lead_minus, &s_minus);

    let err_plus = mag(&i_plus)
        .mul(dg.add(dx).add(unit.scale(4.0)))
        .add(mag(&lead_plus).mul(e_plus));
    let err_minus = mag(&i_minus)
        .mul(dg.add(dx).add(ds).add(unit.scale(8.0)))
        .add(mag(&lead_minus).mul(e_minus));

    let pi = ctx.pi();
    let two = ctx.int(2);
    let factor = ctx.div(&pi, &ctx.mul(&two, &sn));
    let diff = ctx.sub(&i_minus, &i_plus);
    let k = ctx.mul(&factor, &diff);
    let err = mag(&factor)
        .mul(err_plus.add(err_minus).add(mag(&diff).mul(unit)))
        .add(mag(&k).mul(ds.add(unit.scale(4.0))));
    Ok((k, err))
}

fn k_initial_bits(u: f64) -> usize {
    BASE_BITS + (2.0 * u * core::f64::consts::LOG2_E) as usize + 32
}

/// Reference `I_nu(u)` from the ascending series.
pub fn oracle_i(p: OrderArg) -> Result<OracleValue, OracleError> {
    oracle_i_digits(p, TARGET_DIGITS)
}

/// [`oracle_i`] aiming for `digits` certified digits.
pub fn oracle_i_digits(p: OrderArg, digits: u32) -> Result<OracleValue, OracleError> {
    check(p)?;
    let (nu, u) = (p.nu(), p.u());
    let bits = BASE_BITS.max((f64::from(digits) * 3.33) as usize + 64);
    let (value, d) = certified(bits, digits, |ctx| {
        let nb = ctx.f(nu);
        i_value(ctx, &nb, nu, u)
    })?;
    Ok(OracleValue {
        value,
        certified_digits: d,
        kind: FuncKind::I,
    })
}

/// Reference `K_nu(u)` from the reflection formula.
pub fn oracle_k(p: OrderArg) -> Result<OracleValue, OracleError> {
    oracle_k_digits(p, TARGET_DIGITS)
}

/// [`oracle_k`] aiming for `digits` certified digits. Near-integer orders
/// are limited by the extrapolation to about 45 digits.
pub fn oracle_k_digits(p: OrderArg, digits: u32) -> Result<OracleValue, OracleError> {
    check(p)?;
    let a = p.nu().abs();
    let u = p.u();
    let n = libm::round(a);
    let (value, d) = if (a - n).abs() < NEAR_INTEGER {
        k_near_integer(a, u)?
    } else {
        let bits = k_initial_bits(u) + (f64::from(digits.saturating_sub(TARGET_DIGITS)) * 3.33) as usize;
        certified(bits, digits, |ctx| {
            let ab = ctx.f(a);
            k_value(ctx, &ab, a, u)
        })?
    };
    Ok(OracleValue {
        value,
        certified_digits: d,
        kind: FuncKind::K,
    })
}

/// Reference `P_nu(u) = I_nu(u) K_nu(u)`.
pub fn oracle_p(p: OrderArg) -> Result<OracleValue, OracleError> {
    let i = oracle_i(p)?;
    let k = oracle_k(p)?;
    Ok(i.product(&k, FuncKind::P))
}

/// Symmetric perturbation of the order plus four-level Richardson
/// extrapolation in `δ²`.
fn k_near_integer(a: f64, u: f64) -> Result<(BigFloat, u32), OracleError> {
    const LEVELS: usize = 4;
    let mut samples: Vec<BigFloat> = Vec::with_capacity(LEVELS);
    let mut min_digits = u32::MAX;
    let mut p_max = 0usize;
    for j in 0..LEVELS {
        let d = PERTURBATION * f64::from(1u32 << j);
        let (kp, dp) = certified(k_initial_bits(u) + 64, TARGET_DIGITS, |ctx| {
            let ab = ctx.add(&ctx.f(a), &ctx.f(d));
            k_value(ctx, &ab, a + d, u)
        })?;
        let (km, dm) = certified(k_initial_bits(u) + 64, TARGET_DIGITS, |ctx| {
            let ab = ctx.sub(&ctx.f(a), &ctx.f(d)).abs();
            k_value(ctx, &ab, (a - d).abs(), u)
        })?;
        min_digits = min_digits.min(dp).min(dm);
        p_max = p_max.max(kp.precision().unwrap_or(BASE_BITS));
        let sum = kp.add(&km, p_max, big::RM);
        samples.push(sum.div(&BigFloat::from_u64(2, p_max), p_max, big::RM));
    }
    let p = p_max;
    let mut table = samples;
    let mut last_change = Wide::ZERO;
    for level in 1..LEVELS {
        let f = BigFloat::from_u64(1u64 << (2 * level), p);
        let fm1 = BigFloat::from_u64((1u64 << (2 * level)) - 1, p);
        let next: Vec<BigFloat> = (0..table.len() - 1)
            .map(|j| {
                let num = f.mul(&table[j], p, big::RM).sub(&table[j + 1], p, big::RM);
                num.div(&fm1, p, big::RM)
            })
            .collect();
        last_change = mag(&next[0].sub(&table[0], p, big::RM));
        table = next;
    }
    let value = table.swap_remove(0);
    let trunc_digits = if last_change.is_zero() {
        min_digits
    } else {
        let d = (mag(&value).ln_abs() - last_change.ln_abs()) / core::f64::consts::LN_10;
        libm::floor(d).max(0.0) as u32
    };
    let digits = min_digits.saturating_sub(1).min(trunc_digits);
    if digits < MIN_DIGITS {
        return Err(OracleError::PrecisionLoss { digits });
    }
    Ok((value, digits))
}

/// `a b / m² - 1` for the midpoint log-convexity test, formed at the
/// working precision of the operands and rounded once to a double.
pub fn midpoint_slack(a: &OracleValue, b: &OracleValue, m: &OracleValue) -> f64 {
    let p = [a, b, m]
        .iter()
        .map(|v| v.value.precision().unwrap_or(BASE_BITS))
        .max()
        .unwrap_or(BASE_BITS);
    let num = a.value.mul(&b.value, p, big::RM);
    let den = m.value.mul(&m.value, p, big::RM);
    let q = num.div(&den, p, big::RM);
    let one = BigFloat::from_u64(1, p);
    big::to_f64(&q.sub(&one, p, big::RM))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn pt(nu: f64, u: f64) -> OrderArg {
        OrderArg::new(nu, u).unwrap()
    }

    #[test]
    fn half_order_series_matches_closed_form() {
        let i = oracle_i(pt(0.5, 1.0)).unwrap();
        let want = libm::sqrt(2.0 / PI) * libm::sinh(1.0);
        assert!(i.certified_digits >= MIN_DIGITS);
        assert!(i.rel_diff(Wide::new(want)) < 3e-16);
    }

    #[test]
    fn small_argument_limit() {
        let i = oracle_i(pt(0.0, 1e-300)).unwrap();
        assert_eq!(i.to_f64(), 1.0);
        assert!(i.certified_digits >= TARGET_DIGITS);
    }

    #[test]
    fn integer_k_by_extrapolation() {
        let k = oracle_k(pt(0.0, 1.0)).unwrap();
        assert!(k.certified_digits >= MIN_DIGITS, "{}", k.certified_digits);
        assert_eq!(k.to_f64(), 0.421_024_438_240_708_33);
        let k2 = oracle_k(pt(-2.0, 1.0)).unwrap();
        assert_eq!(k2.to_f64(), 1.624_838_898_635_177_4);
    }

    #[test]
    fn three_halves_k_closed_form() {
        let k = oracle_k(pt(1.5, 1.0)).unwrap();
        let want = 2.0 * libm::sqrt(PI / 2.0) * libm::exp(-1.0);
        assert!(k.rel_diff(Wide::new(want)) < 3e-16);
    }

    #[test]
    fn k_is_even_in_the_order() {
        let a = oracle_k(pt(3.7, 2.5)).unwrap();
        let b = oracle_k(pt(-3.7, 2.5)).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn wronskian_in_extended_precision() {
        for &(nu, u) in &[(0.375, 0.7), (-1.625, 4.0), (12.25, 30.0), (2.0, 1.0)] {
            let i0 = oracle_i(pt(nu, u)).unwrap();
            let i1 = oracle_i(pt(nu + 1.0, u)).unwrap();
            let k0 = oracle_k(pt(nu, u)).unwrap();
            let k1 = oracle_k(pt(nu + 1.0, u)).unwrap();
            let p = 256;
            let w = i0
                .value
                .mul(&k1.value, p, big::RM)
                .add(&i1.value.mul(&k0.value, p, big::RM), p, big::RM);
            let uw = w.mul(&BigFloat::from_f64(u, p), p, big::RM);
            let dev = uw.sub(&BigFloat::from_u64(1, p), p, big::RM);
            assert!(big::to_wide(&dev).abs().to_f64() < 1e-28, "nu={nu} u={u}");
        }
    }

    #[test]
    fn negative_orders_below_minus_one() {
        // I_{-3/2}(u) = sqrt(2/(πu)) (sinh u - cosh u / u)
        let u = 2.0;
        let i = oracle_i(pt(-1.5, u)).unwrap();
        let want = libm::sqrt(2.0 / (PI * u)) * (libm::sinh(u) - libm::cosh(u) / u);
        assert!(i.rel_diff(Wide::new(want)) < 5e-16);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(oracle_i(pt(1.0, 1500.0)), Err(OracleError::Domain(_))));
        assert!(matches!(oracle_k(pt(-20.0, 1.0)), Err(OracleError::Domain(_))));
    }

    #[test]
    fn product_has_fewer_digits() {
        let p = oracle_p(pt(0.5, 1.0)).unwrap();
        assert_eq!(p.kind, FuncKind::P);
        assert!(p.certified_digits >= MIN_DIGITS);
        // P_{1/2}(u) = (1 - e^{-2u}) / (2u)
        let want = (1.0 - libm::exp(-2.0)) / 2.0;
        assert!(p.rel_diff(Wide::new(want)) < 3e-16);
    }
}
