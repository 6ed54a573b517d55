//! Big-float plumbing for the oracle: a precision context, conversions to
//! [`Wide`], the gamma function, and the ascending Bessel series, each
//! returning a rigorous error bound next to the value.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use turan_core::wide::Wide;

use super::OracleError;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;
pub(crate) const MAX_TERMS: usize = 100_000;

pub(crate) struct Ctx {
    pub p: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(p: usize) -> Ctx {
        let cc = Consts::new().expect("constant cache allocation");
        Ctx { p, cc }
    }

    /// `2^-p`, the unit roundoff of this context.
    pub fn unit(&self) -> Wide {
        Wide::from_parts(1.0, -(self.p as i64))
    }

    pub fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    pub fn int(&self, k: u64) -> BigFloat {
        BigFloat::from_u64(k, self.p)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }

    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.p, RM, &mut self.cc)
    }
}

/// Nearest-ish [`Wide`] (top 64 mantissa bits rounded to 53).
pub fn to_wide(b: &BigFloat) -> Wide {
    if b.is_zero() {
        return Wide::ZERO;
    }
    match b.as_raw_parts() {
        Some((words, _, sign, e, _)) => {
            let top = *words.last().expect("non-empty mantissa");
            let m = top as f64 / 18_446_744_073_709_551_616.0;
            let m = if sign == Sign::Neg { -m } else { m };
            Wide::from_parts(m, i64::from(e))
        }
        None => {
            if b.is_nan() {
                Wide::new(f64::NAN)
            } else if b.is_inf_neg() {
                Wide::new(f64::NEG_INFINITY)
            } else {
                Wide::new(f64::INFINITY)
            }
        }
    }
}

/// Correctly rounded double (ties to even), saturating outside the f64 range.
pub fn to_f64(b: &BigFloat) -> f64 {
    let Some((words, _, sign, e, _)) = b.as_raw_parts() else {
        return to_wide(b).to_f64();
    };
    if b.is_zero() {
        return 0.0;
    }
    let (top, rest) = words.split_last().expect("non-empty mantissa");
    let mut q = top >> 11;
    let rem = top & 0x7ff;
    let sticky = rest.iter().any(|&w| w != 0);
    if rem > 0x400 || (rem == 0x400 && (sticky || q & 1 == 1)) {
        q += 1;
    }
    let v = libm::ldexp(q as f64, e - 53);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `|w|` for a big float as a [`Wide`], rounded up a little.
pub fn mag(b: &BigFloat) -> Wide {
    to_wide(b).abs().scale(1.0 + 1e-15)
}

/// `Γ(s)` for `s >= 1` with a relative error bound.
///
/// Lower incomplete gamma series `γ(s, N) = N^s e^{-N} Σ N^k / (s)_{k+1}`
/// with `N` chosen so that the discarded upper part `Γ(s, N)` is below
/// the working precision.
pub fn gamma(ctx: &mut Ctx, s: &BigFloat, s_approx: f64) -> Result<(BigFloat, Wide), OracleError> {
    debug_assert!(s_approx >= 1.0);
    let bits = ctx.p as f64 + 16.0;
    let lg = libm::lgamma(s_approx);
    let mut n = bits * core::f64::consts::LN_2 + s_approx;
    for _ in 0..8 {
        n = bits * core::f64::consts::LN_2 + s_approx * libm::log(n) - lg + 1.0;
        n = n.max(2.0 * s_approx + 2.0);
    }
    let n = libm::ceil(n);
    let nb = ctx.int(n as u64);
    let one = ctx.int(1);
    let mut t = ctx.div(&one, s);
    let mut sum = t.clone();
    let mut terms = 0usize;
    let mut tail = Wide::ZERO;
    for k in 1..MAX_TERMS {
        let sk = ctx.add(s, &ctx.int(k as u64));
        t = ctx.div(&ctx.mul(&t, &nb), &sk);
        sum = ctx.add(&sum, &t);
        terms = k;
        let next = s_approx + k as f64 + 1.0;
        if next > 2.0 * n {
            let r = n / next;
            tail = mag(&t).scale(r / (1.0 - r));
            if tail.cmp_abs(mag(&sum).mul(ctx.unit())).is_lt() {
                break;
            }
        }
    }
    if terms + 1 >= MAX_TERMS {
        return Err(OracleError::NoConvergence(MAX_TERMS));
    }
    let ln_n = ctx.ln(&nb);
    let arg = ctx.sub(&ctx.mul(s, &ln_n), &nb);
    let pre = ctx.exp(&arg);
    let g = ctx.mul(&pre, &sum);
    let sum_w = mag(&sum);
    let upper = sum_w.scale(n - s_approx + 1.0).recip();
    let rounding = ctx
        .unit()
        .scale(2.0 * terms as f64 + 12.0 + to_wide(&arg).abs().to_f64() * 2.0);
    let rel = rounding.add(tail.div(sum_w)).add(upper);
    Ok((g, rel))
}

/// `Σ_k z^k / (k! (nu+1)_k)` with an absolute error bound.
///
/// The tail after the stopping term is bounded geometrically once the
/// term ratio has dropped below one half and keeps decreasing.
pub fn ascending(
    ctx: &mut Ctx,
    nu: &BigFloat,
    nu_approx: f64,
    z: &BigFloat,
    z_approx: f64,
) -> Result<(BigFloat, Wide), OracleError> {
    let one = ctx.int(1);
    let mut t = one.clone();
    let mut sum = one;
    let mut abs_sum = Wide::ONE;
    let mut tail = Wide::ZERO;
    let mut terms = 0usize;
    let mut done = false;
    for k in 1..MAX_TERMS {
        let kb = ctx.int(k as u64);
        let den = ctx.mul(&kb, &ctx.add(nu, &kb));
        t = ctx.div(&ctx.mul(&t, z), &den);
        sum = ctx.add(&sum, &t);
        let tw = mag(&t);
        abs_sum = abs_sum.add(tw);
        terms = k;
        let kn = k as f64 + 1.0;
        let dn = kn * (nu_approx + kn);
        if dn > 0.0 && nu_approx + kn > 0.0 {
            let r = z_approx * 1.001 / dn;
            if r < 0.5 {
                tail = tw.scale(r / (1.0 - r));
                if tail.cmp_abs(mag(&sum).mul(ctx.unit())).is_lt() {
                    done = true;
                    break;
                }
            }
        }
    }
    if !done {
        return Err(OracleError::NoConvergence(MAX_TERMS));
    }
    let rounding = abs_sum.mul(ctx.unit()).scale(3.0 * terms as f64 + 4.0);
    Ok((sum, tail.add(rounding)))
}
