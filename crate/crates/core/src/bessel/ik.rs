//! Modified Bessel kernels for real order.
//!
//! K: Temme's series for `x <= 1.5` or Steed's continued fraction above,
//! both at a reduced order `|mu| <= 1/2`, then forward recurrence.
//! I: ascending series for `x <= max(10, nu)`, a continued fraction for
//! `I_{nu+1}/I_nu` normalized by the Wronskian against K up to `x = 1e4`,
//! and the large-argument expansion beyond. Negative orders go through
//! `I_{-a} = I_a + (2/π) sin(aπ) K_a`.
//!
//! Every kernel returns an exponentially scaled value (`e^x K`, `e^{-x} I`)
//! in [`Wide`] together with a relative error estimate.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{rgamma, sin_pi, temme_gammas};
use crate::wide::Wide;

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 200_000;
/// Temme's series loses a few ulps to cancellation as `x` approaches 2.
const TEMME_MAX_X: f64 = 1.5;

/// Argument above which I switches to the large-argument expansion.
pub(crate) const I_ASYMPTOTIC_X: f64 = 1e4;

/// A value and a relative error estimate for it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approx {
    pub value: Wide,
    pub rel_err: f64,
}

impl Approx {
    pub fn new(value: Wide, rel_err: f64) -> Approx {
        Approx { value, rel_err }
    }

    /// Absolute error estimate as a [`Wide`].
    pub fn abs_err(self) -> Wide {
        self.value.abs().scale(self.rel_err)
    }

    pub fn mul(self, o: Approx) -> Approx {
        Approx::new(self.value.mul(o.value), self.rel_err + o.rel_err + EPS)
    }

    pub fn div(self, o: Approx) -> Approx {
        Approx::new(self.value.div(o.value), self.rel_err + o.rel_err + EPS)
    }

    /// Sum with the absolute errors added; the relative error can blow up
    /// near a cancellation.
    pub fn add(self, o: Approx) -> Approx {
        let value = self.value.add(o.value);
        let abs = self.abs_err().add(o.abs_err());
        let rounding = value.abs().scale(EPS);
        let total = abs.add(rounding);
        let rel = if value.is_zero() {
            f64::INFINITY
        } else {
            total.div(value.abs()).to_f64()
        };
        Approx::new(value, rel)
    }

    pub fn scale(self, x: f64) -> Approx {
        Approx::new(self.value.scale(x), self.rel_err + EPS)
    }
}

/// `e^x K_mu(x)` and `e^x K_{mu+1}(x)` for `|mu| <= 1/2`, with the
/// iteration count.
fn k_reduced_scaled(mu: f64, x: f64) -> Result<(f64, f64, usize)> {
    if x <= TEMME_MAX_X {
        let (k0, k1, n) = k_temme(mu, x)?;
        let ex = libm::exp(x);
        Ok((k0 * ex, k1 * ex, n))
    } else {
        k_steed(mu, x)
    }
}

fn k_temme(mu: f64, x: f64) -> Result<(f64, f64, usize)> {
    let mu2 = mu * mu;
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / sin_pi(mu) };
    let d = -libm::log(x2);
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { libm::sinh(e) / e };
    let g = temme_gammas(mu);
    let mut ff = fact * (g.gam1 * libm::cosh(e) + g.gam2 * fact2 * d);
    let mut sum = ff;
    let ee = libm::exp(e);
    let mut p = 0.5 * ee / g.gampl;
    let mut q = 0.5 / (ee * g.gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * EPS {
            return Ok((sum, sum1 * 2.0 / x, i));
        }
    }
    Err(Error::NoConvergence {
        method: "Temme series for K",
        iterations: MAX_ITER,
    })
}

fn k_steed(mu: f64, x: f64) -> Result<(f64, f64, usize)> {
    let mu2 = mu * mu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            let h = a1 * h;
            let kmu = libm::sqrt(PI / (2.0 * x)) / s;
            let k1 = kmu * (mu + x + 0.5 - h) / x;
            return Ok((kmu, k1, i));
        }
    }
    Err(Error::NoConvergence {
        method: "Steed continued fraction for K",
        iterations: MAX_ITER,
    })
}

/// `e^x K_nu(x)` and `e^x K_{nu+1}(x)` for `nu >= 0`.
pub fn k_pair_scaled(nu: f64, x: f64) -> Result<(Approx, Approx)> {
    debug_assert!(nu >= 0.0 && x > 0.0);
    let nl = libm::floor(nu + 0.5);
    let mu = nu - nl;
    let (k0, k1, iters) = k_reduced_scaled(mu, x)?;
    let base = if x <= TEMME_MAX_X {
        12.0
    } else {
        8.0 + 0.05 * iters as f64
    };
    let mut km = Wide::new(k0);
    let mut kp = Wide::new(k1);
    let steps = nl as usize;
    let two_over_x = 2.0 / x;
    for k in 0..steps {
        let next = kp.scale(two_over_x * (mu + 1.0 + k as f64)).add(km);
        km = kp;
        kp = next;
    }
    let err0 = (base + 2.0 * steps as f64) * EPS;
    let err1 = (base + 2.0 * (steps as f64 + 1.0)) * EPS;
    Ok((Approx::new(km, err0), Approx::new(kp, err1)))
}

/// `e^x K_nu(x)` for any real order; `K_{-nu} = K_nu` by evaluating at `|nu|`.
pub fn k_scaled(nu: f64, x: f64) -> Result<Approx> {
    Ok(k_pair_scaled(nu.abs(), x)?.0)
}

/// Ascending series, `nu > -1`.
fn i_series_scaled(nu: f64, x: f64) -> Result<Approx> {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0usize;
    for k in 1..MAX_ITER {
        let fk = k as f64;
        term *= q / (fk * (nu + fk));
        sum += term;
        n = k;
        if term < 0.5 * EPS * sum {
            break;
        }
    }
    if n + 1 >= MAX_ITER {
        return Err(Error::NoConvergence {
            method: "power series for I",
            iterations: MAX_ITER,
        });
    }
    let lead = Wide::powf(0.5 * x, nu).scale(rgamma(nu + 1.0));
    let value = lead.scale(sum).mul(Wide::exp(-x));
    let rel = (12.0 + 0.5 * n as f64 + 0.01 * nu.abs()) * EPS;
    Ok(Approx::new(value, rel))
}

/// `I_{nu+1}/I_nu` by modified Lentz, with the iteration count.
fn i_ratio_cf(nu: f64, x: f64) -> Result<(f64, usize)> {
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..MAX_ITER {
        let b = 2.0 * (nu + k as f64) / x;
        d += b;
        if d == 0.0 {
            d = TINY;
        }
        c = b + 1.0 / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok((f, k));
        }
    }
    Err(Error::NoConvergence {
        method: "continued fraction for I ratio",
        iterations: MAX_ITER,
    })
}

/// Wronskian normalization: `I_nu = 1 / (x (K_{nu+1} + r K_nu))`.
fn i_wronskian_scaled(nu: f64, x: f64) -> Result<Approx> {
    let (r, iters) = i_ratio_cf(nu, x)?;
    let (k0, k1) = k_pair_scaled(nu, x)?;
    let denom = k1.value.add(k0.value.scale(r)).scale(x);
    let rel = k0.rel_err.max(k1.rel_err) + (12.0 + 0.02 * libm::sqrt(iters as f64)) * EPS;
    Ok(Approx::new(denom.recip(), rel))
}

/// Large-argument expansion of `e^{-x} I_nu(x)`, valid for `x >> nu^2`.
fn i_asymptotic_scaled(nu: f64, x: f64) -> Approx {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    let mut n = 0usize;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= last {
            break;
        }
        term = next;
        last = term.abs();
        sum += term;
        n = k;
        if term.abs() < 0.5 * EPS * sum.abs() {
            break;
        }
    }
    let value = Wide::new(sum / libm::sqrt(2.0 * PI * x));
    let rel = (8.0 + n as f64) * EPS + last.min(1.0);
    Approx::new(value, rel)
}

fn i_nonneg_scaled(nu: f64, x: f64) -> Result<Approx> {
    if x <= nu.max(10.0) {
        i_series_scaled(nu, x)
    } else if x >= I_ASYMPTOTIC_X && nu * nu <= x {
        Ok(i_asymptotic_scaled(nu, x))
    } else {
        i_wronskian_scaled(nu, x)
    }
}

/// `e^{-x} I_nu(x)` for any real order `nu >= -20`.
pub fn i_scaled(nu: f64, x: f64) -> Result<Approx> {
    if nu >= 0.0 {
        return i_nonneg_scaled(nu, x);
    }
    let a = -nu;
    let ia = i_nonneg_scaled(a, x)?;
    let s = sin_pi(a);
    if s == 0.0 {
        return Ok(ia);
    }
    let ka = k_scaled(a, x)?;
    let refl = ka.scale(2.0 / PI * s).mul(Approx::new(Wide::exp(-2.0 * x), EPS));
    Ok(ia.add(refl))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_order_closed_forms() {
        for &x in &[0.01, 0.5, 1.0, 1.9, 2.0, 2.1, 7.5, 30.0, 400.0] {
            let k = k_scaled(0.5, x).unwrap().value.to_f64();
            assert!(rel(k, libm::sqrt(PI / (2.0 * x))) < 1e-15, "K x={x}");
            let (_, k32) = k_pair_scaled(0.5, x).unwrap();
            let want = libm::sqrt(PI / (2.0 * x)) * (1.0 + 1.0 / x);
            assert!(rel(k32.value.to_f64(), want) < 1e-15, "K3/2 x={x}");
            let i = i_scaled(0.5, x).unwrap().value.to_f64();
            let want = libm::sqrt(2.0 / (PI * x)) * (-libm::expm1(-2.0 * x)) / 2.0;
            assert!(rel(i, want) < 2e-15, "I x={x}: {i} vs {want}");
            let im = i_scaled(-0.5, x).unwrap().value.to_f64();
            let want = libm::sqrt(2.0 / (PI * x)) * (1.0 + libm::exp(-2.0 * x)) / 2.0;
            assert!(rel(im, want) < 2e-15, "I-1/2 x={x}");
        }
    }

    #[test]
    fn integer_order_reference_values() {
        let e = libm::exp(1.0);
        let i0 = i_scaled(0.0, 1.0).unwrap().value.to_f64() * e;
        let k0 = k_scaled(0.0, 1.0).unwrap().value.to_f64() / e;
        let i1 = i_scaled(1.0, 1.0).unwrap().value.to_f64() * e;
        let k2 = k_scaled(2.0, 1.0).unwrap().value.to_f64() / e;
        assert!(rel(i0, 1.266_065_877_752_008_3) < 1e-15);
        assert!(rel(k0, 0.421_024_438_240_708_33) < 1e-15);
        assert!(rel(i1, 0.565_159_103_992_485_03) < 1e-15);
        assert!(rel(k2, 1.624_838_898_635_177_5) < 1e-15);
    }

    #[test]
    fn branches_agree_at_switch_points() {
        for &nu in &[0.0, 0.3, 3.7, 9.5] {
            let a = i_series_scaled(nu, 10.0).unwrap().value.to_f64();
            let b = i_wronskian_scaled(nu, 10.0).unwrap().value.to_f64();
            assert!(rel(a, b) < 1e-14, "nu={nu}");
        }
        for &nu in &[0.0, 1.0, 40.0, 100.0] {
            let a = i_wronskian_scaled(nu, 1e4).unwrap().value.to_f64();
            let b = i_asymptotic_scaled(nu, 1e4).value.to_f64();
            assert!(rel(a, b) < 1e-14, "nu={nu}: {a} {b}");
        }
        for &mu in &[-0.5, -0.2, 0.0, 0.25, 0.5] {
            let (a0, a1, _) = k_temme(mu, 1.5).unwrap();
            let (b0, b1, _) = k_steed(mu, 1.5).unwrap();
            let ex = libm::exp(1.5);
            assert!(rel(a0 * ex, b0) < 1e-14 && rel(a1 * ex, b1) < 1e-14, "mu={mu}");
        }
    }

    #[test]
    fn integer_negative_order_is_exact_copy() {
        for n in 1..6 {
            let a = i_scaled(-f64::from(n), 3.0).unwrap().value;
            let b = i_scaled(f64::from(n), 3.0).unwrap().value;
            assert_eq!(a, b);
        }
    }
}
