//! Ordinary Bessel functions J and Y for `0 <= nu <= 10`.
//!
//! Below the asymptotic threshold this is Steed's method: a continued
//! fraction for `J'/J`, downward recurrence to a reduced order, then either
//! Temme's series (`x < 2`) or the complex continued fraction for
//! `(J' + iY')/(J + iY)`. The recurrences run in [`Wide`] so tiny
//! arguments do not overflow. For large arguments only the modulus
//! `J² + Y²` is needed and comes from its asymptotic series.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{sin_pi, temme_gammas};
use crate::wide::Wide;

const EPS: f64 = f64::EPSILON;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 200_000;

/// `(J_nu(x), Y_nu(x))` in extended range.
pub fn jy(nu: f64, x: f64) -> Result<(Wide, Wide)> {
    let nl = if x < 2.0 {
        libm::floor(nu + 0.5)
    } else {
        libm::floor(nu - x + 1.5).max(0.0)
    };
    let nsteps = nl as usize;
    let mu = nu - nl;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    // J'_nu / J_nu by Lentz.
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            method: "continued fraction for J'/J",
            iterations: MAX_ITER,
        });
    }

    // Unnormalized downward recurrence from nu to mu.
    let mut rjl = Wide::new(isign);
    let mut rjpl = rjl.scale(h);
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nsteps {
        let tmp = rjl.scale(fact).add(rjpl);
        fact -= xi;
        rjpl = tmp.scale(fact).sub(rjl);
        rjl = tmp;
    }
    if rjl.is_zero() {
        rjl = Wide::new(EPS);
    }
    let f = rjpl.div(rjl).to_f64();

    let w = Wide::new(xi2 / PI);
    let (rjmu, mut rymu, mut ry1);
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fct = if pimu.abs() < EPS { 1.0 } else { pimu / sin_pi(mu) };
        let dl = -libm::log(x2);
        let e = mu * dl;
        let fact2 = if e.abs() < EPS { 1.0 } else { libm::sinh(e) / e };
        let g = temme_gammas(mu);
        let mut ff = 2.0 / PI * fct * (g.gam1 * libm::cosh(e) + g.gam2 * fact2 * dl);
        let ee = libm::exp(e);
        let mut p = ee / (g.gampl * PI);
        let mut q = 1.0 / (ee * PI * g.gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS {
            1.0
        } else {
            libm::sin(pimu2) / pimu2
        };
        let r = PI * pimu2 * fact3 * fact3;
        let mut cc = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut done = false;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            cc *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = cc * (ff + r * q);
            sum += del;
            let del1 = cc * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::NoConvergence {
                method: "Temme series for Y",
                iterations: MAX_ITER,
            });
        }
        rymu = Wide::new(-sum);
        ry1 = Wide::new(-sum1).mul(Wide::new(xi2));
        let rymup = rymu.mul(Wide::new(mu * xi)).sub(ry1);
        rjmu = w.div(rymup.sub(rymu.scale(f)));
    } else {
        let mut a = 0.25 - mu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fct = a * xi / (p * p + q * q);
        let mut cr = br + q * fct;
        let mut ci = bi + p * fct;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut done = false;
        for i in 2..MAX_ITER {
            a += 2.0 * (i - 1) as f64;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::NoConvergence {
                method: "complex continued fraction for J, Y",
                iterations: MAX_ITER,
            });
        }
        let gam = (p - f) / q;
        let mut j = libm::sqrt(w.to_f64() / ((p - f) * gam + q));
        if rjl.is_sign_negative() {
            j = -j;
        }
        let y = j * gam;
        let yp = y * (p + q / gam);
        rjmu = Wide::new(j);
        rymu = Wide::new(y);
        ry1 = Wide::new(mu * xi * y - yp);
    }
    let scale = rjmu.div(rjl);
    let j = rjl1.mul(scale);
    for i in 1..=nsteps {
        let next = ry1.scale((mu + i as f64) * xi2).sub(rymu);
        rymu = ry1;
        ry1 = next;
    }
    Ok((j, rymu))
}

/// Large-argument series for `J² + Y²`, or `None` when `x` is too small
/// for it to reach full precision.
pub fn modulus_asymptotic(nu: f64, x: f64) -> Option<f64> {
    if x < asymptotic_threshold(nu) {
        return None;
    }
    let mu = 4.0 * nu * nu;
    let w = 1.0 / (4.0 * x * x);
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= odd / (2 * k) as f64 * (mu - odd * odd) * w;
        sum += term;
        if term.abs() < 0.25 * EPS * sum {
            return Some(2.0 / (PI * x) * sum);
        }
    }
    None
}

/// Smallest argument at which [`modulus_asymptotic`] is used.
pub fn asymptotic_threshold(nu: f64) -> f64 {
    (12.0 * nu).max(30.0)
}

/// `J² + Y²` in extended range.
pub fn modulus(nu: f64, x: f64) -> Result<Wide> {
    if let Some(m) = modulus_asymptotic(nu, x) {
        return Ok(Wide::new(m));
    }
    let (j, y) = jy(nu, x)?;
    Ok(j.mul(j).add(y.mul(y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_order_closed_forms() {
        for &x in &[1e-6, 0.3, 1.0, 1.999, 2.0, 5.5, 29.0] {
            let (j, y) = jy(0.5, x).unwrap();
            let s = libm::sqrt(2.0 / (PI * x));
            assert!((j.to_f64() - s * libm::sin(x)).abs() < 1e-14 * s, "J x={x}");
            assert!((y.to_f64() + s * libm::cos(x)).abs() < 1e-14 * s, "Y x={x}");
        }
    }

    #[test]
    fn integer_order_reference_values() {
        let (j0, y0) = jy(0.0, 1.0).unwrap();
        assert!(rel(j0.to_f64(), 0.765_197_686_557_966_55) < 1e-14);
        assert!(rel(y0.to_f64(), 0.088_256_964_215_676_956) < 1e-13);
        let (j2, y2) = jy(2.0, 3.0).unwrap();
        assert!(rel(j2.to_f64(), 0.486_091_260_585_891_1) < 1e-14);
        assert!(rel(y2.to_f64(), -0.160_400_393_484_923_7) < 1e-13);
    }

    #[test]
    fn asymptotic_modulus_matches_direct_at_threshold() {
        for &nu in &[0.0, 0.7, 2.0, 5.25, 10.0] {
            let x = asymptotic_threshold(nu);
            let (j, y) = jy(nu, x).unwrap();
            let direct = j.mul(j).add(y.mul(y)).to_f64();
            let asym = modulus_asymptotic(nu, x).unwrap();
            assert!(rel(asym, direct) < 1e-13, "nu={nu}: {asym} vs {direct}");
        }
    }

    #[test]
    fn tiny_argument_stays_finite() {
        let m = modulus(10.0, 1e-200).unwrap();
        assert!(m.is_finite() && !m.fits_f64());
        let m = modulus(0.25, 1e-250).unwrap();
        assert!(m.fits_f64() && m.to_f64() > 0.0);
    }
}
