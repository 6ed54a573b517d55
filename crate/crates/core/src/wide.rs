//! A double with a detached binary exponent.
//!
//! Bessel functions of large order at small argument (and the unscaled
//! functions at large argument) leave the f64 exponent range long before
//! their products and ratios do. `Wide` carries the mantissa in `[0.5, 1)`
//! and an `i32` power of two, so intermediate values never overflow and
//! every multiplication or division rounds exactly once, like plain f64.

use core::cmp::Ordering;

const LN2_HI: f64 = 6.931_471_803_691_238_164_90e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_700_02e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wide {
    mant: f64,
    exp: i32,
}

impl Wide {
    pub const ZERO: Wide = Wide { mant: 0.0, exp: 0 };
    pub const ONE: Wide = Wide { mant: 0.5, exp: 1 };

    pub fn new(x: f64) -> Wide {
        let (mant, exp) = libm::frexp(x);
        Wide { mant, exp }
    }

    fn normalized(m: f64, e: i64) -> Wide {
        if m == 0.0 || !m.is_finite() {
            return Wide { mant: m, exp: 0 };
        }
        let (mant, de) = libm::frexp(m);
        let exp = e + i64::from(de);
        if exp > i64::from(i32::MAX) {
            Wide {
                mant: m.signum() * f64::INFINITY,
                exp: 0,
            }
        } else if exp < i64::from(i32::MIN) {
            Wide::ZERO
        } else {
            Wide { mant, exp: exp as i32 }
        }
    }

    /// `m * 2^e` without intermediate overflow.
    pub fn from_parts(m: f64, e: i64) -> Wide {
        Wide::normalized(m, e)
    }

    pub fn mantissa(self) -> f64 {
        self.mant
    }

    pub fn exponent(self) -> i32 {
        self.exp
    }

    /// Nearest double; saturates to ±inf or flushes toward zero.
    pub fn to_f64(self) -> f64 {
        libm::ldexp(self.mant, self.exp)
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.mant.is_finite()
    }

    pub fn is_sign_negative(self) -> bool {
        self.mant < 0.0
    }

    /// True when the value is representable as a finite, normal or
    /// subnormal, non-zero double.
    pub fn fits_f64(self) -> bool {
        if self.mant == 0.0 {
            return true;
        }
        self.mant.is_finite() && self.exp <= 1024 && self.exp >= -1073
    }

    pub fn abs(self) -> Wide {
        Wide {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(self) -> Wide {
        Wide {
            mant: -self.mant,
            exp: self.exp,
        }
    }

    pub fn mul(self, o: Wide) -> Wide {
        Wide::normalized(self.mant * o.mant, i64::from(self.exp) + i64::from(o.exp))
    }

    pub fn div(self, o: Wide) -> Wide {
        Wide::normalized(self.mant / o.mant, i64::from(self.exp) - i64::from(o.exp))
    }

    pub fn scale(self, x: f64) -> Wide {
        self.mul(Wide::new(x))
    }

    pub fn recip(self) -> Wide {
        Wide::ONE.div(self)
    }

    pub fn add(self, o: Wide) -> Wide {
        if self.mant == 0.0 {
            return o;
        }
        if o.mant == 0.0 {
            return self;
        }
        let (big, small) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let shift = i64::from(big.exp) - i64::from(small.exp);
        if shift > 1100 {
            return big;
        }
        let m = big.mant + libm::ldexp(small.mant, -(shift as i32));
        Wide::normalized(m, i64::from(big.exp))
    }

    pub fn sub(self, o: Wide) -> Wide {
        self.add(o.neg())
    }

    pub fn sqrt(self) -> Wide {
        if self.exp % 2 == 0 {
            Wide::normalized(libm::sqrt(self.mant), i64::from(self.exp / 2))
        } else {
            Wide::normalized(libm::sqrt(2.0 * self.mant), i64::from((self.exp - 1) / 2))
        }
    }

    /// Natural logarithm of the magnitude.
    pub fn ln_abs(self) -> f64 {
        libm::log(self.mant.abs()) + f64::from(self.exp) * core::f64::consts::LN_2
    }

    /// `e^x` for any finite `x`.
    pub fn exp(x: f64) -> Wide {
        if x.abs() < 700.0 {
            return Wide::new(libm::exp(x));
        }
        if !x.is_finite() {
            return if x > 0.0 { Wide::new(f64::INFINITY) } else { Wide::ZERO };
        }
        let k = libm::round(x / core::f64::consts::LN_2);
        let r = (x - k * LN2_HI) - k * LN2_LO;
        Wide::normalized(libm::exp(r), k as i64)
    }

    /// `base^p` for `base > 0`, exact in the exponent split.
    pub fn powf(base: f64, p: f64) -> Wide {
        let (m, e) = libm::frexp(base);
        let ef = f64::from(e);
        let hi = ef * p;
        let lo = libm::fma(ef, p, -hi);
        let n = libm::floor(hi);
        let frac = (hi - n) + lo;
        let mant = libm::pow(m, p) * libm::exp2(frac);
        Wide::normalized(mant, n as i64)
    }

    /// Magnitude comparison.
    pub fn cmp_abs(self, o: Wide) -> Ordering {
        let (a, b) = (self.abs(), o.abs());
        if a.mant == 0.0 || b.mant == 0.0 {
            return a.mant.partial_cmp(&b.mant).unwrap_or(Ordering::Equal);
        }
        match a.exp.cmp(&b.exp) {
            Ordering::Equal => a.mant.partial_cmp(&b.mant).unwrap_or(Ordering::Equal),
            ord => ord,
        }
    }
}

impl From<f64> for Wide {
    fn from(x: f64) -> Wide {
        Wide::new(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_normal_doubles() {
        for x in [1.0, -3.5, 1e300, 2.5e-310, 0.0, 7.0e-5] {
            assert_eq!(Wide::new(x).to_f64(), x);
        }
    }

    #[test]
    fn product_beyond_f64_range() {
        let a = Wide::powf(10.0, 250.0);
        let b = a.mul(a);
        assert!(!b.fits_f64());
        let back = b.div(a).div(a);
        assert!((back.to_f64() - 1.0).abs() < 1e-14);
        assert!((b.ln_abs() - 500.0 * core::f64::consts::LN_10).abs() < 1e-10);
    }

    #[test]
    fn exp_matches_libm_and_extends() {
        assert_eq!(Wide::exp(3.25).to_f64(), libm::exp(3.25));
        let big = Wide::exp(1400.0);
        assert!((big.ln_abs() - 1400.0).abs() < 1e-12);
        let prod = Wide::exp(1400.0).mul(Wide::exp(-1399.0));
        assert!((prod.to_f64() - core::f64::consts::E).abs() < 1e-13);
    }

    #[test]
    fn powf_matches_pow_in_range() {
        for (b, p) in [(3.7, 12.25), (0.004, 30.5), (250.0, 101.0), (1.5, -7.3)] {
            let w = Wide::powf(b, p).to_f64();
            let r = libm::pow(b, p);
            assert!(((w - r) / r).abs() < 4e-16, "{b}^{p}: {w} vs {r}");
        }
    }

    #[test]
    fn add_aligns_exponents() {
        let a = Wide::new(1.0);
        let b = Wide::new(1e-20);
        assert_eq!(a.add(b).to_f64(), 1.0);
        assert_eq!(a.sub(a).to_f64(), 0.0);
        assert_eq!(Wide::new(3.0).sub(Wide::new(5.0)).to_f64(), -2.0);
    }
}
