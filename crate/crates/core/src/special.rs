//! Elementary helpers: exact-at-integers trig in units of π and the
//! reciprocal-gamma pieces used by the small-argument Bessel series.

use core::f64::consts::PI;

/// `sin(πx)`, exactly zero at integers and exactly ±1 at half-integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x - 2.0 * libm::round(x * 0.5); // r in [-1, 1]
    let (s, r) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    // r in [0, 1]; reduce by sin(π(1-r)) = sin(πr).
    let r = if r > 0.5 { 1.0 - r } else { r };
    let v = if r == 0.0 {
        0.0
    } else if r == 0.5 {
        1.0
    } else if r <= 0.25 {
        libm::sin(PI * r)
    } else {
        libm::cos(PI * (0.5 - r))
    };
    s * v
}

/// `cos(πx)`, exactly zero at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// Taylor coefficients of `1/Γ(1+z) = Σ c[k] z^k`.
const RGAMMA: [f64; 30] = [
    1.0,
    0.577_215_664_901_532_860_606_5,
    -0.655_878_071_520_253_881_077,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_501_7,
    -0.042_197_734_555_544_336_748_21,
    -0.009_621_971_527_876_973_562_115,
    0.007_218_943_246_663_099_542_395,
    -0.001_165_167_591_859_065_112_114,
    -0.000_215_241_674_114_950_972_815_7,
    0.000_128_050_282_388_116_186_153_2,
    -0.000_020_134_854_780_788_238_655_69,
    -0.000_001_250_493_482_142_670_657_345,
    0.000_001_133_027_231_981_695_882_374,
    -2.056_338_416_977_607_103_45e-7,
    6.116_095_104_481_415_817_862e-9,
    5.002_007_644_469_222_930_056e-9,
    -1.181_274_570_487_020_144_588e-9,
    1.043_426_711_691_100_510_492e-10,
    7.782_263_439_905_071_254_05e-12,
    -3.696_805_618_642_205_708_188e-12,
    5.100_370_287_454_475_979_015e-13,
    -2.058_326_053_566_506_783_222e-14,
    -5.348_122_539_423_017_982_37e-15,
    1.226_778_628_238_260_790_159e-15,
    -1.181_259_301_697_458_769_514e-16,
    1.186_692_254_751_600_332_58e-18,
    1.412_380_655_318_031_781_556e-18,
    -2.298_745_684_435_370_206_592e-19,
    1.714_406_321_927_337_433_384e-20,
];

/// The four reciprocal-gamma quantities of the Temme series at `|mu| <= 1/2`.
#[derive(Clone, Copy, Debug)]
pub struct TemmeGammas {
    /// `(1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ)`
    pub gam1: f64,
    /// `(1/Γ(1-μ) + 1/Γ(1+μ)) / 2`
    pub gam2: f64,
    /// `1/Γ(1+μ)`
    pub gampl: f64,
    /// `1/Γ(1-μ)`
    pub gammi: f64,
}

pub fn temme_gammas(mu: f64) -> TemmeGammas {
    let m2 = mu * mu;
    // gam1 = -(c1 + c3 μ² + ...), gam2 = c0 + c2 μ² + ...
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in (0..RGAMMA.len() / 2).rev() {
        even = even * m2 + RGAMMA[2 * k];
        odd = odd * m2 + RGAMMA[2 * k + 1];
    }
    let gam1 = -odd;
    let gam2 = even;
    TemmeGammas {
        gam1,
        gam2,
        gampl: gam2 - mu * gam1,
        gammi: gam2 + mu * gam1,
    }
}

/// `1/Γ(x)` for real `x`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == libm::floor(x) {
        return 0.0;
    }
    if (0.5..=1.5).contains(&x) {
        let g = temme_gammas(x - 1.0);
        return g.gampl;
    }
    1.0 / libm::tgamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_pi_is_exact_at_lattice_points() {
        for n in -40..40 {
            assert_eq!(sin_pi(f64::from(n)), 0.0);
            let h = f64::from(n) + 0.5;
            assert_eq!(sin_pi(h).abs(), 1.0);
            assert_eq!(cos_pi(h), 0.0);
        }
        assert!((sin_pi(1.0 / 6.0) - 0.5).abs() < 1e-16);
        assert!((sin_pi(-2.25) + core::f64::consts::FRAC_1_SQRT_2).abs() < 2e-16);
    }

    #[test]
    fn reciprocal_gamma_series_matches_tgamma() {
        for &mu in &[-0.5, -0.3, -0.01, 0.0, 0.2, 0.49] {
            let g = temme_gammas(mu);
            let plus = 1.0 / libm::tgamma(1.0 + mu);
            let minus = 1.0 / libm::tgamma(1.0 - mu);
            assert!((g.gampl - plus).abs() < 4e-16, "mu={mu}");
            assert!((g.gammi - minus).abs() < 4e-16, "mu={mu}");
        }
        // gam1(0) = -Euler's constant.
        assert!((temme_gammas(0.0).gam1 + 0.577_215_664_901_532_9).abs() < 1e-16);
    }

    #[test]
    fn rgamma_vanishes_at_poles() {
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-3.0), 0.0);
        assert!((rgamma(5.0) - 1.0 / 24.0).abs() < 1e-17);
    }
}
