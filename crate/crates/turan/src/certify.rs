//! Comparison of the fast evaluators with the extended-precision oracle
//! on a seeded random sample, plus the identity residuals at each point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turan_core::bessel::{self, FuncKind, OrderArg};
use turan_core::config::PRECISION;
use turan_core::scan::{RowMap, ScanReport};
use turan_core::verdict::InequalityVerdict;
use turan_core::wide::Wide;

use crate::oracle;

pub const DEFAULT_SEED: u64 = 0x7572_616e_2031_3030;
pub const DEFAULT_POINTS: usize = 1000;
pub const NU_RANGE: (f64, f64) = (-1.0, 100.0);
pub const U_MAX: f64 = 700.0;
/// Smallest argument drawn by the log-uniform half of the sample.
pub const U_LOG_MIN: f64 = 1e-6;

/// `n` points: `nu` uniform on `[-1, 100]`; `u` uniform on `(0, 700]` for
/// even indices and log-uniform on `[1e-6, 700]` for odd ones.
pub fn sample(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let nu = NU_RANGE.0 + (NU_RANGE.1 - NU_RANGE.0) * rng.random::<f64>();
            let r: f64 = rng.random();
            let u = if i % 2 == 0 {
                U_MAX * (1.0 - r)
            } else {
                U_LOG_MIN * (U_MAX / U_LOG_MIN).powf(r)
            };
            (nu, u)
        })
        .collect()
}

/// Errors at one sample point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointErrors {
    pub nu: f64,
    pub u: f64,
    pub rel_i: f64,
    pub rel_k: f64,
    pub rel_p: f64,
    pub oracle_digits: u32,
    pub residuals: bessel::Residuals,
}

/// Relative errors of the fast `I`, `K` and `P` against the oracle.
///
/// The fast values are compared in extended exponent range (scaled value
/// times `e^{±u}`) so points whose unscaled value leaves the double range
/// are still certified.
pub fn point_errors(nu: f64, u: f64) -> Result<PointErrors, String> {
    let p = OrderArg::new(nu, u).map_err(|e| e.to_string())?;
    let oi = oracle::oracle_i(p).map_err(|e| e.to_string())?;
    let ok = oracle::oracle_k(p).map_err(|e| e.to_string())?;
    let op = oi.product(&ok, FuncKind::P);
    let si = bessel::scaled_i(nu, u).map_err(|e| e.to_string())?;
    let sk = bessel::scaled_k(nu, u).map_err(|e| e.to_string())?;
    let sp = bessel::product(nu, u).map_err(|e| e.to_string())?;
    let residuals = bessel::residuals(nu, u).map_err(|e| e.to_string())?;
    Ok(PointErrors {
        nu,
        u,
        rel_i: oi.rel_diff(si.value.mul(Wide::exp(u))),
        rel_k: ok.rel_diff(sk.value.mul(Wide::exp(-u))),
        rel_p: op.rel_diff(sp.value),
        oracle_digits: op.certified_digits,
        residuals,
    })
}

/// Verdicts `I`, `K`, `P` (slack `1e-12 - rel`), `wronskian`
/// (`5e-13 - residual`) and `r1`–`r3` (`1e-12 - residual`) at every
/// sample point. A point the oracle cannot certify yields indeterminate
/// verdicts.
pub fn certify<M: RowMap + ?Sized>(exec: &M, points: &[(f64, f64)]) -> (ScanReport, Vec<PointErrors>) {
    let rows = exec.map_rows(points.len(), &|i| {
        let (nu, u) = points[i];
        (nu, u, point_errors(nu, u))
    });
    let mut report = ScanReport::new();
    let mut errors = Vec::with_capacity(points.len());
    let tol = PRECISION.rel_target;
    for (nu, u, r) in rows {
        let p = OrderArg::new(nu, u).expect("sampled point is valid");
        let v = |label: &str, slack: f64| InequalityVerdict::with_budget(label, p, slack, 0.0);
        match r {
            Ok(e) => {
                report.push(v("I", tol - e.rel_i));
                report.push(v("K", tol - e.rel_k));
                report.push(v("P", tol - e.rel_p));
                report.push(v("wronskian", PRECISION.wronskian - e.residuals.wronskian));
                report.push(v("r1", PRECISION.recurrence - e.residuals.r1));
                report.push(v("r2", PRECISION.recurrence - e.residuals.r2));
                report.push(v("r3", PRECISION.recurrence - e.residuals.r3));
                errors.push(e);
            }
            Err(_) => {
                for label in ["I", "K", "P", "wronskian", "r1", "r2", "r3"] {
                    report.push(v(label, f64::NAN));
                }
            }
        }
    }
    report.counterexamples = report
        .verdicts
        .iter()
        .filter(|v| v.fails())
        .map(turan_core::scan::Counterexample::from_verdict)
        .collect();
    (report, errors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use turan_core::scan::Serial;

    #[test]
    fn sample_is_reproducible_and_in_range() {
        let a = sample(7, 200);
        assert_eq!(a, sample(7, 200));
        assert_ne!(a, sample(8, 200));
        for &(nu, u) in &a {
            assert!((-1.0..=100.0).contains(&nu));
            assert!(u > 0.0 && u <= 700.0);
        }
    }

    #[test]
    fn small_certification() {
        let pts = sample(DEFAULT_SEED, 6);
        let (r, errs) = certify(&Serial, &pts);
        assert_eq!(r.verdicts.len(), 42);
        assert!(!r.any_fails());
        assert_eq!(errs.len(), 6);
        assert!(errs.iter().all(|e| e.oracle_digits >= 30));
    }
}
