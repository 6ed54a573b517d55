//! Extended-precision re-evaluation of verdicts that double precision
//! leaves indeterminate. Each target recomputes the same slack as its
//! counterpart in `turan-core`, from oracle values of `I` and `K` only.

use astro_float::BigFloat;
use turan_core::bessel::OrderArg;
use turan_core::order::CmFact;
use turan_core::verdict::{InequalityVerdict, Outcome, DEADBAND_FACTOR};
use turan_core::wide::Wide;

use super::big::{self, mag, RM};
use super::{oracle_i_digits, oracle_k_digits, OracleError, OracleValue, TARGET_DIGITS};

/// Digit targets tried in turn until the verdict is decided.
pub const DIGIT_LADDER: [u32; 4] = [TARGET_DIGITS, 100, 200, 320];

/// A slack the resolver knows how to recompute.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    /// `(-1)^k Δ_h^k f(nu) / f(nu)` for a complete-monotonicity fact.
    Cm { fact: CmFact, k: usize, h: f64 },
    /// `2P + 2uP'`
    TwoUpIncreasing,
    /// `min(2uP, 1 - 2uP)`
    TwoUpRange,
    /// `-(uP'' + 2P')`
    UpConcave,
    /// `g(u) - chord`, `g = uP`, between grid neighbours `u0 < u < u2`.
    UpConcaveDiscrete { u0: f64, u2: f64 },
    /// `(2nu+1) P_{nu-1} + (2nu-1) P_{nu+1} - 4nu P_nu`
    H2Concavity,
}

impl Target {
    /// The resolvable target behind a core label, if there is one.
    pub fn for_label(label: &str) -> Option<Target> {
        match label {
            "2uP-increasing" => Some(Target::TwoUpIncreasing),
            "2uP-range" => Some(Target::TwoUpRange),
            "uP-concave" => Some(Target::UpConcave),
            "h2-concavity" => Some(Target::H2Concavity),
            _ => None,
        }
    }
}

/// Arithmetic at one precision with a running bound on the magnitude of
/// everything summed, which scales the final error.
struct Acc {
    p: usize,
}

impl Acc {
    fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }
    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }
    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }
    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }
    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }
}

struct Values {
    vals: Vec<OracleValue>,
}

impl Values {
    fn new() -> Values {
        Values { vals: Vec::new() }
    }

    fn push(&mut self, v: OracleValue) -> BigFloat {
        let b = v.value.clone();
        self.vals.push(v);
        b
    }

    fn i(&mut self, nu: f64, u: f64, d: u32) -> Result<BigFloat, OracleError> {
        let v = oracle_i_digits(arg(nu, u)?, d)?;
        Ok(self.push(v))
    }

    fn k(&mut self, nu: f64, u: f64, d: u32) -> Result<BigFloat, OracleError> {
        let v = oracle_k_digits(arg(nu, u)?, d)?;
        Ok(self.push(v))
    }

    fn digits(&self) -> u32 {
        self.vals.iter().map(|v| v.certified_digits).min().unwrap_or(0)
    }

    fn precision(&self) -> usize {
        self.vals
            .iter()
            .map(|v| v.value.precision().unwrap_or(0))
            .max()
            .unwrap_or(128)
            + 64
    }
}

fn arg(nu: f64, u: f64) -> Result<OrderArg, OracleError> {
    OrderArg::new(nu, u).map_err(|_| OracleError::Domain("order or argument out of range"))
}

/// `(slack, Σ|terms|, certified digits of the inputs)` at one digit target.
fn evaluate(target: Target, nu: f64, u: f64, d: u32) -> Result<(BigFloat, Wide, u32), OracleError> {
    let mut vs = Values::new();
    match target {
        Target::Cm { fact, k, h } => {
            let f: Vec<BigFloat> = (0..=k)
                .map(|j| cm_value(&mut vs, fact, nu + j as f64 * h, u, d))
                .collect::<Result<_, _>>()?;
            let a = Acc { p: vs.precision() };
            let mut sum = a.f(0.0);
            let mut scale = Wide::ZERO;
            for (j, fj) in f.iter().enumerate() {
                let c = binom(k, j);
                let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                let t = a.div(&a.mul(&a.f(sign * c), fj), &f[0]);
                scale = scale.add(mag(&t));
                sum = a.add(&sum, &t);
            }
            let alt = if k % 2 == 0 { sum } else { sum.neg() };
            Ok((alt, scale, vs.digits()))
        }
        Target::TwoUpIncreasing | Target::TwoUpRange | Target::UpConcave => {
            let i0 = vs.i(nu, u, d)?;
            let i1 = vs.i(nu + 1.0, u, d)?;
            let k0 = vs.k(nu, u, d)?;
            let k1 = vs.k(nu + 1.0, u, d)?;
            let a = Acc { p: vs.precision() };
            let ub = a.f(u);
            let p = a.mul(&i0, &k0);
            let two_u_p = a.mul(&a.f(2.0), &a.mul(&ub, &p));
            let nu_u = a.div(&a.f(nu), &ub);
            let cross = a.sub(&a.mul(&i1, &k0), &a.mul(&i0, &k1));
            let dp = a.add(&cross, &a.mul(&a.mul(&a.f(2.0), &nu_u), &p));
            let scale_dp = mag(&a.mul(&i1, &k0))
                .add(mag(&a.mul(&i0, &k1)))
                .add(mag(&p).scale(2.0 * nu.abs() / u));
            match target {
                Target::TwoUpIncreasing => {
                    let s = a.mul(&a.f(2.0), &a.add(&p, &a.mul(&ub, &dp)));
                    let scale = mag(&p).add(scale_dp.scale(u)).scale(2.0);
                    Ok((s, scale, vs.digits()))
                }
                Target::TwoUpRange => {
                    let rest = a.sub(&a.f(1.0), &two_u_p);
                    let s = if rest.cmp(&two_u_p).unwrap_or(0) < 0 {
                        rest
                    } else {
                        two_u_p
                    };
                    Ok((s, Wide::ONE, vs.digits()))
                }
                _ => {
                    let di = a.add(&i1, &a.mul(&nu_u, &i0));
                    let dk = a.sub(&a.mul(&nu_u, &k0), &k1);
                    let c = a.mul(&a.f(2.0), &a.add(&a.f(1.0), &a.mul(&nu_u, &nu_u)));
                    let d2 = a.add(
                        &a.sub(&a.mul(&c, &p), &a.div(&dp, &ub)),
                        &a.mul(&a.f(2.0), &a.mul(&di, &dk)),
                    );
                    let conc = a.add(&a.mul(&ub, &d2), &a.mul(&a.f(2.0), &dp));
                    let scale = mag(&p)
                        .scale(2.0 * u * (1.0 + (nu / u) * (nu / u)))
                        .add(scale_dp.scale(3.0))
                        .add(mag(&a.mul(&di, &dk)).scale(2.0 * u));
                    Ok((conc.neg(), scale, vs.digits()))
                }
            }
        }
        Target::UpConcaveDiscrete { u0, u2 } => {
            let mut g = Vec::with_capacity(3);
            for x in [u0, u, u2] {
                let i = vs.i(nu, x, d)?;
                let k = vs.k(nu, x, d)?;
                g.push((x, i, k));
            }
            let a = Acc { p: vs.precision() };
            let g: Vec<BigFloat> = g.iter().map(|(x, i, k)| a.mul(&a.f(*x), &a.mul(i, k))).collect();
            let chord = a.div(
                &a.add(&a.mul(&a.f(u2 - u), &g[0]), &a.mul(&a.f(u - u0), &g[2])),
                &a.f(u2 - u0),
            );
            let scale = mag(&g[1]).add(mag(&chord));
            Ok((a.sub(&g[1], &chord), scale, vs.digits()))
        }
        Target::H2Concavity => {
            let mut p = Vec::with_capacity(3);
            for m in [nu - 1.0, nu, nu + 1.0] {
                let i = vs.i(m, u, d)?;
                let k = vs.k(m, u, d)?;
                p.push((i, k));
            }
            let a = Acc { p: vs.precision() };
            let p: Vec<BigFloat> = p.iter().map(|(i, k)| a.mul(i, k)).collect();
            let down = a.mul(&a.f(2.0 * nu + 1.0), &p[0]);
            let mid = a.mul(&a.f(4.0 * nu), &p[1]);
            let up = a.mul(&a.f(2.0 * nu - 1.0), &p[2]);
            let scale = mag(&down).add(mag(&mid)).add(mag(&up));
            Ok((a.sub(&a.add(&down, &up), &mid), scale, vs.digits()))
        }
    }
}

fn cm_value(vs: &mut Values, fact: CmFact, nu: f64, u: f64, d: u32) -> Result<BigFloat, OracleError> {
    let s = nu.sqrt();
    match fact {
        CmFact::A => vs.i(s, u, d),
        CmFact::B => {
            let k = vs.k(s, u, d)?;
            let p = k.precision().unwrap_or(128);
            Ok(BigFloat::from_u64(1, p).div(&k, p, RM))
        }
        CmFact::C { alpha, n } => {
            let a = vs.k(s + alpha, u, d)?;
            let b = vs.k(s + alpha + f64::from(n), u, d)?;
            let p = a.precision().unwrap_or(128).max(b.precision().unwrap_or(128));
            Ok(a.div(&b, p, RM))
        }
        CmFact::D { v } => {
            let i = vs.i(s, u, d)?;
            let k = vs.k(s, v, d)?;
            let p = i.precision().unwrap_or(128).max(k.precision().unwrap_or(128));
            Ok(i.mul(&k, p, RM))
        }
    }
}

fn binom(k: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

/// Re-evaluates `target` at `(nu, u)` with increasing digit targets until
/// the verdict is decided or the ladder runs out. The budget is the
/// magnitude of the summed terms times `10^(2 - digits)`, widened by the
/// usual deadband factor.
pub fn resolve(label: &str, target: Target, p: OrderArg) -> Result<InequalityVerdict, OracleError> {
    let mut last = None;
    for d in DIGIT_LADDER {
        let (slack, scale, digits) = evaluate(target, p.nu(), p.u(), d)?;
        let budget = scale.scale(libm::pow(10.0, 2.0 - f64::from(digits))).to_f64() * DEADBAND_FACTOR;
        let v = InequalityVerdict::with_budget(label, p, big::to_f64(&slack), budget);
        if v.outcome != Outcome::Indeterminate {
            return Ok(v);
        }
        last = Some(v);
        if digits + 5 < d {
            // The inputs cannot get more accurate (near-integer K).
            break;
        }
    }
    Ok(last.expect("ladder is non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use turan_core::product;

    #[test]
    fn half_order_margins_are_resolved() {
        // At order 1/2 every margin below is a multiple of e^{-2u}.
        let p = OrderArg::new(0.5, 100.0).unwrap();
        let core = product::check_h2_concavity_form(p).unwrap();
        assert_eq!(core.outcome, Outcome::Indeterminate);
        let v = resolve("h2-concavity", Target::H2Concavity, p).unwrap();
        assert!(v.holds(), "{v:?}");
        let p = OrderArg::new(0.5, 237.0).unwrap();
        for t in [Target::TwoUpIncreasing, Target::TwoUpRange, Target::UpConcave] {
            let v = resolve("x", t, p).unwrap();
            assert!(v.holds(), "{t:?}: {v:?}");
        }
    }

    #[test]
    fn agrees_with_double_precision_where_that_is_decisive() {
        let p = OrderArg::new(2.25, 3.0).unwrap();
        let us = product::u_shape_checks(2.25, &"2:4:1".parse().unwrap()).unwrap();
        let core = us
            .verdicts
            .iter()
            .find(|v| v.label == "uP-concave" && v.point == p)
            .unwrap();
        let v = resolve("uP-concave", Target::UpConcave, p).unwrap();
        assert!(((v.slack - core.slack) / core.slack).abs() < 1e-12);
        let disc = us.verdicts.iter().find(|v| v.label == "uP-concave-discrete").unwrap();
        let v = resolve("d", Target::UpConcaveDiscrete { u0: 2.0, u2: 4.0 }, p).unwrap();
        assert!(((v.slack - disc.slack) / disc.slack).abs() < 1e-10);
    }

    #[test]
    fn cm_difference_at_large_argument() {
        let fact = CmFact::D { v: 100.0 };
        let p = OrderArg::new(21.25, 100.0).unwrap();
        let v = resolve("cm-d/3", Target::Cm { fact, k: 3, h: 0.25 }, p).unwrap();
        assert!(v.holds(), "{v:?}");
    }
}
