//! The product `P_nu(u) = I_nu(u) K_nu(u)`: evaluation with derivatives,
//! the order recurrences, monotonicity and convexity checks, and the
//! log-convexity explorer.

use alloc::vec::Vec;

use crate::bessel::{self, Approx, OrderArg};
use crate::error::{domain, Result};
use crate::grid::Grid;
use crate::quad;
use crate::scan::{Counterexample, RowMap, ScanReport};
use crate::verdict::InequalityVerdict;
use crate::wide::Wide;

const EPS: f64 = f64::EPSILON;

/// Orders closer to zero than this are excluded from the recurrence
/// checks, which divide by `2nu`.
pub const RECURRENCE_NU_MIN: f64 = 1.0 / 16.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductValue {
    pub nu: f64,
    pub u: f64,
    pub p: f64,
    pub dp_du: Option<f64>,
    pub d2p_du2: Option<f64>,
    /// Absolute error estimate of `p`.
    pub abs_err_est: f64,
}

fn neg(a: Approx) -> Approx {
    Approx::new(a.value.neg(), a.rel_err)
}

/// `P'` as `I'K + IK'`, from scaled factors.
pub fn dp_direct(nu: f64, u: f64) -> Result<Approx> {
    let si = bessel::scaled_i(nu, u)?;
    let sk = bessel::scaled_k(nu, u)?;
    let (di, _) = bessel::scaled_di(nu, u)?;
    let (dk, _) = bessel::scaled_dk(nu, u)?;
    Ok(di.mul(sk).add(si.mul(dk)))
}

/// `P''` as `2(1 + nu²/u²) P - P'/u + 2 I'K'`, from the Bessel equation.
pub fn d2p_direct(nu: f64, u: f64) -> Result<Approx> {
    let p = bessel::product(nu, u)?;
    let dp = dp_direct(nu, u)?;
    let (di, _) = bessel::scaled_di(nu, u)?;
    let (dk, _) = bessel::scaled_dk(nu, u)?;
    let c = 2.0 * (1.0 + (nu / u) * (nu / u));
    Ok(p.scale(c).add(neg(dp.scale(1.0 / u))).add(di.mul(dk).scale(2.0)))
}

/// `P_nu(u)` and, up to `derivatives` (0, 1 or 2), its `u`-derivatives.
pub fn eval_p(p: OrderArg, derivatives: u8) -> Result<ProductValue> {
    let (nu, u) = (p.nu(), p.u());
    let a = bessel::product(nu, u)?;
    let v = a.value.to_f64();
    let dp_du = if derivatives >= 1 {
        Some(dp_direct(nu, u)?.value.to_f64())
    } else {
        None
    };
    let d2p_du2 = if derivatives >= 2 {
        Some(d2p_direct(nu, u)?.value.to_f64())
    } else {
        None
    };
    Ok(ProductValue {
        nu,
        u,
        p: v,
        dp_du,
        d2p_du2,
        abs_err_est: (a.rel_err + EPS) * v.abs(),
    })
}

fn require_recurrence(nu: f64) -> Result<()> {
    if nu.abs() < RECURRENCE_NU_MIN {
        return Err(domain("nu", nu, "recurrence divides by 2nu; needs |nu| >= 1/16"));
    }
    if nu - 1.0 < bessel::NU_MIN {
        return Err(domain("nu", nu, "needs nu >= -19"));
    }
    Ok(())
}

/// `P'` from the order recurrence `2nu P' = u (P_{nu+1} - P_{nu-1})`.
pub fn dp_recurrence(nu: f64, u: f64) -> Result<Approx> {
    require_recurrence(nu)?;
    let up = bessel::product(nu + 1.0, u)?;
    let down = bessel::product(nu - 1.0, u)?;
    Ok(up.add(neg(down)).scale(u / (2.0 * nu)))
}

/// `P''` from `2nu P'' = 4nu P - (2nu-1) P_{nu-1} - (2nu+1) P_{nu+1}`.
pub fn d2p_recurrence(nu: f64, u: f64) -> Result<Approx> {
    require_recurrence(nu)?;
    let mid = bessel::product(nu, u)?.scale(4.0 * nu);
    let down = bessel::product(nu - 1.0, u)?.scale(-(2.0 * nu - 1.0));
    let up = bessel::product(nu + 1.0, u)?.scale(-(2.0 * nu + 1.0));
    Ok(mid.add(down).add(up).scale(1.0 / (2.0 * nu)))
}

fn agreement(label: &str, p: OrderArg, a: f64, b: f64, tol: f64, comb: f64) -> InequalityVerdict {
    let diff = ((a - b) / b).abs();
    InequalityVerdict::with_budget(label, p, tol.max(comb) - diff, 0.0)
}

/// Recurrence `P'` against `I'K + IK'`, relative tolerance `1e-10` or the
/// combined error estimate if larger.
pub fn check_h5(p: OrderArg) -> Result<InequalityVerdict> {
    let rec = dp_recurrence(p.nu(), p.u())?;
    let direct = dp_direct(p.nu(), p.u())?;
    Ok(agreement(
        "h5",
        p,
        rec.value.to_f64(),
        direct.value.to_f64(),
        1e-10,
        rec.rel_err + direct.rel_err,
    ))
}

/// Recurrence `P''` against a central difference of the recurrence `P'`
/// with step `u ε^{1/3}`, relative tolerance `1e-6`.
pub fn check_h6(p: OrderArg) -> Result<InequalityVerdict> {
    let (nu, u) = (p.nu(), p.u());
    let rec = d2p_recurrence(nu, u)?;
    let d = u * libm::cbrt(EPS);
    let hi = dp_recurrence(nu, u + d)?;
    let lo = dp_recurrence(nu, u - d)?;
    let fd = (hi.value.to_f64() - lo.value.to_f64()) / (2.0 * d);
    // Rounding in the difference quotient.
    let round = (hi.abs_err().to_f64() + lo.abs_err().to_f64()) / (2.0 * d);
    let r = rec.value.to_f64();
    Ok(agreement("h6", p, r, fd, 1e-6, rec.rel_err + round / fd.abs()))
}

/// `P_{nu-1} + P_{nu+1} - 2P_nu`, non-negative where the convexity
/// inequality holds.
pub fn check_h2(p: OrderArg) -> Result<InequalityVerdict> {
    let (nu, u) = (p.nu(), p.u());
    if nu - 1.0 < bessel::NU_MIN {
        return Err(domain("nu", nu, "needs nu >= -19"));
    }
    let down = bessel::product(nu - 1.0, u)?;
    let up = bessel::product(nu + 1.0, u)?;
    let mid = bessel::product(nu, u)?;
    let s = down.add(up).add(neg(mid.scale(2.0)));
    Ok(InequalityVerdict::new("h2", p, s.value.to_f64(), s.abs_err().to_f64()))
}

/// `(2nu+1) P_{nu-1} + (2nu-1) P_{nu+1} - 4nu P_nu`, the combination that
/// the recurrences turn into `-2nu u (u P_nu)''`; non-negative where
/// `u P_nu` is concave.
pub fn check_h2_concavity_form(p: OrderArg) -> Result<InequalityVerdict> {
    let (nu, u) = (p.nu(), p.u());
    if nu - 1.0 < bessel::NU_MIN {
        return Err(domain("nu", nu, "needs nu >= -19"));
    }
    let down = bessel::product(nu - 1.0, u)?.scale(2.0 * nu + 1.0);
    let up = bessel::product(nu + 1.0, u)?.scale(2.0 * nu - 1.0);
    let mid = bessel::product(nu, u)?.scale(4.0 * nu);
    let s = down.add(up).add(neg(mid));
    Ok(InequalityVerdict::new(
        "h2-concavity",
        p,
        s.value.to_f64(),
        s.abs_err().to_f64(),
    ))
}

/// Integer-order chain at fixed `u`: `P_n > P_{n+1}` for `n < n_max`
/// (`h1-decreasing`) and `P_{n-1} + P_{n+1} >= 2 P_n` for `1 <= n < n_max`
/// (`h1-convex`).
pub fn sequence_scan(u: f64, n_max: u32) -> Result<ScanReport> {
    let ps: Vec<Approx> = (0..=n_max)
        .map(|n| bessel::product(n as f64, u))
        .collect::<Result<_>>()?;
    let mut r = ScanReport::new();
    for n in 0..n_max as usize {
        let d = ps[n].add(neg(ps[n + 1]));
        let p = OrderArg::new(n as f64, u)?;
        r.push(InequalityVerdict::new(
            "h1-decreasing",
            p,
            d.value.to_f64(),
            d.abs_err().to_f64(),
        ));
        if n >= 1 {
            let c = ps[n - 1].add(ps[n + 1]).add(neg(ps[n].scale(2.0)));
            r.push(InequalityVerdict::new(
                "h1-convex",
                p,
                c.value.to_f64(),
                c.abs_err().to_f64(),
            ));
        }
    }
    r.counterexamples = failures(&r);
    Ok(r)
}

fn failures(r: &ScanReport) -> Vec<Counterexample> {
    r.verdicts
        .iter()
        .filter(|v| v.fails())
        .map(Counterexample::from_verdict)
        .collect()
}

/// `P_{nu_i} - P_{nu_{i+1}} > 0` over consecutive grid orders; each
/// verdict is placed at the left order.
pub fn order_monotonicity_scan(u: f64, nu_grid: &Grid) -> Result<ScanReport> {
    let nus = nu_grid.points();
    let mut r = ScanReport::new();
    if nus.len() < 2 {
        return Ok(r);
    }
    let ps: Vec<Approx> = nus.iter().map(|&n| bessel::product(n, u)).collect::<Result<_>>()?;
    for i in 0..nus.len() - 1 {
        let d = ps[i].add(neg(ps[i + 1]));
        let p = OrderArg::new(nus[i], u)?;
        r.push(InequalityVerdict::new(
            "p-order-decreasing",
            p,
            d.value.to_f64(),
            d.abs_err().to_f64(),
        ));
    }
    r.counterexamples = failures(&r);
    Ok(r)
}

/// Shape of `u ↦ P_nu(u)` on a grid: `P' < 0`, `(2uP)' > 0`,
/// `0 < 2uP < 1`, `(uP)'' <= 0` pointwise, and concavity of `uP` across
/// consecutive grid triples.
pub fn u_shape_checks(nu: f64, u_grid: &Grid) -> Result<ScanReport> {
    let us = u_grid.points();
    let mut r = ScanReport::new();
    let mut g = Vec::with_capacity(us.len());
    for &u in &us {
        let p = OrderArg::new(nu, u)?;
        let pa = bessel::product(nu, u)?;
        let dp = dp_direct(nu, u)?;
        let d2 = d2p_direct(nu, u)?;
        let pv = pa.value.to_f64();
        let dv = dp.value.to_f64();
        let de = dp.abs_err().to_f64();
        r.push(InequalityVerdict::new("p-u-decreasing", p, -dv, de));
        let inc = pa.add(dp.scale(u)).scale(2.0);
        r.push(InequalityVerdict::new(
            "2uP-increasing",
            p,
            inc.value.to_f64(),
            inc.abs_err().to_f64(),
        ));
        let two = 2.0 * u * pv;
        let two_err = 2.0 * u * (pa.rel_err + 2.0 * EPS) * pv;
        r.push(InequalityVerdict::new("2uP-range", p, two.min(1.0 - two), two_err));
        let conc = d2.scale(u).add(dp.scale(2.0));
        r.push(InequalityVerdict::new(
            "uP-concave",
            p,
            -conc.value.to_f64(),
            conc.abs_err().to_f64(),
        ));
        g.push((u * pv, two_err / 2.0));
    }
    for i in 1..us.len().saturating_sub(1) {
        let (u0, u1, u2) = (us[i - 1], us[i], us[i + 1]);
        let chord = ((u2 - u1) * g[i - 1].0 + (u1 - u0) * g[i + 1].0) / (u2 - u0);
        let err = g[i - 1].1 + g[i].1 + g[i + 1].1 + 4.0 * EPS * chord.abs();
        r.push(InequalityVerdict::new(
            "uP-concave-discrete",
            OrderArg::new(nu, u1)?,
            g[i].0 - chord,
            err,
        ));
    }
    r.counterexamples = failures(&r);
    Ok(r)
}

/// `2u P_{1/2}(u)` against `1 - e^{-2u}`, slack `tol - relative difference`.
pub fn half_order_identity(u: f64, tol: f64) -> Result<InequalityVerdict> {
    let p = OrderArg::new(0.5, u)?;
    let lhs = 2.0 * u * bessel::product(0.5, u)?.value.to_f64();
    let rhs = -libm::expm1(-2.0 * u);
    Ok(agreement("half-order", p, lhs, rhs, tol, 0.0))
}

/// Relative log-convexity slack `P_nu P_{nu+2h} / P_{nu+h}² - 1` and its
/// error estimate.
pub fn conjecture_slack(nu: f64, u: f64, h: f64) -> Result<(f64, f64)> {
    let a = bessel::product(nu, u)?;
    let b = bessel::product(nu + 2.0 * h, u)?;
    let m = bessel::product(nu + h, u)?;
    let r = a.mul(b).div(m.mul(m));
    let v = r.value.to_f64();
    Ok((v - 1.0, (r.rel_err + EPS) * v.abs()))
}

/// Number of halvings a failing midpoint must survive to be reported.
pub const PERSIST_HALVINGS: u32 = 2;

/// Explores `P_nu P_{nu+2h} >= P_{nu+h}²` on the product grid.
///
/// Every point yields a `conjecture` verdict. A failing point becomes a
/// candidate only if the midpoint inequality with the same centre
/// `nu + h` also fails at `h/2` and `h/4`; `oracle_slack` is left for the
/// caller to fill in.
pub fn conjecture_scan<M: RowMap + ?Sized>(exec: &M, u_grid: &Grid, nu_grid: &Grid, h: f64) -> Result<ScanReport> {
    if !(h > 0.0) {
        return Err(domain("h", h, "step must be positive"));
    }
    let nus = nu_grid.points();
    let us = u_grid.points();
    let rows = exec.map_rows(nus.len(), &|i| -> Result<ScanReport> {
        let nu = nus[i];
        let mut r = ScanReport::new();
        for &u in &us {
            let p = OrderArg::new(nu, u)?;
            let (s, e) = conjecture_slack(nu, u, h)?;
            let v = InequalityVerdict::new("conjecture", p, s, e);
            if v.fails() && persists(nu + h, u, h)? {
                let mut c = Counterexample::from_verdict(&v);
                c.h = Some(h);
                r.counterexamples.push(c);
            }
            r.push(v);
        }
        Ok(r)
    });
    let mut out = ScanReport::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

fn persists(centre: f64, u: f64, h: f64) -> Result<bool> {
    let mut step = h;
    for _ in 0..PERSIST_HALVINGS {
        step *= 0.5;
        let (s, e) = conjecture_slack(centre - step, u, step)?;
        let p = OrderArg::new(centre - step, u)?;
        if !InequalityVerdict::new("conjecture", p, s, e).fails() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P_nu(u) = ∫_0^∞ I_{2nu}(2u sinh t) e^{-2u cosh t} dt`, with the
/// integrand written as `e^{-z} I_{2nu}(z) exp(-2u e^{-t})`, `z = 2u sinh t`.
pub fn product_integral(nu: f64, u: f64, tol: f64) -> Result<quad::QuadResult> {
    if nu < 0.0 {
        return Err(domain("nu", nu, "integral form needs nu >= 0"));
    }
    let f = |t: f64| -> f64 {
        let z = 2.0 * u * libm::sinh(t);
        if !(z < 1e250) {
            return 0.0;
        }
        if z == 0.0 {
            return if nu == 0.0 { libm::exp(-2.0 * u) } else { 0.0 };
        }
        match bessel::scaled_i(2.0 * nu, z) {
            Ok(s) => s.value.mul(Wide::exp(-2.0 * u * libm::exp(-t))).to_f64(),
            Err(_) => f64::NAN,
        }
    };
    quad::exp_sinh(f, tol)
}

/// [`product_integral`] against the direct product, slack
/// `max(tol, combined error) - relative difference`.
pub fn product_integral_check(p: OrderArg, tol: f64) -> Result<InequalityVerdict> {
    let tol = tol.max(quad::MIN_TOL);
    let q = product_integral(p.nu(), p.u(), tol)?;
    let d = bessel::product(p.nu(), p.u())?;
    let dv = d.value.to_f64();
    let comb = d.rel_err + q.abs_err_est / q.value.abs();
    Ok(agreement("product-integral", p, q.value, dv, tol, comb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::Serial;
    use proptest::prelude::*;

    fn pt(nu: f64, u: f64) -> OrderArg {
        OrderArg::new(nu, u).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs()
    }

    #[test]
    fn half_order_values() {
        let v = eval_p(pt(0.5, 1.0), 2).unwrap();
        assert!(close(v.p, -libm::expm1(-2.0) / 2.0, 1e-15));
        assert!(close(v.dp_du.unwrap(), -0.296_997_075_145_080_96, 1e-14));
        // P_{1/2} = (1 - e^{-2u})/(2u): P'' = (1 - e^{-2u}(1 + 2u + 2u²))/u³
        let e = libm::exp(-2.0);
        assert!(close(v.d2p_du2.unwrap(), 1.0 - 5.0 * e, 1e-13));
    }

    #[test]
    fn integer_order_values() {
        // P_1(1) and P_2(1).
        assert!(close(
            eval_p(pt(1.0, 1.0), 0).unwrap().p,
            0.340_173_350_904_867_52,
            1e-14
        ));
        assert!(close(
            eval_p(pt(2.0, 1.0), 0).unwrap().p,
            0.220_568_094_236_566_26,
            1e-14
        ));
    }

    #[test]
    fn h2_fails_at_half_order() {
        // P_{-1/2}(1) + P_{3/2}(1) - 2 P_{1/2}(1) = cosh1/e + 2/e² - (1 - e^{-2})
        let e = libm::exp(-1.0);
        let exact = libm::cosh(1.0) * e + 2.0 * e * e - (1.0 - e * e);
        let v = check_h2(pt(0.5, 1.0)).unwrap();
        assert!(close(v.slack, exact, 1e-13));
        assert!(v.fails());
        let v = check_h2(pt(0.5, 0.1)).unwrap();
        assert!(v.holds());
        assert!(check_h2_concavity_form(pt(0.5, 1.0)).unwrap().holds());
    }

    #[test]
    fn sequence_at_one() {
        let r = sequence_scan(1.0, 50).unwrap();
        assert!(r.with_label("h1-decreasing").all(InequalityVerdict::holds));
        let c1 = r.with_label("h1-convex").next().unwrap();
        assert!(close(c1.slack, 0.073_266_067_383_099_84, 1e-12));
        let r = sequence_scan(10.0, 5).unwrap();
        assert!(r.with_label("h1-convex").next().unwrap().fails());
    }

    #[test]
    fn order_monotonicity() {
        let g: Grid = "0:20:0.25".parse().unwrap();
        let r = order_monotonicity_scan(1.0, &g).unwrap();
        assert_eq!(r.verdicts.len(), 80);
        assert!(!r.any_fails());
        let r = order_monotonicity_scan(1.0, &Grid::point(2.0)).unwrap();
        assert!(r.verdicts.is_empty());
    }

    #[test]
    fn u_shape() {
        let g: Grid = "0.001:300:log8".parse().unwrap();
        for nu in [0.5, 0.75, 3.0, 20.0] {
            let r = u_shape_checks(nu, &g).unwrap();
            assert!(!r.any_fails(), "{:?}", r.counterexamples.first());
        }
    }

    #[test]
    fn half_order_identity_holds() {
        for u in [1e-3, 0.5, 1.0, 7.0, 300.0] {
            assert!(half_order_identity(u, 1e-13).unwrap().holds(), "u={u}");
        }
    }

    #[test]
    fn recurrences() {
        for &(nu, u) in &[(0.5, 1.0), (1.3, 0.7), (3.0, 5.0), (-0.75, 2.0), (19.0, 0.01)] {
            let v = check_h5(pt(nu, u)).unwrap();
            assert!(v.holds(), "h5 {nu} {u}: {}", v.slack);
            let v = check_h6(pt(nu, u)).unwrap();
            assert!(v.holds(), "h6 {nu} {u}: {}", v.slack);
        }
        // 2 P'' = 2P - 2P_{3/2} at nu = 1/2; mpmath value at u = 2.
        assert!(close(
            d2p_recurrence(0.5, 2.0).unwrap().value.to_f64(),
            0.095_237_086_805_806_957,
            1e-13
        ));
        assert!(check_h5(pt(0.01, 1.0)).is_err());
    }

    #[test]
    fn conjecture_counterexample_row() {
        // nu = -1/2, h = 1/2, u = 1: P_{-1/2} P_{1/2} < P_0².
        let (s, _) = conjecture_slack(-0.5, 1.0, 0.5).unwrap();
        let p0 = 1.266_065_877_752_008_4 * 0.421_024_438_240_708_33;
        let lhs = libm::cosh(1.0) * libm::exp(-1.0) * (-libm::expm1(-2.0) / 2.0);
        assert!(close(s, lhs / (p0 * p0) - 1.0, 1e-13));
        assert!(s < 0.0);
    }

    #[test]
    fn conjecture_scan_reports_persistent_candidates() {
        let u: Grid = "10".parse().unwrap();
        let nu: Grid = "2:4:1".parse().unwrap();
        let r = conjecture_scan(&Serial, &u, &nu, 1.0).unwrap();
        assert_eq!(r.verdicts.len(), 3);
        assert!(r.any_fails());
        assert!(!r.counterexamples.is_empty());
        assert!(r.counterexamples.iter().all(|c| c.h == Some(1.0)));
        let u: Grid = "0.1".parse().unwrap();
        let r = conjecture_scan(&Serial, &u, &nu, 1.0).unwrap();
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn integral_representation() {
        for &(nu, u) in &[(0.0, 0.1), (0.5, 1.0), (1.25, 3.0), (5.0, 10.0), (2.0, 0.1)] {
            let v = product_integral_check(pt(nu, u), 1e-9).unwrap();
            assert!(v.holds(), "{nu} {u}: {}", v.slack);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn recurrence_derivative_agrees(nu in 0.0625f64..20.0, lu in -2.0f64..2.0) {
            let u = libm::pow(10.0, lu);
            prop_assert!(check_h5(pt(nu, u)).unwrap().holds());
            prop_assert!(check_h6(pt(nu, u)).unwrap().holds());
        }

        #[test]
        fn concavity_form_holds(nu in 0.5f64..20.0, lu in -2.0f64..2.0) {
            let u = libm::pow(10.0, lu);
            prop_assert!(!check_h2_concavity_form(pt(nu, u)).unwrap().fails());
        }
    }
}
