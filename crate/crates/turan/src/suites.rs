//! The ten acceptance suites. Each returns its report and a pass flag;
//! `all` runs them in order and merges the reports.

use std::time::Instant;

use turan_core::grid::Grid;
use turan_core::scan::RowMap;
use turan_core::turan::{Sharpness, TuranLabel};
use turan_core::verdict::Outcome;

use crate::certify::{DEFAULT_POINTS, DEFAULT_SEED};
use crate::report::{Report, ValueRow};
use crate::runs::{self, OrderScan, RunResult};

pub const CERTIFY_SECONDS: f64 = 120.0;
pub const CERTIFY_REL_TOL: f64 = 1e-12;
pub const WRONSKIAN_TOL: f64 = 5e-13;
pub const RESIDUAL_TOL: f64 = 1e-12;
pub const PRODUCT_TOL: f64 = 1e-8;
pub const HALF_ORDER_TOL: f64 = 1e-13;
pub const IDENTITY_TOL: f64 = 1e-10;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Suite {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub report: Report,
}

impl Suite {
    /// `criterion  N name: PASS|FAIL (detail)`
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<14} {} ({})",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

fn grid(s: &str) -> Grid {
    s.parse().expect("fixed grid literal")
}

/// u grid shared by the audit and the Turán suite: 32 points per decade.
pub fn audit_u() -> Grid {
    grid("0.001:500:log32")
}

/// `{0.1, 1, 10, 100}`.
pub fn decades() -> Grid {
    grid("0.1:100:log1")
}

fn clean(r: &Report) -> bool {
    r.summary.fails == 0 && r.summary.indeterminate == 0 && r.summary.counterexamples == 0
}

fn counts(r: &Report) -> String {
    let s = &r.summary;
    let slack = r.min_slack.map_or("n/a".to_string(), |m| format!("{m:.3e}"));
    format!(
        "{} verdicts, {} fail, {} indeterminate, min slack {slack}",
        s.verdicts, s.fails, s.indeterminate
    )
}

fn value(r: &Report, name: &str) -> f64 {
    r.values.iter().find(|v| v.name == name).map_or(f64::NAN, |v| v.value)
}

/// Criteria 1 and 2 share one oracle sample.
pub fn certification<M: RowMap + ?Sized>(exec: &M, seed: u64, points: usize) -> RunResult<(Suite, Suite)> {
    let start = Instant::now();
    let (mut values, residuals) = runs::certify_parts(exec, seed, points);
    let seconds = start.elapsed().as_secs_f64();
    values.set("seconds_budget", CERTIFY_SECONDS);

    let (ei, ek, ep) = (
        value(&values, "max_rel_err_I"),
        value(&values, "max_rel_err_K"),
        value(&values, "max_rel_err_P"),
    );
    let pass1 = clean(&values) && ei.max(ek).max(ep) <= CERTIFY_REL_TOL && seconds <= CERTIFY_SECONDS;
    let c1 = Suite {
        id: 1,
        name: "certify",
        pass: pass1 && value(&values, "oracle_failures") == 0.0,
        detail: format!("seed {seed:#x}, {points} points, max rel err I {ei:.2e} K {ek:.2e} P {ep:.2e}, {seconds:.1}s"),
        report: values,
    };
    let (w, r1, r2, r3) = (
        value(&residuals, "max_wronskian"),
        value(&residuals, "max_r1"),
        value(&residuals, "max_r2"),
        value(&residuals, "max_r3"),
    );
    let pass2 = clean(&residuals) && w <= WRONSKIAN_TOL && r1.max(r2).max(r3) <= RESIDUAL_TOL;
    let c2 = Suite {
        id: 2,
        name: "residuals",
        pass: pass2,
        detail: format!("wronskian {w:.2e}, r1 {r1:.2e}, r2 {r2:.2e}, r3 {r3:.2e}"),
        report: residuals,
    };
    Ok((c1, c2))
}

pub fn audit<M: RowMap + ?Sized>(exec: &M) -> RunResult<Suite> {
    let r = runs::audit(exec, &grid("(-1:20:0.0625"), &audit_u())?;
    let d = value(&r, "disagreements");
    Ok(Suite {
        id: 3,
        name: "equivalence",
        pass: d == 0.0 && r.summary.counterexamples == 0,
        detail: format!(
            "{} points compared, {} excluded, {d} disagreements",
            value(&r, "compared"),
            value(&r, "excluded")
        ),
        report: r,
    })
}

pub fn turan_suite<M: RowMap + ?Sized>(exec: &M) -> RunResult<Suite> {
    let u = audit_u();
    let plan = [
        (TuranLabel::T1, "(-1:20:0.0625"),
        (TuranLabel::T3, "(-1:20:0.0625"),
        (TuranLabel::T2, "-20:20:0.0625"),
        (TuranLabel::T4, "(1.001:20:0.0625"),
        (TuranLabel::T5, "0:1:0.0625"),
        (TuranLabel::T7, "-1:0:0.0625"),
    ];
    let mut r = Report::new("turan", true);
    for (label, nu) in plan {
        r.merge(runs::turan_scan(exec, label, &grid(nu), &u)?);
    }
    r.finish();
    Ok(Suite {
        id: 4,
        name: "turan",
        pass: clean(&r),
        detail: counts(&r),
        report: r,
    })
}

pub fn sharpness() -> RunResult<Suite> {
    let mut r = Report::new("sharpness", true);
    r.merge(runs::sharpness(Sharpness::T3SmallU, &grid("0:5:0.0625"), 1e-4, 1e-3)?);
    r.merge(runs::sharpness(Sharpness::T2LargeU, &grid("0:5:0.0625"), 500.0, 1e-2)?);
    r.merge(runs::sharpness(Sharpness::T4SmallU, &grid("2:5:0.0625"), 1e-4, 1e-3)?);
    r.finish();
    Ok(Suite {
        id: 5,
        name: "sharpness",
        pass: clean(&r),
        detail: counts(&r),
        report: r,
    })
}

pub fn hunts<M: RowMap + ?Sized>(exec: &M) -> RunResult<Suite> {
    let budget = 200_000;
    let t6 = runs::hunt(exec, TuranLabel::T6, (1.5, 3.0), (1.0, 100.0), budget)?;
    let t2 = runs::hunt(exec, TuranLabel::T2, (-5.0, 5.0), (1e-3, 500.0), budget)?;
    let (n6, n2) = (t6.counterexamples.len(), t2.counterexamples.len());
    let mut r = Report::new("hunt", false);
    r.merge(t6);
    r.merge(t2);
    r.finish();
    Ok(Suite {
        id: 6,
        name: "hunts",
        pass: n6 > 0 && n2 == 0,
        detail: format!("t6 on [1.5, 3] x [1, 100]: {n6} found; t2 on [-5, 5]: {n2} found"),
        report: r,
    })
}

pub fn theorem1<M: RowMap + ?Sized>(exec: &M) -> RunResult<Suite> {
    let us = decades();
    let mut r = Report::new("order-scan", true);
    let th = OrderScan::default();
    r.merge(runs::order_scan(exec, &th, &grid("(0.0625:50:0.0625"), &us)?);
    for fact in ["a", "b", "c", "d"] {
        let s = OrderScan {
            check: "cm".into(),
            fact: Some(fact.into()),
            h: 0.25,
            max_k: 4,
            resolve: true,
            ..OrderScan::default()
        };
        r.merge(runs::order_scan(exec, &s, &grid("0.25:25:0.25"), &us)?);
    }
    for a in [0.5, 1.0, 2.0] {
        let s = OrderScan {
            check: "kratio".into(),
            a,
            ..OrderScan::default()
        };
        r.merge(runs::order_scan(exec, &s, &grid("0:20:0.0625"), &us)?);
    }
    r.finish();
    Ok(Suite {
        id: 7,
        name: "order",
        pass: clean(&r),
        detail: counts(&r),
        report: r,
    })
}

/// Everything asserted about the product. The `h2` part is expected to
/// fail; its corrected form is run alongside.
pub fn product_suite() -> RunResult<Suite> {
    let us = decades();
    let mut r = Report::new("product", true);
    let n_grid = grid("0:50:1");
    r.merge(runs::product_checks("h1", &n_grid, &us, 50, 0.0, true)?);
    // Convexity of the integer chain is not claimed for large u; reported only.
    r.merge(runs::product_checks("h1-convex", &n_grid, &us, 50, 0.0, true)?);
    let mut h2 = runs::product_checks("h2", &grid("0.5:20:0.0625"), &us, 0, 0.0, true)?;
    let h2_fails = h2.summary.fails;
    let h2_min = h2.min_slack.unwrap_or(f64::NAN);
    h2.merge(runs::product_checks(
        "h2-concavity",
        &grid("0.5:20:0.0625"),
        &us,
        0,
        0.0,
        true,
    )?);
    r.merge(h2);
    let derivative_nu = grid("0.0625:20:0.0625");
    let dense_u = grid("0.01:300:log8");
    r.merge(runs::product_checks("h5", &derivative_nu, &dense_u, 0, 0.0, true)?);
    r.merge(runs::product_checks("h6", &derivative_nu, &dense_u, 0, 0.0, true)?);
    r.merge(runs::product_checks(
        "u-shape",
        &grid("0.5:20:0.5"),
        &grid("0.001:300:log8"),
        0,
        0.0,
        true,
    )?);
    r.merge(runs::product_checks("order", &grid("0:20:0.0625"), &us, 0, 0.0, true)?);
    r.merge(runs::product_checks(
        "half-order",
        &Grid::point(0.5),
        &grid("0.001:300:log32"),
        0,
        HALF_ORDER_TOL,
        true,
    )?);
    r.finish();
    let rest_clean = r.summary.fails == h2_fails && r.summary.indeterminate == 0;
    Ok(Suite {
        id: 8,
        name: "product",
        pass: clean(&r),
        detail: format!(
            "{}; h2 fails at {h2_fails} points (min slack {h2_min:.3e}), everything else {}",
            counts(&r),
            if rest_clean { "holds" } else { "does not hold" }
        ),
        report: r,
    })
}

pub fn integrals_suite() -> RunResult<Suite> {
    let mut r = Report::new("integral-check", true);
    let u = grid("0.1:10:log4");
    r.merge(runs::integral_check("product", &grid("0:5:0.5"), &u, PRODUCT_TOL)?);
    r.merge(runs::integral_check(
        "gamma-ratio",
        &grid("0.01:10:0.49"),
        &grid("0.01:100:log2"),
        PRODUCT_TOL,
    )?);
    r.merge(runs::integral_check("nicholson", &grid("0:5:0.5"), &u, PRODUCT_TOL)?);
    r.merge(runs::integral_check("phi", &grid("0.01:10:0.49"), &u, PRODUCT_TOL)?);
    // Half-order cases reproduce their closed forms.
    let half = Grid::point(0.5);
    r.merge(runs::integral_check(
        "gamma-ratio",
        &half,
        &grid("0.01:100:log4"),
        IDENTITY_TOL,
    )?);
    r.merge(runs::integral_check("phi", &half, &grid("0.1:10:log4"), IDENTITY_TOL)?);
    r.merge(runs::integral_check("nicholson", &half, &u, IDENTITY_TOL)?);
    r.finish();
    Ok(Suite {
        id: 9,
        name: "integrals",
        pass: clean(&r),
        detail: counts(&r),
        report: r,
    })
}

pub fn conjecture<M: RowMap + ?Sized>(exec: &M) -> RunResult<Suite> {
    let r = runs::conjecture(
        exec,
        &grid("(-0.9:20:0.0625"),
        &grid("0.1:10:log1"),
        &[1.0, 0.5, 0.125, 0.03125],
    )?;
    let listed = r.counterexamples.len();
    let with_oracle = r.counterexamples.iter().all(|c| c.oracle_slack.is_some());
    let failing: usize = r.verdicts.iter().filter(|v| v.outcome == Outcome::Fails.name()).count();
    Ok(Suite {
        id: 10,
        name: "conjecture",
        pass: with_oracle,
        detail: format!(
            "{} midpoint checks, {failing} failing, {listed} persistent candidates confirmed by the oracle, {} dismissed",
            r.verdicts.len(),
            value(&r, "oracle_dismissed")
        ),
        report: r,
    })
}

/// All ten suites, in order.
pub fn run_all<M: RowMap + ?Sized>(exec: &M, seed: u64, points: usize) -> RunResult<Vec<Suite>> {
    let (c1, c2) = certification(exec, seed, points)?;
    Ok(vec![
        c1,
        c2,
        audit(exec)?,
        turan_suite(exec)?,
        sharpness()?,
        hunts(exec)?,
        theorem1(exec)?,
        product_suite()?,
        integrals_suite()?,
        conjecture(exec)?,
    ])
}

pub fn default_run<M: RowMap + ?Sized>(exec: &M) -> RunResult<Vec<Suite>> {
    run_all(exec, DEFAULT_SEED, DEFAULT_POINTS)
}

/// One report for `all`: every suite merged, plus a pass flag per criterion.
pub fn combined(suites: Vec<Suite>) -> Report {
    let mut r = Report::new("all", true);
    for s in suites {
        r.push_value(ValueRow::new(
            "criteria",
            &format!("criterion-{}.{}", s.id, s.name),
            f64::from(u8::from(s.pass)),
        ));
        r.merge(s.report);
    }
    r.finish();
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decade_grid_is_exact() {
        assert_eq!(decades().points(), [0.1, 1.0, 10.0, 100.0]);
        assert_eq!(grid("0.1:10:log1").points(), [0.1, 1.0, 10.0]);
    }

    #[test]
    fn audit_grid_shape() {
        let u = audit_u().points();
        assert_eq!(u.first(), Some(&0.001));
        assert_eq!(u.last(), Some(&500.0));
        assert_eq!(u.len(), 184);
        let nu = grid("(-1:20:0.0625").points();
        assert_eq!(nu.len(), 336);
        assert_eq!(nu[0], -0.9375);
    }
}
