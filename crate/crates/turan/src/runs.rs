//! One function per report-producing operation. The command-line front
//! end and the acceptance suites both build their reports from these.

use std::collections::{BTreeMap, HashMap};

use serde_json::Value;
use turan_core::bessel::{self, FuncKind, OrderArg};
use turan_core::bounds::{self, TargetKind};
use turan_core::equivalence;
use turan_core::grid::Grid;
use turan_core::integrals;
use turan_core::order::{self, CmFact, OrderFunctionKind, Property};
use turan_core::product;
use turan_core::scan::{Counterexample, RowMap, ScanReport};
use turan_core::turan::{self, Sharpness, TuranLabel};
use turan_core::verdict::{InequalityVerdict, Outcome};

use crate::certify;
use crate::oracle::resolve::{self, Target};
use crate::oracle::{self, OracleValue};
use crate::report::{Report, ValueRow};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] turan_core::Error),
    #[error("invalid value for {param}: {reason}")]
    Usage { param: &'static str, reason: String },
}

pub fn usage(param: &'static str, reason: impl Into<String>) -> RunError {
    RunError::Usage {
        param,
        reason: reason.into(),
    }
}

pub type RunResult<T> = Result<T, RunError>;

fn grid_value(g: &Grid) -> Value {
    Value::from(g.to_string())
}

/// Values of one function kind over a grid, optionally with oracle values.
pub fn eval(kind: &str, nu: &Grid, u: &Grid, with_oracle: bool) -> RunResult<Report> {
    let mut r = Report::new("eval", true);
    r.set("kind", kind);
    r.set("nu", grid_value(nu));
    r.set("u", grid_value(u));
    r.set("oracle", with_oracle);
    for n in nu.points() {
        for x in u.points() {
            let p = OrderArg::new(n, x)?;
            let v = match kind {
                "I" => bessel::eval_i(p, false)?,
                "K" => bessel::eval_k(p, false)?,
                "scaledI" => bessel::eval_i(p, true)?,
                "scaledK" => bessel::eval_k(p, true)?,
                "dI" => bessel::eval_di(p)?,
                "dK" => bessel::eval_dk(p)?,
                "J" => bessel::eval_jy(p)?.0,
                "Y" => bessel::eval_jy(p)?.1,
                "P" => {
                    let pv = product::eval_p(p, 2)?;
                    r.push_value(ValueRow::new("eval", "P", pv.p).at(n, x).err(pv.abs_err_est));
                    if let Some(d) = pv.dp_du {
                        r.push_value(ValueRow::new("eval", "dP", d).at(n, x));
                    }
                    if let Some(d) = pv.d2p_du2 {
                        r.push_value(ValueRow::new("eval", "d2P", d).at(n, x));
                    }
                    if with_oracle {
                        push_oracle(&mut r, FuncKind::P, p);
                    }
                    continue;
                }
                other => return Err(usage("--kind", format!("unknown kind {other:?}"))),
            };
            r.push_value(
                ValueRow::new("eval", v.kind.name(), v.value)
                    .at(n, x)
                    .err(v.abs_err_est),
            );
            if v.cancellation {
                r.push_value(ValueRow::new("eval", "cancellation", 1.0).at(n, x));
            }
            if with_oracle && matches!(v.kind, FuncKind::I | FuncKind::K) {
                push_oracle(&mut r, v.kind, p);
            }
        }
    }
    r.finish();
    Ok(r)
}

fn push_oracle(r: &mut Report, kind: FuncKind, p: OrderArg) {
    let v = match kind {
        FuncKind::I => oracle::oracle_i(p),
        FuncKind::K => oracle::oracle_k(p),
        _ => oracle::oracle_p(p),
    };
    match v {
        Ok(v) => {
            r.push_value(ValueRow::new("oracle", kind.name(), v.to_f64()).at(p.nu(), p.u()));
            r.push_value(ValueRow::new("oracle", "certified_digits", f64::from(v.certified_digits)).at(p.nu(), p.u()));
        }
        Err(_) => r.push_value(ValueRow::new("oracle", kind.name(), f64::NAN).at(p.nu(), p.u())),
    }
}

/// Oracle comparison on a seeded sample: the `I`, `K`, `P` verdicts in one
/// report, the Wronskian and recurrence residuals in the other.
pub fn certify_parts<M: RowMap + ?Sized>(exec: &M, seed: u64, points: usize) -> (Report, Report) {
    let mut values = Report::new("certify", true);
    values.set("seed", seed);
    values.set("points", points);
    values.set("nu_range", vec![certify::NU_RANGE.0, certify::NU_RANGE.1]);
    values.set("u_max", certify::U_MAX);
    values.set("u_log_min", certify::U_LOG_MIN);
    let mut residuals = values.clone();
    residuals.command = "residuals".to_string();
    let pts = certify::sample(seed, points);
    let (scan, errors) = certify::certify(exec, &pts);
    for v in &scan.verdicts {
        let (r, suite) = if matches!(v.label.as_str(), "I" | "K" | "P") {
            (&mut values, "certify")
        } else {
            (&mut residuals, "residuals")
        };
        r.push_verdict(suite, v);
        if v.fails() {
            r.push_counterexample(suite, &Counterexample::from_verdict(v));
        }
    }
    let max = |f: fn(&certify::PointErrors) -> f64| errors.iter().map(f).fold(0.0, f64::max);
    values.push_value(ValueRow::new("certify", "max_rel_err_I", max(|e| e.rel_i)));
    values.push_value(ValueRow::new("certify", "max_rel_err_K", max(|e| e.rel_k)));
    values.push_value(ValueRow::new("certify", "max_rel_err_P", max(|e| e.rel_p)));
    let digits = errors.iter().map(|e| e.oracle_digits).min().unwrap_or(0);
    values.push_value(ValueRow::new("certify", "min_oracle_digits", f64::from(digits)));
    values.push_value(ValueRow::new(
        "certify",
        "oracle_failures",
        (points - errors.len()) as f64,
    ));
    residuals.push_value(ValueRow::new(
        "residuals",
        "max_wronskian",
        max(|e| e.residuals.wronskian),
    ));
    residuals.push_value(ValueRow::new("residuals", "max_r1", max(|e| e.residuals.r1)));
    residuals.push_value(ValueRow::new("residuals", "max_r2", max(|e| e.residuals.r2)));
    residuals.push_value(ValueRow::new("residuals", "max_r3", max(|e| e.residuals.r3)));
    values.finish();
    residuals.finish();
    (values, residuals)
}

pub fn certify<M: RowMap + ?Sized>(exec: &M, seed: u64, points: usize) -> Report {
    let (mut r, residuals) = certify_parts(exec, seed, points);
    r.merge(residuals);
    r.finish();
    r
}

pub fn parse_target(s: &str) -> RunResult<TargetKind> {
    TargetKind::ALL
        .into_iter()
        .find(|k| k.name().eq_ignore_ascii_case(s))
        .ok_or_else(|| {
            usage(
                "--target",
                format!("expected I_ratio, K_ratio, I_logderiv, K_logderiv or audit, got {s:?}"),
            )
        })
}

/// Sandwich verdicts for one bounded quantity over a grid.
pub fn bounds<M: RowMap + ?Sized>(exec: &M, kind: TargetKind, nu: &Grid, u: &Grid) -> RunResult<Report> {
    let mut r = Report::new("bounds", true);
    r.set("target", kind.name());
    r.set("nu", grid_value(nu));
    r.set("u", grid_value(u));
    let nus = nu.points();
    let us = u.points();
    let rows = exec.map_rows(nus.len(), &|i| -> turan_core::Result<ScanReport> {
        let mut s = ScanReport::new();
        for &x in &us {
            let p = OrderArg::new(nus[i], x)?;
            for v in bounds::sandwich_verdicts(kind, p)? {
                s.push(v);
            }
        }
        Ok(s)
    });
    for row in rows {
        let row = row?;
        for v in &row.verdicts {
            r.push_verdict("bounds", v);
            if v.fails() {
                r.push_counterexample("bounds", &Counterexample::from_verdict(v));
            }
        }
    }
    r.finish();
    Ok(r)
}

/// Equivalence audit: per-member tallies as values, disagreements as
/// counterexamples (one per member verdict at the point).
pub fn audit<M: RowMap + ?Sized>(exec: &M, nu: &Grid, u: &Grid) -> RunResult<Report> {
    let mut r = Report::new("audit", true);
    r.set("nu", grid_value(nu));
    r.set("u", grid_value(u));
    let a = equivalence::equivalence_audit(exec, nu, u)?;
    r.push_value(ValueRow::new("audit", "compared", a.compared as f64));
    r.push_value(ValueRow::new("audit", "excluded", a.excluded as f64));
    r.push_value(ValueRow::new("audit", "disagreements", a.disagreements.len() as f64));
    for m in &a.members {
        let name = |what: &str| format!("{}.{what}", m.label);
        r.push_value(ValueRow::new("audit", &name("holds"), m.holds as f64));
        r.push_value(ValueRow::new("audit", &name("fails"), m.fails as f64));
        r.push_value(ValueRow::new("audit", &name("indeterminate"), m.indeterminate as f64));
        r.push_value(ValueRow::new(
            "audit",
            &name("min_slack"),
            m.min_slack.unwrap_or(f64::NAN),
        ));
    }
    for d in &a.disagreements {
        for v in &d.verdicts {
            r.push_counterexample(&format!("audit-{}", d.family), &Counterexample::from_verdict(v));
        }
    }
    r.finish();
    Ok(r)
}

pub fn parse_label(s: &str) -> RunResult<TuranLabel> {
    s.parse()
        .map_err(|_| usage("--label", format!("expected t1..t7 or phi, got {s:?}")))
}

pub fn turan_scan<M: RowMap + ?Sized>(exec: &M, label: TuranLabel, nu: &Grid, u: &Grid) -> RunResult<Report> {
    let mut r = Report::new("turan", true);
    r.set("label", label.name());
    r.set("nu", grid_value(nu));
    r.set("u", grid_value(u));
    let s = turan::turan_scan(exec, label, nu, u)?;
    r.absorb(label.name(), &s);
    r.finish();
    Ok(r)
}

/// Counterexample search; exploratory.
pub fn hunt<M: RowMap + ?Sized>(
    exec: &M,
    label: TuranLabel,
    nu: (f64, f64),
    u: (f64, f64),
    budget: usize,
) -> RunResult<Report> {
    let mut r = Report::new("hunt", false);
    r.set("label", label.name());
    r.set("nu_range", vec![nu.0, nu.1]);
    r.set("u_range", vec![u.0, u.1]);
    r.set("budget", budget);
    let found = turan::counterexample_search(exec, label, nu, u, budget)?;
    for c in &found {
        r.push_counterexample(&format!("hunt-{}", label.name()), c);
    }
    r.finish();
    Ok(r)
}

pub fn sharpness(kind: Sharpness, nu: &Grid, u: f64, tol: f64) -> RunResult<Report> {
    let mut r = Report::new("sharpness", true);
    r.set("nu", grid_value(nu));
    r.set("u", u);
    r.set("tol", tol);
    for n in nu.points() {
        let v = turan::sharpness_check(kind, OrderArg::new(n, u)?, tol)?;
        r.push_verdict(kind.name(), &v);
    }
    r.finish();
    Ok(r)
}

pub const PRODUCT_CHECKS: [&str; 11] = [
    "value",
    "h1",
    "h1-convex",
    "h2",
    "h2-concavity",
    "h5",
    "h6",
    "order",
    "u-shape",
    "half-order",
    "integral",
];

/// Replaces indeterminate verdicts that `target_of` can map to an oracle
/// target with the oracle's verdict; returns how many were decided.
/// Counterexamples are rebuilt from the failing verdicts.
pub fn resolve_scan(scan: &mut ScanReport, target_of: &dyn Fn(&InequalityVerdict) -> Option<Target>) -> usize {
    let mut decided = 0;
    for v in scan.verdicts.iter_mut() {
        if v.outcome != Outcome::Indeterminate {
            continue;
        }
        let Some(t) = target_of(v) else { continue };
        if let Ok(w) = resolve::resolve(&v.label, t, v.point) {
            if w.outcome != Outcome::Indeterminate {
                decided += 1;
            }
            *v = w;
        }
    }
    scan.counterexamples = scan
        .verdicts
        .iter()
        .filter(|v| v.fails())
        .map(Counterexample::from_verdict)
        .collect();
    decided
}

fn u_shape_target(grid: &[f64]) -> impl Fn(&InequalityVerdict) -> Option<Target> + '_ {
    move |v| {
        if v.label == "uP-concave-discrete" {
            let i = grid.iter().position(|&x| x == v.point.u())?;
            Some(Target::UpConcaveDiscrete {
                u0: grid[i.checked_sub(1)?],
                u2: *grid.get(i + 1)?,
            })
        } else {
            Target::for_label(&v.label)
        }
    }
}

/// Product checks; `n_max` applies to `h1`, `tol` to `half-order` and
/// `integral`. With `resolve`, indeterminate `h2-concavity` and `u-shape`
/// verdicts are re-evaluated by the oracle.
pub fn product_checks(check: &str, nu: &Grid, u: &Grid, n_max: u32, tol: f64, resolve: bool) -> RunResult<Report> {
    let mut r = Report::new("product", check != "h1-convex");
    if resolve {
        r.set("resolve", true);
    }
    let mut decided = 0;
    r.set("check", check);
    r.set("nu", grid_value(nu));
    r.set("u", grid_value(u));
    let suite = format!("product-{check}");
    let point_check = |f: fn(OrderArg) -> turan_core::Result<InequalityVerdict>, r: &mut Report| -> RunResult<usize> {
        let mut s = ScanReport::new();
        for n in nu.points() {
            for x in u.points() {
                s.push(f(OrderArg::new(n, x)?)?);
            }
        }
        let decided = if resolve {
            resolve_scan(&mut s, &|v| Target::for_label(&v.label))
        } else {
            0
        };
        r.absorb(&suite, &s);
        Ok(decided)
    };
    match check {
        "value" => {
            for n in nu.points() {
                for x in u.points() {
                    let v = product::eval_p(OrderArg::new(n, x)?, 2)?;
                    r.push_value(ValueRow::new(&suite, "P", v.p).at(n, x).err(v.abs_err_est));
                    r.push_value(ValueRow::new(&suite, "dP", v.dp_du.unwrap_or(f64::NAN)).at(n, x));
                    r.push_value(ValueRow::new(&suite, "d2P", v.d2p_du2.unwrap_or(f64::NAN)).at(n, x));
                }
            }
        }
        "h1" | "h1-convex" => {
            r.set("n_max", n_max);
            let want = if check == "h1" { "h1-decreasing" } else { "h1-convex" };
            for x in u.points() {
                let full = product::sequence_scan(x, n_max)?;
                let mut s = ScanReport::new();
                for v in full.verdicts.into_iter().filter(|v| v.label == want) {
                    s.push(v);
                }
                s.counterexamples = s
                    .verdicts
                    .iter()
                    .filter(|v| v.fails())
                    .map(Counterexample::from_verdict)
                    .collect();
                r.absorb(&suite, &s);
            }
        }
        "h2" => decided += point_check(product::check_h2, &mut r)?,
        "h2-concavity" => decided += point_check(product::check_h2_concavity_form, &mut r)?,
        "h5" => decided += point_check(product::check_h5, &mut r)?,
        "h6" => decided += point_check(product::check_h6, &mut r)?,
        "order" => {
            for x in u.points() {
                r.absorb(&suite, &product::order_monotonicity_scan(x, nu)?);
            }
        }
        "u-shape" => {
            let us = u.points();
            for n in nu.points() {
                let mut s = product::u_shape_checks(n, u)?;
                if resolve {
                    decided += resolve_scan(&mut s, &u_shape_target(&us));
                }
                r.absorb(&suite, &s);
            }
        }
        "half-order" => {
            r.set("tol", tol);
            for x in u.points() {
                r.push_verdict(&suite, &product::half_order_identity(x, tol)?);
            }
        }
        "integral" => {
            r.set("tol", tol);
            for n in nu.points() {
                for x in u.points() {
                    r.push_verdict(&suite, &product::product_integral_check(OrderArg::new(n, x)?, tol)?);
                }
            }
        }
        other => {
            return Err(usage(
                "--check",
                format!(
                    "unknown product check {other:?}; expected one of {}",
                    PRODUCT_CHECKS.join(", ")
                ),
            ))
        }
    }
    if resolve {
        r.push_value(ValueRow::new(&suite, "oracle_resolved", decided as f64));
    }
    r.finish();
    Ok(r)
}

/// Settings for `order-scan`.
#[derive(Clone, Debug)]
pub struct OrderScan {
    pub check: String,
    pub kind: Option<String>,
    pub fact: Option<String>,
    pub h: f64,
    pub max_k: usize,
    pub alpha: f64,
    pub n: u32,
    pub v: Option<f64>,
    pub a: f64,
    /// Re-evaluate indeterminate `cm` verdicts with the oracle.
    pub resolve: bool,
}

impl Default for OrderScan {
    fn default() -> OrderScan {
        OrderScan {
            check: "theorem1".to_string(),
            kind: None,
            fact: None,
            h: 1.0,
            max_k: 4,
            alpha: 0.0,
            n: 1,
            v: None,
            a: 1.0,
            resolve: false,
        }
    }
}

pub fn order_scan<M: RowMap + ?Sized>(exec: &M, s: &OrderScan, nu: &Grid, u: &Grid) -> RunResult<Report> {
    let mut r = Report::new("order-scan", true);
    r.set("check", s.check.as_str());
    r.set("nu", grid_value(nu));
    r.set("u", grid_value(u));
    for x in u.points() {
        match s.check.as_str() {
            "theorem1" => r.absorb("theorem1", &order::theorem1_inequalities(exec, x, nu)?),
            "logconvex" => {
                let name = s
                    .kind
                    .as_deref()
                    .ok_or_else(|| usage("--kind", "required for logconvex"))?;
                let kind = OrderFunctionKind::parse(name)
                    .ok_or_else(|| usage("--kind", format!("unknown order function {name:?}")))?;
                r.set("kind", kind.name());
                r.set("h", s.h);
                if kind.property() == Property::ConjecturedLogConvex {
                    r.asserted = false;
                }
                r.absorb("logconvex", &order::logconvexity_check(exec, kind, x, nu, s.h)?);
            }
            "kratio" => {
                r.set("a", s.a);
                r.absorb("kratio", &order::kratio_monotone_check(x, s.a, nu)?);
            }
            "cm" => {
                let name = s.fact.as_deref().ok_or_else(|| usage("--fact", "required for cm"))?;
                let fact = match name {
                    "a" => CmFact::A,
                    "b" => CmFact::B,
                    "c" => CmFact::C { alpha: s.alpha, n: s.n },
                    "d" => CmFact::D { v: s.v.unwrap_or(x) },
                    other => return Err(usage("--fact", format!("expected a, b, c or d, got {other:?}"))),
                };
                r.set("fact", name);
                r.set("h", s.h);
                r.set("max_k", s.max_k);
                let mut scan = order::cm_check(fact, x, nu, s.max_k, s.h)?;
                if s.resolve {
                    let h = s.h;
                    let decided = resolve_scan(&mut scan, &|v| {
                        let k = v.label.rsplit('/').next()?.parse().ok()?;
                        Some(Target::Cm { fact, k, h })
                    });
                    r.push_value(ValueRow::new(fact.name(), "oracle_resolved", decided as f64).at(f64::NAN, x));
                }
                r.absorb(fact.name(), &scan);
            }
            other => {
                return Err(usage(
                    "--check",
                    format!("expected theorem1, logconvex, kratio or cm, got {other:?}"),
                ))
            }
        }
    }
    r.finish();
    Ok(r)
}

pub const IDENTITIES: [&str; 4] = ["gamma-ratio", "nicholson", "phi", "product"];

pub fn integral_check(identity: &str, nu: &Grid, u: &Grid, tol: f64) -> RunResult<Report> {
    let mut r = Report::new("integral-check", true);
    r.set("identity", identity);
    r.set("nu", grid_value(nu));
    r.set("u", grid_value(u));
    r.set("tol", tol);
    for n in nu.points() {
        for x in u.points() {
            match identity {
                "gamma-ratio" => r.push_verdict(identity, &integrals::k_ratio_integral_check(n, x, tol)?),
                "nicholson" => r.push_verdict(identity, &integrals::nicholson_check(n, x, tol)?),
                "phi" => {
                    let (a, b) = integrals::phi_integral_check(n, x, tol)?;
                    r.push_verdict(identity, &a);
                    r.push_verdict(identity, &b);
                }
                "product" => r.push_verdict(identity, &product::product_integral_check(OrderArg::new(n, x)?, tol)?),
                other => {
                    return Err(usage(
                        "--identity",
                        format!("unknown identity {other:?}; expected one of {}", IDENTITIES.join(", ")),
                    ))
                }
            }
        }
    }
    r.finish();
    Ok(r)
}

fn key(nu: f64, u: f64) -> (u64, u64) {
    (nu.to_bits(), u.to_bits())
}

/// Log-convexity explorer over several steps. Persistent candidates are
/// recomputed with the oracle; those the oracle confirms are listed with
/// `oracle_slack`, the rest are counted as dismissed.
pub fn conjecture<M: RowMap + ?Sized>(exec: &M, nu: &Grid, u: &Grid, hs: &[f64]) -> RunResult<Report> {
    let mut r = Report::new("conjecture", false);
    r.set("nu", grid_value(nu));
    r.set("u", grid_value(u));
    r.set("h", hs.to_vec());
    r.set("persist_halvings", product::PERSIST_HALVINGS);
    let mut candidates: Vec<Counterexample> = Vec::new();
    let mut per_h = BTreeMap::new();
    for &h in hs {
        let s = product::conjecture_scan(exec, u, nu, h)?;
        per_h.insert(h.to_bits(), (s.verdicts.len(), s.count(Outcome::Fails), s.min_slack()));
        for v in &s.verdicts {
            r.push_verdict(&format!("conjecture-h={h}"), v);
        }
        candidates.extend(s.counterexamples);
    }

    let mut needed: Vec<(f64, f64)> = Vec::new();
    let mut seen = HashMap::new();
    for c in &candidates {
        let h = c.h.expect("conjecture candidates carry h");
        let (n, x) = (c.point.nu(), c.point.u());
        for m in [n, n + h, n + 2.0 * h] {
            if seen.insert(key(m, x), ()).is_none() {
                needed.push((m, x));
            }
        }
    }
    let values = exec.map_rows(needed.len(), &|i| {
        let (m, x) = needed[i];
        OrderArg::new(m, x).ok().and_then(|p| oracle::oracle_p(p).ok())
    });
    let table: HashMap<(u64, u64), Option<OracleValue>> =
        needed.iter().zip(values).map(|(&(m, x), v)| (key(m, x), v)).collect();

    let mut dismissed = 0usize;
    for mut c in candidates {
        let h = c.h.expect("conjecture candidates carry h");
        let (n, x) = (c.point.nu(), c.point.u());
        let get = |m: f64| table.get(&key(m, x)).and_then(Option::as_ref);
        c.oracle_slack = match (get(n), get(n + 2.0 * h), get(n + h)) {
            (Some(a), Some(b), Some(m)) => Some(oracle::midpoint_slack(a, b, m)),
            _ => None,
        };
        if c.oracle_slack.is_some_and(|s| s >= 0.0) {
            dismissed += 1;
        } else {
            r.push_counterexample("conjecture", &c);
        }
    }
    for (bits, (n, fails, min)) in per_h {
        let h = f64::from_bits(bits);
        r.push_value(ValueRow::new("conjecture", &format!("h={h}.points"), n as f64));
        r.push_value(ValueRow::new("conjecture", &format!("h={h}.failing"), fails as f64));
        r.push_value(ValueRow::new(
            "conjecture",
            &format!("h={h}.min_slack"),
            min.unwrap_or(f64::NAN),
        ));
    }
    r.push_value(ValueRow::new("conjecture", "oracle_dismissed", dismissed as f64));
    r.finish();
    Ok(r)
}
