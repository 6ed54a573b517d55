//! Log-convexity and complete monotonicity in the order variable.
//!
//! All functions of `nu` here are compared at one fixed argument, so the
//! exponential scale factors of `I` and `K` cancel and scaled values are
//! used throughout.

use alloc::vec::Vec;

use crate::bessel::{self, Approx, OrderArg};
use crate::error::{domain, Result};
use crate::grid::Grid;
use crate::scan::{Counterexample, RowMap, ScanReport};
use crate::verdict::InequalityVerdict;

const EPS: f64 = f64::EPSILON;

/// Property asserted for an order function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    LogConvex,
    LogConcave,
    /// Believed log-convex, not proved; reported but never asserted.
    ConjecturedLogConvex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderFunctionKind {
    /// `nu ↦ I_{√nu}(u)`
    ISqrt,
    /// `nu ↦ K_{√nu}(u)`
    KSqrt,
    /// `nu ↦ K_{√nu}(u) / K_{√nu+1}(u)`
    KratioSqrt,
    /// `nu ↦ I_{√nu}(u) K_{√nu}(u)`
    PSqrt,
    /// `nu ↦ I_{√nu}(u) / K_{√nu}(u)`
    IoverKSqrt,
    /// `nu ↦ I_nu(u) / K_nu(u)`
    IoverKPlain,
    KPlain,
    IPlain,
    PPlain,
}

impl OrderFunctionKind {
    pub const ALL: [OrderFunctionKind; 9] = [
        OrderFunctionKind::ISqrt,
        OrderFunctionKind::KSqrt,
        OrderFunctionKind::KratioSqrt,
        OrderFunctionKind::PSqrt,
        OrderFunctionKind::IoverKSqrt,
        OrderFunctionKind::IoverKPlain,
        OrderFunctionKind::KPlain,
        OrderFunctionKind::IPlain,
        OrderFunctionKind::PPlain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrderFunctionKind::ISqrt => "I_sqrt",
            OrderFunctionKind::KSqrt => "K_sqrt",
            OrderFunctionKind::KratioSqrt => "Kratio_sqrt",
            OrderFunctionKind::PSqrt => "P_sqrt",
            OrderFunctionKind::IoverKSqrt => "IoverK_sqrt",
            OrderFunctionKind::IoverKPlain => "IoverK_plain",
            OrderFunctionKind::KPlain => "K_plain",
            OrderFunctionKind::IPlain => "I_plain",
            OrderFunctionKind::PPlain => "P_plain",
        }
    }

    pub fn parse(s: &str) -> Option<OrderFunctionKind> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s.trim()))
    }

    pub fn property(self) -> Property {
        match self {
            OrderFunctionKind::ISqrt
            | OrderFunctionKind::PSqrt
            | OrderFunctionKind::IoverKSqrt
            | OrderFunctionKind::KPlain
            | OrderFunctionKind::KratioSqrt => Property::LogConvex,
            OrderFunctionKind::KSqrt | OrderFunctionKind::IPlain | OrderFunctionKind::IoverKPlain => {
                Property::LogConcave
            }
            OrderFunctionKind::PPlain => Property::ConjecturedLogConvex,
        }
    }

    /// Open lower end of the order domain.
    pub fn domain_lo(self) -> f64 {
        match self {
            OrderFunctionKind::IoverKPlain | OrderFunctionKind::IPlain => -1.0,
            OrderFunctionKind::KPlain => bessel::NU_MIN - 1.0,
            OrderFunctionKind::PPlain => -1.0,
            _ => 0.0,
        }
    }

    /// The function at order `nu`, up to a factor depending only on `u`.
    pub fn eval(self, nu: f64, u: f64) -> Result<Approx> {
        let s = || libm::sqrt(nu);
        match self {
            OrderFunctionKind::ISqrt => bessel::scaled_i(s(), u),
            OrderFunctionKind::KSqrt => bessel::scaled_k(s(), u),
            OrderFunctionKind::KratioSqrt => Ok(bessel::scaled_k(s(), u)?.div(bessel::scaled_k(s() + 1.0, u)?)),
            OrderFunctionKind::PSqrt => bessel::product(s(), u),
            OrderFunctionKind::IoverKSqrt => Ok(bessel::scaled_i(s(), u)?.div(bessel::scaled_k(s(), u)?)),
            OrderFunctionKind::IoverKPlain => Ok(bessel::scaled_i(nu, u)?.div(bessel::scaled_k(nu, u)?)),
            OrderFunctionKind::KPlain => bessel::scaled_k(nu, u),
            OrderFunctionKind::IPlain => bessel::scaled_i(nu, u),
            OrderFunctionKind::PPlain => bessel::product(nu, u),
        }
    }
}

/// `f(nu) f(nu+2h) / f(nu+h)² - 1` with its error estimate.
fn midpoint_ratio(f: &dyn Fn(f64) -> Result<Approx>, nu: f64, h: f64) -> Result<(f64, f64)> {
    let a = f(nu)?;
    let b = f(nu + 2.0 * h)?;
    let m = f(nu + h)?;
    let r = a.mul(b).div(m.mul(m));
    let v = r.value.to_f64();
    Ok((v - 1.0, (r.rel_err + EPS) * v.abs()))
}

/// Midpoint verdict for `kind`, positive slack when the kind's property
/// holds at `(nu, h)`.
pub fn midpoint_verdict(kind: OrderFunctionKind, nu: f64, u: f64, h: f64) -> Result<InequalityVerdict> {
    let (s, e) = midpoint_ratio(&|x| kind.eval(x, u), nu, h)?;
    let s = match kind.property() {
        Property::LogConcave => -s,
        _ => s,
    };
    Ok(InequalityVerdict::new(kind.name(), OrderArg::new(nu, u)?, s, e))
}

fn check_domain(kind: OrderFunctionKind, nus: &[f64], h: f64) -> Result<()> {
    if !(h > 0.0) {
        return Err(domain("h", h, "step must be positive"));
    }
    for &n in nus {
        if !(n > kind.domain_lo()) {
            return Err(domain("nu", n, "grid leaves the domain of the order function"));
        }
        if n + 2.0 * h > bessel::NU_MAX {
            return Err(domain("nu", n + 2.0 * h, "nu + 2h exceeds the evaluation window"));
        }
    }
    Ok(())
}

fn finish(mut r: ScanReport) -> ScanReport {
    r.counterexamples = r
        .verdicts
        .iter()
        .filter(|v| v.fails())
        .map(Counterexample::from_verdict)
        .collect();
    r
}

fn rows<M: RowMap + ?Sized>(
    exec: &M,
    n: usize,
    f: &(dyn Fn(usize) -> Result<ScanReport> + Sync),
) -> Result<ScanReport> {
    let mut out = ScanReport::new();
    for r in exec.map_rows(n, f) {
        out.extend(r?);
    }
    Ok(finish(out))
}

/// Midpoint log-convexity (or log-concavity) verdicts at each grid order.
pub fn logconvexity_check<M: RowMap + ?Sized>(
    exec: &M,
    kind: OrderFunctionKind,
    u: f64,
    nu_grid: &Grid,
    h: f64,
) -> Result<ScanReport> {
    let nus = nu_grid.points();
    check_domain(kind, &nus, h)?;
    rows(exec, nus.len(), &|i| {
        let mut r = ScanReport::new();
        r.push(midpoint_verdict(kind, nus[i], u, h)?);
        Ok(r)
    })
}

/// The six step-one inequalities at each grid order, labelled `th1-1`
/// to `th1-6`. The sixth is checked in the log-concave direction.
pub fn theorem1_inequalities<M: RowMap + ?Sized>(exec: &M, u: f64, nu_grid: &Grid) -> Result<ScanReport> {
    let nus = nu_grid.points();
    check_domain(OrderFunctionKind::ISqrt, &nus, 1.0)?;
    let streams = [
        ("th1-1", OrderFunctionKind::ISqrt),
        ("th1-2", OrderFunctionKind::KSqrt),
        ("th1-4", OrderFunctionKind::PSqrt),
        ("th1-5", OrderFunctionKind::IoverKSqrt),
        ("th1-6", OrderFunctionKind::IoverKPlain),
    ];
    rows(exec, nus.len(), &|i| {
        let nu = nus[i];
        let p = OrderArg::new(nu, u)?;
        let mut r = ScanReport::new();
        for (label, kind) in streams {
            let v = midpoint_verdict(kind, nu, u, 1.0)?;
            r.push(InequalityVerdict::new(
                label,
                p,
                v.slack,
                v.err_budget / crate::verdict::DEADBAND_FACTOR,
            ));
        }
        // K_{√(nu+1)} K_{√nu+1} <= K_{√nu} K_{√(nu+1)+1}
        let (s0, s1) = (libm::sqrt(nu), libm::sqrt(nu + 1.0));
        let num = bessel::scaled_k(s0, u)?.mul(bessel::scaled_k(s1 + 1.0, u)?);
        let den = bessel::scaled_k(s1, u)?.mul(bessel::scaled_k(s0 + 1.0, u)?);
        let q = num.div(den);
        let v = q.value.to_f64();
        r.push(InequalityVerdict::new("th1-3", p, v - 1.0, (q.rel_err + EPS) * v));
        r.verdicts.sort_by(|a, b| a.label.cmp(&b.label));
        Ok(r)
    })
}

fn ratio_step(a: Approx, b: Approx) -> (f64, f64) {
    let q = b.div(a);
    let v = q.value.to_f64();
    (v - 1.0, (q.rel_err + EPS) * v)
}

/// Two streams over consecutive grid orders: `kratio-shift`, that
/// `K_{nu+a}/K_nu` increases, and `kratio-sqrt`, that
/// `K_{√nu}/K_{√nu+1}` decreases (orders `>= 0` only).
pub fn kratio_monotone_check(u: f64, a: f64, nu_grid: &Grid) -> Result<ScanReport> {
    if !(a > 0.0) {
        return Err(domain("a", a, "shift must be positive"));
    }
    let nus = nu_grid.points();
    let mut r = ScanReport::new();
    let shift = |nu: f64| -> Result<Approx> { Ok(bessel::scaled_k(nu + a, u)?.div(bessel::scaled_k(nu, u)?)) };
    let sq = |nu: f64| OrderFunctionKind::KratioSqrt.eval(nu, u);
    for w in nus.windows(2) {
        let p = OrderArg::new(w[0], u)?;
        let (s, e) = ratio_step(shift(w[0])?, shift(w[1])?);
        r.push(InequalityVerdict::new("kratio-shift", p, s, e));
        if w[0] >= 0.0 {
            let (s, e) = ratio_step(sq(w[1])?, sq(w[0])?);
            r.push(InequalityVerdict::new("kratio-sqrt", p, s, e));
        }
    }
    Ok(finish(r))
}

/// Functions whose complete monotonicity in `nu` is checked.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CmFact {
    /// `I_{√nu}(u)`
    A,
    /// `1 / K_{√nu}(u)`
    B,
    /// `K_{√nu+alpha}(u) / K_{√nu+alpha+n}(u)`
    C { alpha: f64, n: u32 },
    /// `I_{√nu}(u) K_{√nu}(v)`, `v >= u`
    D { v: f64 },
}

impl CmFact {
    pub fn name(self) -> &'static str {
        match self {
            CmFact::A => "cm-a",
            CmFact::B => "cm-b",
            CmFact::C { .. } => "cm-c",
            CmFact::D { .. } => "cm-d",
        }
    }

    fn eval(self, nu: f64, u: f64) -> Result<Approx> {
        let s = libm::sqrt(nu);
        match self {
            CmFact::A => bessel::scaled_i(s, u),
            CmFact::B => {
                let k = bessel::scaled_k(s, u)?;
                Ok(Approx::new(k.value.recip(), k.rel_err + EPS))
            }
            CmFact::C { alpha, n } => {
                Ok(bessel::scaled_k(s + alpha, u)?.div(bessel::scaled_k(s + alpha + n as f64, u)?))
            }
            CmFact::D { v } => Ok(bessel::scaled_i(s, u)?.mul(bessel::scaled_k(s, v)?)),
        }
    }
}

fn binom(k: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

/// Sign-alternating forward differences `(-1)^k Δ_h^k f(nu)` for
/// `k = 0..=max_k`, relative to `f(nu)`, labelled `cm-x/k`.
///
/// The error budget propagates the relative error of each sample through
/// the difference plus `2^k` roundings.
pub fn cm_check(fact: CmFact, u: f64, nu_grid: &Grid, max_k: usize, h: f64) -> Result<ScanReport> {
    if max_k > 4 {
        return Err(domain("max_k", max_k as f64, "differences beyond order 4 are roundoff"));
    }
    if !(h > 0.0) {
        return Err(domain("h", h, "step must be positive"));
    }
    if let CmFact::D { v } = fact {
        if v < u {
            return Err(domain("v", v, "needs v >= u"));
        }
    }
    let nus = nu_grid.points();
    let mut r = ScanReport::new();
    for &nu in &nus {
        if !(nu > 0.0) {
            return Err(domain("nu", nu, "complete monotonicity is checked on (0, inf)"));
        }
        let p = OrderArg::new(nu, u)?;
        let samples: Vec<Approx> = (0..=max_k)
            .map(|j| fact.eval(nu + j as f64 * h, u))
            .collect::<Result<_>>()?;
        let base = samples[0].value;
        let rel: Vec<(f64, f64)> = samples
            .iter()
            .map(|a| (a.value.div(base).to_f64(), a.rel_err + samples[0].rel_err + EPS))
            .collect();
        for k in 0..=max_k {
            let mut d = 0.0;
            let mut noise = 0.0;
            for (j, &(f, e)) in rel.iter().enumerate().take(k + 1) {
                let c = binom(k, j);
                let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                d += sign * c * f;
                noise += c * f.abs() * e;
            }
            noise += libm::ldexp(EPS, k as i32);
            let alt = if k % 2 == 0 { d } else { -d };
            r.push(InequalityVerdict::new(cm_label(fact, k), p, alt, noise));
        }
    }
    Ok(finish(r))
}

fn cm_label(fact: CmFact, k: usize) -> &'static str {
    const LABELS: [[&str; 5]; 4] = [
        ["cm-a/0", "cm-a/1", "cm-a/2", "cm-a/3", "cm-a/4"],
        ["cm-b/0", "cm-b/1", "cm-b/2", "cm-b/3", "cm-b/4"],
        ["cm-c/0", "cm-c/1", "cm-c/2", "cm-c/3", "cm-c/4"],
        ["cm-d/0", "cm-d/1", "cm-d/2", "cm-d/3", "cm-d/4"],
    ];
    let row = match fact {
        CmFact::A => 0,
        CmFact::B => 1,
        CmFact::C { .. } => 2,
        CmFact::D { .. } => 3,
    };
    LABELS[row][k]
}
