//! Turán determinants of `I` and `K`, normalized by the squared middle
//! term, and searches for points where they change sign.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bessel::{self, Approx, OrderArg};
use crate::error::{domain, Error, Result};
use crate::grid::Grid;
use crate::scan::{Counterexample, RowMap, ScanReport};
use crate::verdict::{InequalityVerdict, Outcome};

const EPS: f64 = f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TuranLabel {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    Phi,
}

impl TuranLabel {
    pub const ALL: [TuranLabel; 8] = [
        TuranLabel::T1,
        TuranLabel::T2,
        TuranLabel::T3,
        TuranLabel::T4,
        TuranLabel::T5,
        TuranLabel::T6,
        TuranLabel::T7,
        TuranLabel::Phi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TuranLabel::T1 => "t1",
            TuranLabel::T2 => "t2",
            TuranLabel::T3 => "t3",
            TuranLabel::T4 => "t4",
            TuranLabel::T5 => "t5",
            TuranLabel::T6 => "t6",
            TuranLabel::T7 => "t7",
            TuranLabel::Phi => "phi",
        }
    }

    /// `+1` if a positive gap means the inequality holds, `-1` otherwise.
    pub fn orientation(self) -> f64 {
        match self {
            TuranLabel::T1 | TuranLabel::T5 | TuranLabel::T6 | TuranLabel::Phi => -1.0,
            _ => 1.0,
        }
    }

    /// Orders at which the gap is defined.
    pub fn defined_at(self, nu: f64) -> bool {
        match self {
            TuranLabel::T1 | TuranLabel::T3 => nu > -1.0 && nu - 1.0 >= bessel::NU_MIN,
            TuranLabel::T4 => nu > 1.0,
            TuranLabel::T6 => nu != 1.0,
            _ => true,
        }
    }
}

impl fmt::Display for TuranLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TuranLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<TuranLabel> {
        TuranLabel::ALL
            .into_iter()
            .find(|l| l.name() == s.trim())
            .ok_or_else(|| domain("label", f64::NAN, "expected one of t1..t7, phi"))
    }
}

/// A normalized Turán gap at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TuranGap {
    pub label: TuranLabel,
    pub value: f64,
    pub nu: f64,
    pub u: f64,
    /// Absolute error estimate of `value`.
    pub err: f64,
}

impl TuranGap {
    fn new(label: TuranLabel, p: OrderArg, value: f64, err: f64) -> TuranGap {
        TuranGap {
            label,
            value,
            nu: p.nu(),
            u: p.u(),
            err,
        }
    }

    pub fn verdict(&self) -> InequalityVerdict {
        let p = OrderArg::new(self.nu, self.u).expect("gap computed at a valid point");
        InequalityVerdict::new(self.label.name(), p, self.label.orientation() * self.value, self.err)
    }
}

/// `I_{nu-1} I_{nu+1} / I_nu²` from scaled values.
pub fn ratio_i(nu: f64, u: f64) -> Result<Approx> {
    let m = bessel::scaled_i(nu, u)?;
    let lo = bessel::scaled_i(nu - 1.0, u)?;
    let hi = bessel::scaled_i(nu + 1.0, u)?;
    Ok(lo.mul(hi).div(m.mul(m)))
}

/// `K_{nu-1} K_{nu+1} / K_nu²` from scaled values; even in `nu`.
pub fn ratio_k(nu: f64, u: f64) -> Result<Approx> {
    let m = bessel::scaled_k(nu, u)?;
    let lo = bessel::scaled_k(nu - 1.0, u)?;
    let hi = bessel::scaled_k(nu + 1.0, u)?;
    Ok(lo.mul(hi).div(m.mul(m)))
}

fn f64_ratio(r: Approx) -> (f64, f64) {
    let v = r.value.to_f64();
    (v, r.rel_err * v.abs() + EPS * v.abs())
}

fn require(label: TuranLabel, p: OrderArg) -> Result<()> {
    if label.defined_at(p.nu()) {
        Ok(())
    } else {
        let reason = match label {
            TuranLabel::T4 => "t4 needs nu > 1",
            TuranLabel::T6 => "t6 is undefined at nu = 1",
            _ => "t1/t3 need nu > -1",
        };
        Err(domain("nu", p.nu(), reason))
    }
}

/// `I_{nu-1} I_{nu+1} / I_nu² - 1`, negative where `(t1)` holds.
pub fn turan_i(p: OrderArg) -> Result<TuranGap> {
    require(TuranLabel::T1, p)?;
    let (r, e) = f64_ratio(ratio_i(p.nu(), p.u())?);
    Ok(TuranGap::new(TuranLabel::T1, p, r - 1.0, e + EPS))
}

/// `K_{nu-1} K_{nu+1} / K_nu² - 1`, positive where `(t2)` holds.
pub fn turan_k(p: OrderArg) -> Result<TuranGap> {
    let (r, e) = f64_ratio(ratio_k(p.nu(), p.u())?);
    Ok(TuranGap::new(TuranLabel::T2, p, r - 1.0, e + EPS))
}

/// `1/(nu+1) - (1 - I_{nu-1} I_{nu+1} / I_nu²)`, positive where `(t3)` holds.
pub fn turan_i_sharp(p: OrderArg) -> Result<TuranGap> {
    require(TuranLabel::T3, p)?;
    let (r, e) = f64_ratio(ratio_i(p.nu(), p.u())?);
    let c = 1.0 / (p.nu() + 1.0);
    Ok(TuranGap::new(
        TuranLabel::T3,
        p,
        c - (1.0 - r),
        e + 2.0 * EPS * (1.0 + c),
    ))
}

/// `(1 - K_{nu-1} K_{nu+1} / K_nu²) - 1/(1-nu)`, positive where `(t4)`
/// holds; `nu > 1`.
pub fn turan_k_sharp(p: OrderArg) -> Result<TuranGap> {
    require(TuranLabel::T4, p)?;
    let (r, e) = f64_ratio(ratio_k(p.nu(), p.u())?);
    let c = 1.0 / (1.0 - p.nu());
    Ok(TuranGap::new(
        TuranLabel::T4,
        p,
        (1.0 - r) - c,
        e + 2.0 * EPS * (r + c.abs()),
    ))
}

/// `phi = 1 - K_{nu-1} K_{nu+1} / K_nu²`; never positive.
pub fn phi(p: OrderArg) -> Result<TuranGap> {
    let (r, e) = f64_ratio(ratio_k(p.nu(), p.u())?);
    Ok(TuranGap::new(TuranLabel::Phi, p, 1.0 - r, e + EPS))
}

/// The gaps of `(t5)`, `(t6)` and `(t7)`, each divided by `K_nu²`:
/// `(nu-1)R - (2nu-1)`, `(1-R) - nu/(1-nu)` and `(nu+1)R - (2nu+1)`.
///
/// `t7(nu) = -t5(-nu)` exactly. The `t6` gap is NaN at `nu = 1`.
pub fn gap_t5_t6_t7(p: OrderArg) -> Result<(TuranGap, TuranGap, TuranGap)> {
    let nu = p.nu();
    let (r, e) = f64_ratio(ratio_k(nu, p.u())?);
    let a5 = nu - 1.0;
    let b5 = 2.0 * nu - 1.0;
    let t5 = a5 * r - b5;
    let a7 = nu + 1.0;
    let b7 = 2.0 * nu + 1.0;
    let t7 = a7 * r - b7;
    let (t6, e6) = if nu == 1.0 {
        (f64::NAN, f64::NAN)
    } else {
        let c = nu / (1.0 - nu);
        ((1.0 - r) - c, e + 2.0 * EPS * (r + c.abs()))
    };
    let err = |a: f64, b: f64| a.abs() * e + 2.0 * EPS * (a.abs() * r + b.abs());
    Ok((
        TuranGap::new(TuranLabel::T5, p, t5, err(a5, b5)),
        TuranGap::new(TuranLabel::T6, p, t6, e6),
        TuranGap::new(TuranLabel::T7, p, t7, err(a7, b7)),
    ))
}

/// The gap for any label.
pub fn gap(label: TuranLabel, p: OrderArg) -> Result<TuranGap> {
    match label {
        TuranLabel::T1 => turan_i(p),
        TuranLabel::T2 => turan_k(p),
        TuranLabel::T3 => turan_i_sharp(p),
        TuranLabel::T4 => turan_k_sharp(p),
        TuranLabel::Phi => phi(p),
        TuranLabel::T5 => Ok(gap_t5_t6_t7(p)?.0),
        TuranLabel::T6 => {
            require(TuranLabel::T6, p)?;
            Ok(gap_t5_t6_t7(p)?.1)
        }
        TuranLabel::T7 => Ok(gap_t5_t6_t7(p)?.2),
    }
}

pub fn verdict(label: TuranLabel, p: OrderArg) -> Result<InequalityVerdict> {
    Ok(gap(label, p)?.verdict())
}

/// Verdicts for `label` on the product grid, rows in `nu`.
pub fn turan_scan<M: RowMap + ?Sized>(exec: &M, label: TuranLabel, nu: &Grid, u: &Grid) -> Result<ScanReport> {
    let nus = nu.points();
    let us = u.points();
    for &n in &nus {
        if !label.defined_at(n) {
            return Err(domain("nu", n, "grid leaves the domain of the inequality"));
        }
    }
    let rows = exec.map_rows(nus.len(), &|i| -> Result<ScanReport> {
        let mut r = ScanReport::new();
        for &x in &us {
            r.push(verdict(label, OrderArg::new(nus[i], x)?)?);
        }
        Ok(r)
    });
    let mut out = ScanReport::new();
    for r in rows {
        out.extend(r?);
    }
    out.counterexamples = out
        .verdicts
        .iter()
        .filter(|v| v.fails())
        .map(Counterexample::from_verdict)
        .collect();
    Ok(out)
}

/// Which best-possible constant is being approached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sharpness {
    /// `1 - I_{nu-1}I_{nu+1}/I_nu² -> 1/(nu+1)` as `u -> 0`.
    T3SmallU,
    /// `K_{nu-1}K_{nu+1}/K_nu² -> 1` as `u -> ∞`.
    T2LargeU,
    /// `1 - K_{nu-1}K_{nu+1}/K_nu² -> 1/(1-nu)` as `u -> 0`, `nu > 1`.
    T4SmallU,
    /// `I_{nu-1}I_{nu+1}/I_nu² -> 1` as `u -> ∞`.
    T1LargeU,
}

impl Sharpness {
    pub fn name(self) -> &'static str {
        match self {
            Sharpness::T3SmallU => "sharp-t3",
            Sharpness::T2LargeU => "sharp-t2",
            Sharpness::T4SmallU => "sharp-t4",
            Sharpness::T1LargeU => "sharp-t1",
        }
    }
}

/// Verdict of `|distance to the limiting constant| <= tol`, slack
/// `tol - |distance|`.
pub fn sharpness_check(kind: Sharpness, p: OrderArg, tol: f64) -> Result<InequalityVerdict> {
    let g = match kind {
        Sharpness::T3SmallU => turan_i_sharp(p)?,
        Sharpness::T2LargeU => turan_k(p)?,
        Sharpness::T4SmallU => turan_k_sharp(p)?,
        Sharpness::T1LargeU => turan_i(p)?,
    };
    Ok(InequalityVerdict::new(kind.name(), p, tol - g.value.abs(), g.err))
}

/// Linear order grid with step 1/16 and log argument grid with 32 points
/// per decade, matching the coarse search density.
const NU_STEP: f64 = 1.0 / 16.0;
const U_PER_DECADE: u32 = 32;
const REFINE: usize = 8;

/// Coarse-to-fine search for points where `label` fails.
///
/// The coarse grid is refined `8x` in both directions inside every cell
/// whose corners include both a holding and a failing verdict. At most
/// `budget` verdicts are evaluated; an empty result is not a proof.
/// A `(t7)` search runs as a `(t5)` search at `-nu`, using `K_nu = K_{-nu}`.
pub fn counterexample_search<M: RowMap + ?Sized>(
    exec: &M,
    label: TuranLabel,
    nu_range: (f64, f64),
    u_range: (f64, f64),
    budget: usize,
) -> Result<Vec<Counterexample>> {
    if budget == 0 {
        return Err(domain("budget", 0.0, "must be at least 1"));
    }
    if label == TuranLabel::T7 {
        let mirrored = counterexample_search(exec, TuranLabel::T5, (-nu_range.1, -nu_range.0), u_range, budget)?;
        let mut out: Vec<Counterexample> = mirrored
            .into_iter()
            .map(|c| {
                let point = OrderArg::new(-c.point.nu(), c.point.u()).expect("mirrored point");
                Counterexample {
                    label: String::from(TuranLabel::T7.name()),
                    point,
                    ..c
                }
            })
            .collect();
        sort_points(&mut out);
        return Ok(out);
    }
    let nu_grid = Grid::linear(nu_range.0, nu_range.1, NU_STEP)?;
    let u_grid = Grid::log(u_range.0, u_range.1, U_PER_DECADE)?;
    let mut nus = nu_grid.points();
    nus.retain(|&n| label.defined_at(n));
    let us = u_grid.points();
    if nus.is_empty() {
        return Ok(Vec::new());
    }
    // Thin both axes if the coarse grid alone exceeds the budget.
    let total = nus.len() * us.len();
    let stride = if total > budget {
        libm::ceil(libm::sqrt(total as f64 / budget as f64)) as usize
    } else {
        1
    };
    let nus: Vec<f64> = nus.into_iter().step_by(stride).collect();
    let us: Vec<f64> = us.into_iter().step_by(stride).collect();

    let eval = |nu: f64, u: f64| -> Option<InequalityVerdict> {
        let p = OrderArg::new(nu, u).ok()?;
        verdict(label, p).ok()
    };
    let coarse: Vec<Vec<Option<InequalityVerdict>>> =
        exec.map_rows(nus.len(), &|i| us.iter().map(|&u| eval(nus[i], u)).collect());
    let mut used = nus.len() * us.len();
    let mut found: Vec<Counterexample> = coarse
        .iter()
        .flatten()
        .flatten()
        .filter(|v| v.fails())
        .map(Counterexample::from_verdict)
        .collect();

    let outcome = |v: &Option<InequalityVerdict>| v.as_ref().map(|v| v.outcome);
    let mut cells = Vec::new();
    for i in 0..nus.len().saturating_sub(1) {
        for j in 0..us.len().saturating_sub(1) {
            let corners = [
                outcome(&coarse[i][j]),
                outcome(&coarse[i + 1][j]),
                outcome(&coarse[i][j + 1]),
                outcome(&coarse[i + 1][j + 1]),
            ];
            let holds = corners.contains(&Some(Outcome::Holds));
            let fails = corners.contains(&Some(Outcome::Fails));
            if holds && fails {
                cells.push((i, j));
            }
        }
    }
    let per_cell = (REFINE + 1) * (REFINE + 1) - 4;
    let affordable = budget.saturating_sub(used) / per_cell;
    cells.truncate(affordable);
    used += cells.len() * per_cell;
    let refined = exec.map_rows(cells.len(), &|c| {
        let (i, j) = cells[c];
        let (n0, n1) = (nus[i], nus[i + 1]);
        let (l0, l1) = (libm::log(us[j]), libm::log(us[j + 1]));
        let mut out = Vec::new();
        for a in 0..=REFINE {
            for b in 0..=REFINE {
                if (a == 0 || a == REFINE) && (b == 0 || b == REFINE) {
                    continue;
                }
                let nu = n0 + (n1 - n0) * a as f64 / REFINE as f64;
                let u = libm::exp(l0 + (l1 - l0) * b as f64 / REFINE as f64);
                if let Some(v) = eval(nu, u) {
                    if v.fails() {
                        out.push(Counterexample::from_verdict(&v));
                    }
                }
            }
        }
        out
    });
    debug_assert!(used <= budget);
    found.extend(refined.into_iter().flatten());
    sort_points(&mut found);
    Ok(found)
}

fn sort_points(v: &mut Vec<Counterexample>) {
    v.sort_by(|a, b| {
        a.point
            .nu()
            .total_cmp(&b.point.nu())
            .then(a.point.u().total_cmp(&b.point.u()))
    });
    v.dedup_by(|a, b| a.point == b.point);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::Serial;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn pt(nu: f64, u: f64) -> OrderArg {
        OrderArg::new(nu, u).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs()
    }

    #[test]
    fn half_order_t1_determinant() {
        // I_{-1/2} I_{3/2} - I_{1/2}² = (2/(πu)) (1 - sinh(2u)/(2u))
        let u = 1.0;
        let g = turan_i(pt(0.5, u)).unwrap();
        let i_half_sq = 2.0 / (PI * u) * libm::sinh(u) * libm::sinh(u);
        let det = 2.0 / (PI * u) * (1.0 - libm::sinh(2.0 * u) / (2.0 * u));
        assert!(close(g.value, det / i_half_sq, 1e-14));
        assert!(g.verdict().holds());
    }

    #[test]
    fn integer_order_values() {
        // (I_1/I_0)² - 1 and (K_1/K_0)² - 1 at u = 1.
        let r_i = 0.565_159_103_992_485_03 / 1.266_065_877_752_008_4;
        let r_k = 0.601_907_230_197_234_57 / 0.421_024_438_240_708_33;
        assert!(close(turan_i(pt(0.0, 1.0)).unwrap().value, r_i * r_i - 1.0, 1e-14));
        assert!(close(turan_k(pt(0.0, 1.0)).unwrap().value, r_k * r_k - 1.0, 1e-14));
        assert!(close(turan_i_sharp(pt(0.0, 1.0)).unwrap().value, r_i * r_i, 1e-14));
    }

    #[test]
    fn half_order_closed_forms() {
        assert!(close(turan_k(pt(0.5, 1.0)).unwrap().value, 1.0, 1e-15));
        let t4 = turan_k_sharp(pt(1.5, 1.0)).unwrap();
        assert!(close(t4.value, 1.25, 1e-15));
        let t3 = turan_i_sharp(pt(0.5, 1.0)).unwrap();
        let s2 = libm::sinh(1.0) * libm::sinh(1.0);
        let one_minus_r = (libm::sinh(2.0) / 2.0 - 1.0) / s2;
        assert!(close(t3.value, 2.0 / 3.0 - one_minus_r, 1e-14));
        let (t5, _, _) = gap_t5_t6_t7(pt(0.5, 1.0)).unwrap();
        assert!(close(t5.value, -1.0, 1e-15));
    }

    #[test]
    fn t4_reference_point() {
        let g = turan_k_sharp(pt(2.0, 1.0)).unwrap();
        assert!(close(g.value, 0.381_008_637_61, 1e-10));
    }

    #[test]
    fn domains() {
        assert!(turan_k_sharp(pt(1.0, 1.0)).is_err());
        assert!(turan_i(pt(-1.0, 1.0)).is_err());
        assert!(gap(TuranLabel::T6, pt(1.0, 1.0)).is_err());
        let (_, t6, _) = gap_t5_t6_t7(pt(1.0, 1.0)).unwrap();
        assert!(t6.value.is_nan());
        assert_eq!(t6.verdict().outcome, Outcome::Indeterminate);
        assert_eq!("phi".parse::<TuranLabel>().unwrap(), TuranLabel::Phi);
        assert!("t8".parse::<TuranLabel>().is_err());
    }

    #[test]
    fn t6_fails_and_t5_holds_above_one() {
        for &nu in &[1.5, 2.0, 3.0, 7.25] {
            for &u in &[0.01, 1.0, 100.0] {
                let (t5, t6, _) = gap_t5_t6_t7(pt(nu, u)).unwrap();
                assert!(t5.verdict().holds(), "t5 at {nu}, {u}");
                assert!(t6.verdict().fails(), "t6 at {nu}, {u}");
            }
        }
    }

    #[test]
    fn t7_fails_for_positive_orders() {
        let (t5, _, t7) = gap_t5_t6_t7(pt(2.0, 1.0)).unwrap();
        assert!(t7.verdict().fails());
        assert!(t5.verdict().holds());
        let (t5, _, t7) = gap_t5_t6_t7(pt(-2.0, 1.0)).unwrap();
        assert!(t7.verdict().holds());
        assert!(t5.verdict().fails());
    }

    #[test]
    fn searches() {
        let hits = counterexample_search(&Serial, TuranLabel::T6, (1.5, 3.0), (1.0, 100.0), 1 << 16).unwrap();
        assert!(!hits.is_empty());
        assert!(hits
            .windows(2)
            .all(|w| (w[0].point.nu(), w[0].point.u()) < (w[1].point.nu(), w[1].point.u())));
        let none = counterexample_search(&Serial, TuranLabel::T2, (-5.0, 5.0), (0.01, 100.0), 1 << 16).unwrap();
        assert!(none.is_empty());
        let none = counterexample_search(&Serial, TuranLabel::T5, (0.0, 1.0), (0.01, 100.0), 1 << 16).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn t7_search_mirrors_t5() {
        let t7 = counterexample_search(&Serial, TuranLabel::T7, (1.5, 3.0), (1.0, 10.0), 1 << 14).unwrap();
        let t5 = counterexample_search(&Serial, TuranLabel::T5, (-3.0, -1.5), (1.0, 10.0), 1 << 14).unwrap();
        assert_eq!(t7.len(), t5.len());
        assert!(!t7.is_empty() && t7.iter().all(|c| c.label == "t7" && c.point.nu() >= 1.5));
    }

    #[test]
    fn budget_limits_work() {
        let hits = counterexample_search(&Serial, TuranLabel::T6, (1.5, 3.0), (1.0, 100.0), 10).unwrap();
        assert!(!hits.is_empty() && hits.len() <= 10);
        assert!(counterexample_search(&Serial, TuranLabel::T6, (1.5, 3.0), (1.0, 100.0), 0).is_err());
    }

    proptest! {
        #[test]
        fn t7_is_minus_t5_reflected(nu in -20.0f64..20.0, lu in -3.0f64..2.7) {
            let u = libm::pow(10.0, lu);
            let (_, _, t7) = gap_t5_t6_t7(pt(nu, u)).unwrap();
            let (t5, _, _) = gap_t5_t6_t7(pt(-nu, u)).unwrap();
            prop_assert_eq!(t7.value, -t5.value);
        }

        #[test]
        fn phi_is_minus_t2(nu in -20.0f64..20.0, lu in -3.0f64..2.7) {
            let p = pt(nu, libm::pow(10.0, lu));
            let a = turan_k(p).unwrap().value;
            let b = phi(p).unwrap().value;
            prop_assert!((a + b).abs() <= 2.0 * f64::EPSILON * a.abs().max(1.0));
            prop_assert!(b < 0.0);
        }

        #[test]
        fn core_inequalities_hold(nu in -0.99f64..20.0, lu in -3.0f64..2.7) {
            let p = pt(nu, libm::pow(10.0, lu));
            prop_assert!(!verdict(TuranLabel::T1, p).unwrap().fails());
            prop_assert!(!verdict(TuranLabel::T2, p).unwrap().fails());
            prop_assert!(!verdict(TuranLabel::T3, p).unwrap().fails());
            if nu > 1.001 {
                prop_assert!(!verdict(TuranLabel::T4, p).unwrap().fails());
            }
        }
    }
}
