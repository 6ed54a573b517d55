//! Pointwise agreement of each Turán inequality with the log-derivative
//! and ratio bounds that are equivalent to it.
//!
//! Each member of a family is evaluated by its own route: the Turán gap
//! from a product of three functions, the log-derivative from the
//! derivative, and the ratio from two functions directly.

use alloc::string::String;
use alloc::vec::Vec;

use crate::bessel::OrderArg;
use crate::bounds::{self, TargetKind, NEAR_ONE};
use crate::error::Result;
use crate::grid::Grid;
use crate::scan::RowMap;
use crate::turan::{self, TuranLabel};
use crate::verdict::{InequalityVerdict, Outcome};

/// One equivalence triple: the Turán label, the log-derivative bound and
/// the ratio bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Family {
    pub turan: TuranLabel,
    pub logderiv: (TargetKind, &'static str),
    pub ratio: (TargetKind, &'static str),
}

impl Family {
    pub fn name(&self) -> &'static str {
        self.turan.name()
    }

    pub fn members(&self) -> [&'static str; 3] {
        [self.turan.name(), self.logderiv.1, self.ratio.1]
    }

    /// Orders at which the family is audited.
    pub fn applies(&self, nu: f64) -> bool {
        match self.turan {
            TuranLabel::T4 => nu > 1.0 + NEAR_ONE,
            _ => nu > -1.0,
        }
    }
}

pub const FAMILIES: [Family; 4] = [
    Family {
        turan: TuranLabel::T1,
        logderiv: (TargetKind::ILogDeriv, "b1"),
        ratio: (TargetKind::IRatio, "l1"),
    },
    Family {
        turan: TuranLabel::T2,
        logderiv: (TargetKind::KLogDeriv, "b2"),
        ratio: (TargetKind::KRatio, "l2"),
    },
    Family {
        turan: TuranLabel::T3,
        logderiv: (TargetKind::ILogDeriv, "b3"),
        ratio: (TargetKind::IRatio, "l3"),
    },
    Family {
        turan: TuranLabel::T4,
        logderiv: (TargetKind::KLogDeriv, "b4"),
        ratio: (TargetKind::KRatio, "l4"),
    },
];

/// Verdicts of the applicable members of `family` at `p`.
pub fn family_verdicts(family: &Family, p: OrderArg) -> Result<Vec<InequalityVerdict>> {
    let mut out = Vec::with_capacity(3);
    if !family.applies(p.nu()) {
        return Ok(out);
    }
    out.push(turan::verdict(family.turan, p)?);
    for (kind, label) in [family.logderiv, family.ratio] {
        let vs = bounds::sandwich_verdicts(kind, p)?;
        out.extend(vs.into_iter().filter(|v| v.label == label));
    }
    Ok(out)
}

/// A point where the determinate members of a family disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Disagreement {
    pub family: String,
    pub point: OrderArg,
    pub verdicts: Vec<InequalityVerdict>,
}

/// Tally for one member inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct MemberStats {
    pub label: String,
    pub holds: usize,
    pub fails: usize,
    pub indeterminate: usize,
    /// Smallest determinate slack, if any.
    pub min_slack: Option<f64>,
}

impl MemberStats {
    fn new(label: &str) -> MemberStats {
        MemberStats {
            label: String::from(label),
            holds: 0,
            fails: 0,
            indeterminate: 0,
            min_slack: None,
        }
    }

    fn record(&mut self, v: &InequalityVerdict) {
        match v.outcome {
            Outcome::Holds => self.holds += 1,
            Outcome::Fails => self.fails += 1,
            Outcome::Indeterminate => {
                self.indeterminate += 1;
                return;
            }
        }
        self.min_slack = Some(self.min_slack.map_or(v.slack, |m| m.min(v.slack)));
    }

    fn merge(&mut self, o: &MemberStats) {
        self.holds += o.holds;
        self.fails += o.fails;
        self.indeterminate += o.indeterminate;
        self.min_slack = match (self.min_slack, o.min_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceAudit {
    /// Family-point pairs compared.
    pub compared: usize,
    /// Family-point pairs with fewer than two determinate members.
    pub excluded: usize,
    pub members: Vec<MemberStats>,
    pub disagreements: Vec<Disagreement>,
}

impl EquivalenceAudit {
    fn new() -> EquivalenceAudit {
        EquivalenceAudit {
            compared: 0,
            excluded: 0,
            members: FAMILIES
                .iter()
                .flat_map(|f| f.members())
                .map(MemberStats::new)
                .collect(),
            disagreements: Vec::new(),
        }
    }

    fn merge(&mut self, o: EquivalenceAudit) {
        self.compared += o.compared;
        self.excluded += o.excluded;
        for (a, b) in self.members.iter_mut().zip(&o.members) {
            a.merge(b);
        }
        self.disagreements.extend(o.disagreements);
    }

    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }

    fn add_point(&mut self, p: OrderArg) -> Result<()> {
        for (fi, family) in FAMILIES.iter().enumerate() {
            let vs = family_verdicts(family, p)?;
            if vs.is_empty() {
                continue;
            }
            for v in &vs {
                let slot = family
                    .members()
                    .iter()
                    .position(|m| *m == v.label)
                    .expect("member label");
                self.members[3 * fi + slot].record(v);
            }
            let determinate: Vec<Outcome> = vs
                .iter()
                .map(|v| v.outcome)
                .filter(|o| *o != Outcome::Indeterminate)
                .collect();
            if determinate.len() < 2 {
                self.excluded += 1;
                continue;
            }
            self.compared += 1;
            if determinate.iter().any(|o| *o != determinate[0]) {
                self.disagreements.push(Disagreement {
                    family: String::from(family.name()),
                    point: p,
                    verdicts: vs,
                });
            }
        }
        Ok(())
    }
}

/// Audits all four families on the product grid.
pub fn equivalence_audit<M: RowMap + ?Sized>(exec: &M, nu: &Grid, u: &Grid) -> Result<EquivalenceAudit> {
    let nus = nu.points();
    let us = u.points();
    let rows = exec.map_rows(nus.len(), &|i| -> Result<EquivalenceAudit> {
        let mut a = EquivalenceAudit::new();
        for &x in &us {
            a.add_point(OrderArg::new(nus[i], x)?)?;
        }
        Ok(a)
    });
    let mut out = EquivalenceAudit::new();
    for r in rows {
        out.merge(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::Serial;

    #[test]
    fn members_by_order() {
        let p = OrderArg::new(-0.5, 1.0).unwrap();
        let labels =
            |f: &Family| -> Vec<String> { family_verdicts(f, p).unwrap().into_iter().map(|v| v.label).collect() };
        assert_eq!(labels(&FAMILIES[0]), ["t1", "b1"]);
        assert_eq!(labels(&FAMILIES[1]), ["t2", "b2", "l2"]);
        assert_eq!(labels(&FAMILIES[2]), ["t3"]);
        assert!(labels(&FAMILIES[3]).is_empty());
        let p = OrderArg::new(2.0, 1.0).unwrap();
        for f in &FAMILIES {
            let vs = family_verdicts(f, p).unwrap();
            assert_eq!(vs.len(), 3);
            assert!(vs.iter().all(InequalityVerdict::holds));
        }
    }

    #[test]
    fn small_audit_agrees() {
        let nu = "(-1:4:0.25".parse().unwrap();
        let u = "0.001:500:log4".parse().unwrap();
        let a = equivalence_audit(&Serial, &nu, &u).unwrap();
        assert!(a.agrees(), "{:?}", a.disagreements.first());
        assert!(a.compared > 0);
        assert!(a.members.iter().all(|m| m.fails == 0));
    }
}
