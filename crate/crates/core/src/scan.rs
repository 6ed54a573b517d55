//! Scan results and the row-parallel execution hook.

use alloc::string::String;
use alloc::vec::Vec;

use crate::bessel::OrderArg;
use crate::verdict::{InequalityVerdict, Outcome};

/// A point where an inequality fails, or an exploratory candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub label: String,
    pub point: OrderArg,
    pub slack: f64,
    /// Step of a discrete predicate, when there is one.
    pub h: Option<f64>,
    /// The same slack recomputed from extended-precision values.
    pub oracle_slack: Option<f64>,
}

impl Counterexample {
    pub fn from_verdict(v: &InequalityVerdict) -> Counterexample {
        Counterexample {
            label: v.label.clone(),
            point: v.point,
            slack: v.slack,
            h: None,
            oracle_slack: None,
        }
    }
}

/// Verdicts and counterexamples of one scan, in deterministic order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanReport {
    pub verdicts: Vec<InequalityVerdict>,
    pub counterexamples: Vec<Counterexample>,
}

impl ScanReport {
    pub fn new() -> ScanReport {
        ScanReport::default()
    }

    pub fn push(&mut self, v: InequalityVerdict) {
        self.verdicts.push(v);
    }

    pub fn extend(&mut self, other: ScanReport) {
        self.verdicts.extend(other.verdicts);
        self.counterexamples.extend(other.counterexamples);
    }

    /// Minimum slack over verdicts that are not indeterminate.
    pub fn min_slack(&self) -> Option<f64> {
        self.verdicts
            .iter()
            .filter(|v| v.outcome != Outcome::Indeterminate)
            .map(|v| v.slack)
            .reduce(f64::min)
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.verdicts.iter().filter(|v| v.outcome == outcome).count()
    }

    pub fn any_fails(&self) -> bool {
        self.count(Outcome::Fails) > 0
    }

    /// Verdicts whose label starts with `prefix`.
    pub fn with_label<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a InequalityVerdict> + 'a {
        self.verdicts.iter().filter(move |v| v.label.starts_with(prefix))
    }
}

/// Runs independent rows of a scan and returns their results in row
/// order, so the merge is deterministic however the rows are scheduled.
pub trait RowMap: Sync {
    fn map_rows<T: Send>(&self, rows: usize, f: &(dyn Fn(usize) -> T + Sync)) -> Vec<T>;
}

/// Runs rows one after another.
#[derive(Clone, Copy, Debug, Default)]
pub struct Serial;

impl RowMap for Serial {
    fn map_rows<T: Send>(&self, rows: usize, f: &(dyn Fn(usize) -> T + Sync)) -> Vec<T> {
        (0..rows).map(f).collect()
    }
}

/// Maps each row to a report and concatenates them in row order.
pub fn collect_rows<M: RowMap + ?Sized>(exec: &M, rows: usize, f: &(dyn Fn(usize) -> ScanReport + Sync)) -> ScanReport {
    let parts = exec.map_rows(rows, f);
    let mut out = ScanReport::new();
    for p in parts {
        out.extend(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::InequalityVerdict;

    #[test]
    fn min_slack_skips_indeterminate() {
        let p = OrderArg::new(0.0, 1.0).unwrap();
        let mut r = ScanReport::new();
        r.push(InequalityVerdict::new("a", p, 0.5, 0.01));
        r.push(InequalityVerdict::new("a", p, -1e-9, 1.0));
        r.push(InequalityVerdict::new("b", p, 0.2, 0.001));
        assert_eq!(r.min_slack(), Some(0.2));
        assert_eq!(r.count(Outcome::Indeterminate), 1);
        assert_eq!(r.with_label("a").count(), 2);
        assert_eq!(ScanReport::new().min_slack(), None);
    }

    #[test]
    fn serial_rows_keep_order() {
        let v = Serial.map_rows(5, &|i| i * i);
        assert_eq!(v, [0, 1, 4, 9, 16]);
    }
}
