//! Report records and their JSON and CSV encodings.
//!
//! Field order is fixed by the struct definitions, so the same run
//! produces the same bytes apart from `wall_time`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;
use turan_core::scan::{Counterexample, ScanReport};
use turan_core::verdict::{InequalityVerdict, Outcome};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerdictRow {
    pub suite: String,
    pub label: String,
    pub nu: f64,
    pub u: f64,
    pub slack: f64,
    pub outcome: &'static str,
    pub err_budget: f64,
}

impl VerdictRow {
    pub fn new(suite: &str, v: &InequalityVerdict) -> VerdictRow {
        VerdictRow {
            suite: suite.to_string(),
            label: v.label.clone(),
            nu: v.point.nu(),
            u: v.point.u(),
            slack: v.slack,
            outcome: v.outcome.name(),
            err_budget: v.err_budget,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CounterRow {
    pub suite: String,
    pub label: String,
    pub nu: f64,
    pub u: f64,
    pub slack: f64,
    pub h: Option<f64>,
    pub oracle_slack: Option<f64>,
}

impl CounterRow {
    pub fn new(suite: &str, c: &Counterexample) -> CounterRow {
        CounterRow {
            suite: suite.to_string(),
            label: c.label.clone(),
            nu: c.point.nu(),
            u: c.point.u(),
            slack: c.slack,
            h: c.h,
            oracle_slack: c.oracle_slack,
        }
    }
}

/// A computed quantity that is not a verdict.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ValueRow {
    pub suite: String,
    pub name: String,
    pub nu: Option<f64>,
    pub u: Option<f64>,
    pub value: f64,
    pub abs_err_est: Option<f64>,
}

impl ValueRow {
    pub fn new(suite: &str, name: &str, value: f64) -> ValueRow {
        ValueRow {
            suite: suite.to_string(),
            name: name.to_string(),
            nu: None,
            u: None,
            value,
            abs_err_est: None,
        }
    }

    pub fn at(mut self, nu: f64, u: f64) -> ValueRow {
        self.nu = Some(nu);
        self.u = Some(u);
        self
    }

    pub fn err(mut self, e: f64) -> ValueRow {
        self.abs_err_est = Some(e);
        self
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub verdicts: usize,
    pub holds: usize,
    pub fails: usize,
    pub indeterminate: usize,
    pub counterexamples: usize,
    /// Counterexamples merged in from exploratory reports; never affect the
    /// status.
    pub exploratory_counterexamples: usize,
}

/// Which verdict rows a report keeps; the summary always counts all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Keep {
    #[default]
    All,
    Failing,
    None,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: BTreeMap<String, Value>,
    /// Whether verdicts are asserted (drive the exit code) or exploratory.
    pub asserted: bool,
    pub status: &'static str,
    pub summary: Summary,
    pub min_slack: Option<f64>,
    pub values: Vec<ValueRow>,
    pub verdicts: Vec<VerdictRow>,
    pub counterexamples: Vec<CounterRow>,
    /// Seconds; the only field allowed to differ between identical runs.
    pub wall_time: f64,
}

impl Report {
    pub fn new(command: &str, asserted: bool) -> Report {
        let mut config = BTreeMap::new();
        config.insert("version".to_string(), Value::from(env!("CARGO_PKG_VERSION")));
        config.insert(
            "deadband_factor".to_string(),
            Value::from(turan_core::verdict::DEADBAND_FACTOR),
        );
        Report {
            command: command.to_string(),
            config,
            asserted,
            status: "ok",
            summary: Summary::default(),
            min_slack: None,
            values: Vec::new(),
            verdicts: Vec::new(),
            counterexamples: Vec::new(),
            wall_time: 0.0,
        }
    }

    /// Drops verdict rows according to `keep`; the summary is unchanged.
    pub fn retain(&mut self, keep: Keep) {
        match keep {
            Keep::All => {}
            Keep::Failing => self.verdicts.retain(|v| v.outcome != Outcome::Holds.name()),
            Keep::None => self.verdicts.clear(),
        }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.config.insert(key.to_string(), v.into());
    }

    pub fn push_verdict(&mut self, suite: &str, v: &InequalityVerdict) {
        self.summary.verdicts += 1;
        match v.outcome {
            Outcome::Holds => self.summary.holds += 1,
            Outcome::Fails => self.summary.fails += 1,
            Outcome::Indeterminate => self.summary.indeterminate += 1,
        }
        if v.outcome != Outcome::Indeterminate {
            self.min_slack = Some(self.min_slack.map_or(v.slack, |m: f64| m.min(v.slack)));
        }
        self.verdicts.push(VerdictRow::new(suite, v));
    }

    pub fn push_counterexample(&mut self, suite: &str, c: &Counterexample) {
        self.summary.counterexamples += 1;
        self.counterexamples.push(CounterRow::new(suite, c));
    }

    /// Adds every verdict and counterexample of a scan.
    pub fn absorb(&mut self, suite: &str, scan: &ScanReport) {
        for v in &scan.verdicts {
            self.push_verdict(suite, v);
        }
        for c in &scan.counterexamples {
            self.push_counterexample(suite, c);
        }
    }

    pub fn push_value(&mut self, v: ValueRow) {
        self.values.push(v);
    }

    /// Merges `other` into `self`; `other` keeps its own suite names.
    /// Exploratory reports merged into an asserted one contribute values and
    /// counterexamples only.
    pub fn merge(&mut self, other: Report) {
        let s = &mut self.summary;
        if self.asserted && !other.asserted {
            s.exploratory_counterexamples += other.counterexamples.len();
            self.values.extend(other.values);
            self.counterexamples.extend(other.counterexamples);
            return;
        }
        s.exploratory_counterexamples += other.summary.exploratory_counterexamples;
        s.verdicts += other.summary.verdicts;
        s.holds += other.summary.holds;
        s.fails += other.summary.fails;
        s.indeterminate += other.summary.indeterminate;
        s.counterexamples += other.summary.counterexamples;
        self.min_slack = match (self.min_slack, other.min_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.values.extend(other.values);
        self.verdicts.extend(other.verdicts);
        self.counterexamples.extend(other.counterexamples);
    }

    /// Sets `status` from the summary.
    pub fn finish(&mut self) {
        self.status = if !self.asserted {
            "exploratory"
        } else if self.summary.fails > 0 || self.summary.counterexamples > 0 {
            "fails"
        } else if self.summary.indeterminate > 0 {
            "indeterminate"
        } else {
            "ok"
        };
    }

    /// 0 ok, 1 a failing verdict, 3 indeterminate verdicts without
    /// failures; exploratory reports always give 0.
    pub fn exit_code(&self) -> i32 {
        if !self.asserted {
            0
        } else if self.summary.fails > 0 || self.summary.counterexamples > 0 {
            1
        } else if self.summary.indeterminate > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per value, verdict and counterexample, same content as the
    /// JSON arrays.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "record",
            "suite",
            "label",
            "nu",
            "u",
            "value",
            "error",
            "outcome",
            "h",
            "oracle_slack",
        ])?;
        let num = |x: f64| x.to_string();
        let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
        for v in &self.values {
            out.write_record([
                "value".to_string(),
                v.suite.clone(),
                v.name.clone(),
                opt(v.nu),
                opt(v.u),
                num(v.value),
                opt(v.abs_err_est),
                String::new(),
                String::new(),
                String::new(),
            ])?;
        }
        for v in &self.verdicts {
            out.write_record([
                "verdict".to_string(),
                v.suite.clone(),
                v.label.clone(),
                num(v.nu),
                num(v.u),
                num(v.slack),
                num(v.err_budget),
                v.outcome.to_string(),
                String::new(),
                String::new(),
            ])?;
        }
        for c in &self.counterexamples {
            out.write_record([
                "counterexample".to_string(),
                c.suite.clone(),
                c.label.clone(),
                num(c.nu),
                num(c.u),
                num(c.slack),
                String::new(),
                "fails".to_string(),
                opt(c.h),
                opt(c.oracle_slack),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use turan_core::bessel::OrderArg;

    fn sample() -> Report {
        let mut r = Report::new("test", true);
        let p = OrderArg::new(0.5, 1.0).unwrap();
        r.push_verdict("s", &InequalityVerdict::new("a", p, 0.25, 1e-16));
        r.push_verdict("s", &InequalityVerdict::new("b", p, f64::NAN, 1e-16));
        r.push_value(ValueRow::new("s", "x", 1.5).at(0.5, 1.0));
        r.finish();
        r
    }

    #[test]
    fn summary_and_exit_codes() {
        let r = sample();
        assert_eq!(r.summary.holds, 1);
        assert_eq!(r.summary.indeterminate, 1);
        assert_eq!(r.min_slack, Some(0.25));
        assert_eq!(r.status, "indeterminate");
        assert_eq!(r.exit_code(), 3);
        let mut e = Report::new("hunt", false);
        e.push_verdict(
            "s",
            &InequalityVerdict::new("a", OrderArg::new(1.0, 1.0).unwrap(), -1.0, 0.0),
        );
        e.finish();
        assert_eq!(e.exit_code(), 0);
    }

    #[test]
    fn encodings_agree() {
        let r = sample();
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["verdicts"].as_array().unwrap().len(), 2);
        assert!(json["verdicts"][1]["slack"].is_null());
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.contains("verdict,s,a,0.5,1,0.25,"));
    }
}
