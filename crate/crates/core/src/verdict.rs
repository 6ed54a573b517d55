//! Three-way verdicts for strict inequalities evaluated in floating point.

use alloc::string::String;

use crate::bessel::OrderArg;

/// The deadband is this multiple of the combined error estimate.
pub const DEADBAND_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Holds,
    Fails,
    Indeterminate,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Indeterminate => "indeterminate",
        }
    }

    /// `holds` iff `slack > budget`, `fails` iff `slack < -budget`.
    /// A NaN slack is indeterminate.
    pub fn classify(slack: f64, budget: f64) -> Outcome {
        if slack > budget {
            Outcome::Holds
        } else if slack < -budget {
            Outcome::Fails
        } else {
            Outcome::Indeterminate
        }
    }
}

/// The verdict for one labeled inequality at one point.
///
/// `slack` is oriented so that positive means the inequality holds.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityVerdict {
    pub label: String,
    pub point: OrderArg,
    pub slack: f64,
    pub outcome: Outcome,
    pub err_budget: f64,
}

impl InequalityVerdict {
    /// Verdict with `err_budget = DEADBAND_FACTOR * err`.
    pub fn new(label: impl Into<String>, point: OrderArg, slack: f64, err: f64) -> Self {
        Self::with_budget(label, point, slack, DEADBAND_FACTOR * err)
    }

    pub fn with_budget(label: impl Into<String>, point: OrderArg, slack: f64, err_budget: f64) -> Self {
        InequalityVerdict {
            label: label.into(),
            point,
            slack,
            outcome: Outcome::classify(slack, err_budget),
            err_budget,
        }
    }

    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn fails(&self) -> bool {
        self.outcome == Outcome::Fails
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn outcome_matches_budget(slack in -1e3f64..1e3, err in 0f64..10.0) {
            let p = OrderArg::new(1.0, 1.0).unwrap();
            let v = InequalityVerdict::new("x", p, slack, err);
            let b = DEADBAND_FACTOR * err;
            prop_assert_eq!(v.err_budget, b);
            prop_assert_eq!(v.holds(), slack > b);
            prop_assert_eq!(v.fails(), slack < -b);
        }
    }

    #[test]
    fn nan_is_indeterminate() {
        assert_eq!(Outcome::classify(f64::NAN, 0.0), Outcome::Indeterminate);
        assert_eq!(Outcome::classify(0.0, 0.0), Outcome::Indeterminate);
    }
}
