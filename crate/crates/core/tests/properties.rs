//! Invariants checked on random points.

use proptest::prelude::*;
use turan_core::bessel::{self, OrderArg};
use turan_core::bounds::{self, TargetKind};
use turan_core::equivalence::{family_verdicts, FAMILIES};
use turan_core::grid::Grid;
use turan_core::turan::{self, TuranLabel};
use turan_core::verdict::Outcome;

fn pt(nu: f64, u: f64) -> OrderArg {
    OrderArg::new(nu, u).unwrap()
}

fn log_u(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn wronskian_and_recurrences(nu in -1.0..100.0f64, u in log_u(1e-6, 700.0)) {
        let r = bessel::residuals(nu, u).unwrap();
        prop_assert!(r.wronskian <= 5e-13, "{r:?}");
        prop_assert!(r.r1.max(r.r2).max(r.r3) <= 1e-12, "{r:?}");
    }

    #[test]
    fn k_is_even_in_the_order(nu in 0.0..20.0f64, u in log_u(1e-3, 500.0)) {
        let a = bessel::scaled_k(nu, u).unwrap().value;
        let b = bessel::scaled_k(-nu, u).unwrap().value;
        prop_assert!(a.sub(b).div(a).abs().to_f64() <= 1e-13);
    }

    #[test]
    fn product_decreases_in_u(nu in -1.0..50.0f64, u in log_u(1e-3, 300.0)) {
        let a = bessel::product(nu, u).unwrap().value.to_f64();
        let b = bessel::product(nu, u * 1.01).unwrap().value.to_f64();
        prop_assert!(b < a);
    }

    #[test]
    fn two_u_p_below_one_above_half_order(nu in 0.55..50.0f64, u in log_u(1e-3, 500.0)) {
        let p = bessel::product(nu, u).unwrap().value.to_f64();
        prop_assert!(0.0 < 2.0 * u * p && 2.0 * u * p < 1.0);
    }

    #[test]
    fn classical_turan_gaps_hold(nu in -0.99..20.0f64, u in log_u(1e-3, 500.0)) {
        for label in [TuranLabel::T1, TuranLabel::T2, TuranLabel::T3] {
            let v = turan::verdict(label, pt(nu, u)).unwrap();
            prop_assert_ne!(v.outcome, Outcome::Fails, "{:?} {:?}", label, v);
        }
    }

    #[test]
    fn sandwiches_contain_their_targets(nu in 0.0..20.0f64, u in log_u(1e-3, 500.0)) {
        for kind in TargetKind::ALL {
            for v in bounds::sandwich_verdicts(kind, pt(nu, u)).unwrap() {
                prop_assert_ne!(v.outcome, Outcome::Fails, "{:?} {:?}", kind, v);
            }
        }
    }

    #[test]
    fn equivalent_forms_agree(nu in -0.99..20.0f64, u in log_u(1e-3, 500.0)) {
        for family in FAMILIES.iter() {
            let vs = family_verdicts(family, pt(nu, u)).unwrap();
            let decided: Vec<Outcome> = vs
                .iter()
                .map(|v| v.outcome)
                .filter(|&o| o != Outcome::Indeterminate)
                .collect();
            prop_assert!(decided.windows(2).all(|w| w[0] == w[1]), "{vs:?}");
        }
    }

    #[test]
    fn grid_text_round_trips(lo in -5.0..5.0f64, span in 0.0..10.0f64, k in 1u32..64, open in any::<bool>()) {
        let mut g = Grid::linear(lo, lo + span, 1.0 / f64::from(k)).unwrap();
        if open {
            g = g.open_lower();
        }
        let back: Grid = g.to_string().parse().unwrap();
        prop_assert_eq!(back.points(), g.points());
    }

    #[test]
    fn verdicts_are_antisymmetric(slack in -1.0..1.0f64, budget in 0.0..0.5f64) {
        let a = Outcome::classify(slack, budget);
        let b = Outcome::classify(-slack, budget);
        let flipped = match a {
            Outcome::Holds => Outcome::Fails,
            Outcome::Fails => Outcome::Holds,
            Outcome::Indeterminate => Outcome::Indeterminate,
        };
        prop_assert_eq!(b, flipped);
    }
}
