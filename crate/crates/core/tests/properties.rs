//! Invariants checked on random inputs.

use chordarc::analysis::{parse_complex, HarmonicTestFunction, PoleTerm};
use chordarc::conformal::Domain;
use chordarc::geometry::Curve;
use chordarc::harness::{from_json, parse_config, to_json, Cell, ReportRow};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complex_literals_round_trip(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let z = parse_complex(&format!("{re}{im:+}i")).unwrap();
        prop_assert_eq!(z, Complex64::new(re, im));
    }

    #[test]
    fn test_functions_print_and_parse(re in -5f64..5.0, im in -5f64..-0.2, k in 1u32..4) {
        let u = HarmonicTestFunction::new(
            vec![PoleTerm::new(Complex64::new(re, im), k, Complex64::new(1.0, 0.5)).unwrap()],
            vec![PoleTerm::new(Complex64::new(im, re), 1, Complex64::new(-2.0, 0.0)).unwrap()],
        );
        let v: HarmonicTestFunction = u.to_string().parse().unwrap();
        let z = Complex64::new(0.3, 2.0);
        prop_assert!((u.value(z).unwrap() - v.value(z).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn koebe_quarter_bracket(c in 0.0f64..0.95, x in -4f64..4.0, ly in -3f64..3.0) {
        let d = Domain::grating(c).unwrap();
        let r = d.poincare_ratio(Complex64::new(x, ly.exp())).unwrap();
        prop_assert!((0.5..=2.0).contains(&r), "{}", r);
    }

    #[test]
    fn sector_koebe_bracket(alpha in 0.1f64..1.9, x in -4f64..4.0, ly in -3f64..3.0) {
        let d = Domain::sector(alpha).unwrap();
        let r = d.poincare_ratio(Complex64::new(x, ly.exp())).unwrap();
        prop_assert!((0.5 - 1e-9..=2.0 + 1e-9).contains(&r), "{}", r);
    }

    #[test]
    fn unbounded_curves_leave_every_disk(c in 0.0f64..0.95, x in -5f64..5.0, y in -3f64..3.0) {
        // a curve through B(w, δ) with both ends at infinity exits B(w, 2δ)
        // and crosses {5δ ≤ |z − w| ≤ 6δ} in each direction
        let g = Curve::grating(c).unwrap();
        let w = Complex64::new(x, y);
        let d = g.distance(w).delta;
        prop_assume!(d > 1e-3);
        prop_assert!(g.disk_length(w, 2.0 * d).unwrap() >= 2.0 * d * (1.0 - 1e-9));
        prop_assert!(g.annulus_length(w, 5.0 * d, 6.0 * d).unwrap() >= 2.0 * d * (1.0 - 1e-9));
    }

    #[test]
    fn rows_round_trip_through_json(vals in prop::collection::vec(-1e6f64..1e6, 1..6), p in 1.1f64..4.0) {
        let mut r = ReportRow::new("energy", "x");
        r.p = Some(p);
        for (i, v) in vals.iter().enumerate() {
            r.set_value(&format!("c{i}"), *v);
        }
        r.set("u", Cell::Unsupported("none".into()));
        r.flag("f", "c0", Some(-1.0), Some(1.0));
        let rows = vec![r];
        prop_assert_eq!(from_json(&to_json(&rows).unwrap()).unwrap(), rows);
    }

    #[test]
    fn grating_amplitude_is_validated(c in prop_oneof![-5f64..-1e-9, 1f64..5.0]) {
        let text = format!(
            r#"{{"experiment": "tail", "domain": {{"kind": "grating", "c": {c}}}}}"#
        );
        let err = parse_config(&text).unwrap_err();
        prop_assert!(err.to_string().contains("domain.c"));
    }
}
