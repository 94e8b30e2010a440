//! Experiment runs through the library interface.

use chordarc::harness::{
    from_json, parse_config, run, to_csv, to_json, Cell, CurveSpec, ExperimentConfig, ExperimentKind, ReportFormat,
    Status,
};

#[test]
fn diagnostics_growth_rows() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Diagnostics);
    cfg.curves = vec![CurveSpec::Sector { alpha: 0.5 }, CurveSpec::Parabola { a: 1.0 }];
    cfg.windows = vec![5.0, 10.0];
    cfg.window_samples = 101;
    let out = run(&cfg).unwrap();
    assert_eq!(out.rows.len(), 6);
    // the sector is scale invariant
    let g = out.row("c0:growth").unwrap();
    assert!((g.value("growth_chord_arc").unwrap() - 1.0).abs() < 1e-3, "{g:?}");
    // the parabola chord-arc constant grows with the window
    assert!(out.row("c1:growth").unwrap().value("growth_chord_arc").unwrap() > 1.8);
}

#[test]
fn carleson_rows_and_flags() {
    let cfg = parse_config(
        r#"{"experiment": "carleson", "functions": ["pole(w=-1i,k=1,coef=1)"],
            "carleson": {"k_min": -2, "k_max": 2, "refine": 0, "intervals": [[0, 1], [-1, 1]]},
            "quadrature": {"rel_tol": 1e-6}}"#,
    )
    .unwrap();
    let out = run(&cfg).unwrap();
    assert_eq!(out.rows.len(), 3);
    assert!(out.rows.iter().all(|r| r.flags.iter().all(|f| f.status == Status::Pass)), "{:?}", out.rows);
}

#[test]
fn unsupported_exterior_on_gratings() {
    let cfg = parse_config(
        r#"{"experiment": "boundary_norm", "domain": {"kind": "grating", "c": 0.3},
            "functions": ["pole(w=0.5-2i,k=1,coef=1)"], "norm_quadrature": {"rel_tol": 1e-3}}"#,
    )
    .unwrap();
    let out = run(&cfg).unwrap();
    let r = &out.rows[0];
    assert!(matches!(r.get("bphi_ext"), Some(Cell::Unsupported(_))));
    assert!(r.value("bnorm").unwrap() > 0.0);
}

#[test]
fn bracket_flags_from_config() {
    let cfg = parse_config(
        r#"{"experiment": "energy", "domain": {"kind": "sector", "alpha": 0.5},
            "functions": ["pole(w=-1-1i,k=1,coef=1)"], "p": [2, 3],
            "brackets": {"energy_delta": [0, 1e-9]}}"#,
    )
    .unwrap();
    let out = run(&cfg).unwrap();
    assert_eq!(out.summary().fail, 2);
    assert!(!out.summary().all_pass());
}

#[test]
fn reports_round_trip_through_files() {
    let cfg = parse_config(
        r#"{"experiment": "tail", "domain": {"kind": "grating", "c": 0.5}, "eps": [0.5],
            "probes": {"x": [0.0, 1.0], "y_lo": 0.5, "y_hi": 2.0, "count": 2}}"#,
    )
    .unwrap();
    let out = run(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let paths = out
        .emit(dir.path(), &[ReportFormat::Csv, ReportFormat::Json, ReportFormat::Svg])
        .unwrap();
    assert_eq!(paths.len(), 3);
    let back = from_json(&std::fs::read_to_string(dir.path().join("tail.json")).unwrap()).unwrap();
    assert_eq!(back, out.rows);
    assert_eq!(to_json(&back).unwrap(), to_json(&out.rows).unwrap());
    let csv = std::fs::read_to_string(dir.path().join("tail.csv")).unwrap();
    assert_eq!(csv, to_csv(&out.rows).unwrap());
    assert_eq!(csv.lines().count(), 1 + out.rows.len());
    assert!(csv.lines().next().unwrap().ends_with("flag:spread"));
}

#[test]
fn sweep_validation_reports_each_bad_value() {
    let err = parse_config(
        r#"{"experiment": "sewing", "domain": {"kind": "sector", "alpha": 1.0},
            "sweep": {"values": [0.5, 2.0, 0.0]}}"#,
    )
    .unwrap_err();
    let chordarc::Error::Config(v) = err else { panic!() };
    assert_eq!(v.len(), 2, "{v:?}");
    assert!(v[0].starts_with("sweep.values[1]") && v[1].starts_with("sweep.values[2]"));
}

#[test]
fn shipped_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        chordarc::harness::load_config(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        n += 1;
    }
    assert!(n >= 8);
}
