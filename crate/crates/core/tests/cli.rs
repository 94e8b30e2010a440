//! The command-line front end: exit codes, overrides and written reports.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chordarc"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn passing_run_exits_zero_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sewing.json",
        r#"{"domain": {"kind": "sector", "alpha": 1.0}, "sweep": {"values": [0.5, 1.0, 1.5]}}"#,
    );
    let out = dir.path().join("out");
    let st = bin()
        .args(["sewing", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stdout));
    for f in ["sewing.csv", "sewing.json", "sewing_qs.svg"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let stdout = String::from_utf8_lossy(&st.stdout);
    assert!(stdout.contains("0 fail"), "{stdout}");
}

#[test]
fn failing_bracket_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // the halfplane tail ratio is 1/ε = 2, outside this bracket
    let cfg = write(
        dir.path(),
        "tail.json",
        r#"{"experiment": "tail", "domain": {"kind": "halfplane"},
            "probes": {"x": [0.0], "y_lo": 1.0, "y_hi": 1.0, "count": 1},
            "brackets": {"ratio": [0.0, 1.5]}, "output": {"formats": ["csv"]}}"#,
    );
    let st = bin()
        .args(["tail", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&st.stdout).contains("fail"));
}

#[test]
fn invalid_config_exits_two_with_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"domain": {"kind": "grating", "c": 1.2}, "functions": ["pole(w=-3i,k=1,coef=1)"], "p": [0.5]}"#,
    );
    let st = bin().args(["equivalence", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let err = String::from_utf8_lossy(&st.stderr);
    assert!(err.contains("domain.c") && err.contains("p:"), "{err}");
}

#[test]
fn mismatched_subcommand_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", r#"{"experiment": "sewing", "domain": {"kind": "halfplane"}}"#);
    let st = bin().args(["tail", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stderr).contains("sewing"));
}

#[test]
fn missing_config_file_exits_two() {
    let st = bin().args(["carleson", "--config", "/nonexistent/c.json"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stderr).contains("/nonexistent/c.json"));
}

#[test]
fn overrides_replace_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "e.json",
        r#"{"domain": {"kind": "halfplane"}, "functions": ["pole(w=-1i,k=1,coef=1)"],
            "output": {"formats": ["json"]}}"#,
    );
    let st = bin()
        .args(["energy", "--p", "1.5,3", "--n", "2", "--rel-tol", "1e-7", "--function", "pole(w=-2i,k=1,coef=1)"])
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
    let rows = chordarc::harness::from_json(&std::fs::read_to_string(dir.path().join("energy.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].p, Some(1.5));
    assert_eq!(rows[1].n, Some(2));
    assert!(rows[0].function.contains("-2i"));
}

#[test]
fn every_subcommand_is_listed() {
    let st = bin().arg("--help").output().unwrap();
    let help = String::from_utf8_lossy(&st.stdout);
    for s in ["diagnose", "energy", "boundary-norm", "equivalence", "characterize", "tail", "sewing", "carleson"] {
        assert!(help.contains(s), "{s}");
    }
}
