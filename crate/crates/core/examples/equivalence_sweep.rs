//! Runs the equivalence experiment on a small grating sweep and writes the
//! CSV, JSON and SVG report to `target/equivalence_sweep/`.
//!
//! Run with `cargo run --release --example equivalence_sweep`.

use chordarc::harness::{parse_config, run};
use std::path::Path;

fn main() -> chordarc::Result<()> {
    let cfg = parse_config(
        r#"{
            "experiment": "equivalence",
            "domain": {"kind": "grating", "c": 0.0},
            "sweep": {"values": [0.0, 0.5]},
            "functions": ["pole(w=0.5-2i,k=1,coef=1)"],
            "p": [2],
            "n": [1, 2],
            "quadrature": {"rel_tol": 1e-6},
            "norm_quadrature": {"rel_tol": 1e-3}
        }"#,
    )?;
    let out = run(&cfg)?;
    for r in &out.rows {
        let show = |c: &str| r.value(c).map_or("-".to_string(), |v| format!("{v:.5}"));
        println!(
            "{:<16} {:<16} conformal {:>8} koebe {:>8} norm/energy {:>9} spread {:>8}",
            r.id,
            r.domain,
            show("ratio_conformal"),
            show("ratio_koebe"),
            show("ratio_norm_energy"),
            show("spread")
        );
    }
    let s = out.summary();
    println!("flags: {} pass, {} fail, {} unsupported", s.pass, s.fail, s.unsupported);
    for p in out.emit(Path::new("target/equivalence_sweep"), &cfg.output.formats)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
