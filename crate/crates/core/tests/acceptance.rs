//! Acceptance criteria: one PASS/FAIL line per criterion, with timings.
//! Runs as a plain binary (`harness = false`) and exits nonzero on failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use chordarc::analysis::{
    boundary_norm_line, carleson_norm, dyadic_boxes, halfplane_energy, lusin_average, tail_integral,
    BoundaryFunction, BoxInterval, HarmonicTestFunction,
};
use chordarc::conformal::Domain;
use chordarc::geometry::{
    ahlfors_constant, chord_arc_constant, default_radii, log_space, meyer_david_ratio, meyer_david_sup, probe_grid,
    Curve, CurveWindow, PROBE_OFFSETS,
};
use chordarc::harness::{load_config, parse_config, run, ReportRow, RunOutput, Status};
use chordarc::quadrature::QuadratureSpec;
use num_complex::Complex64;
use statrs::function::gamma::gamma;

type Outcome = Result<Vec<String>, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pole(w: Complex64) -> HarmonicTestFunction {
    HarmonicTestFunction::pole(w, 1, c(1.0, 0.0)).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Records a check and its detail line.
fn check(notes: &mut Vec<String>, failures: &mut Vec<String>, ok: bool, msg: String) {
    if ok {
        notes.push(msg);
    } else {
        failures.push(msg);
    }
}

fn finish(notes: Vec<String>, failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(notes)
    } else {
        Err(failures.join("; "))
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

/// Half-plane energy of `1/(z + i)` and its closed form in p.
fn halfplane_energy_closed_form() -> Outcome {
    let quad = QuadratureSpec::default().with_rel_tol(1e-10);
    let u = pole(c(0.0, -1.0));
    let (mut notes, mut fails) = (Vec::new(), Vec::new());
    let v = halfplane_energy(&u, 2.0, 1, &quad).map_err(e)?.value;
    let r = rel(v, PI / 4.0);
    check(&mut notes, &mut fails, r <= 1e-6, format!("I¹₂ = {v:.12} rel {r:.1e}"));
    for p in [1.5, 2.0, 3.0] {
        // ∫dx/(x² + s²)^p = √π Γ(p − ½)/Γ(p)·s^{1−2p}, then a Beta integral in y
        let oracle = PI.sqrt() * gamma(p - 0.5) * gamma(p - 1.0) / gamma(2.0 * p - 1.0);
        let v = halfplane_energy(&u, p, 1, &quad).map_err(e)?.value;
        let d = (v - oracle).abs();
        check(&mut notes, &mut fails, d <= 1e-5, format!("p={p}: |Δ| {d:.1e}"));
    }
    finish(notes, fails)
}

fn douglas_identity() -> Outcome {
    let quad = QuadratureSpec::default().with_rel_tol(1e-8);
    let u = pole(c(0.0, -1.0));
    let b = boundary_norm_line(&BoundaryFunction::trace(u.clone()), 2.0, &quad).map_err(e)?.value;
    let i = halfplane_energy(&u, 2.0, 1, &quad).map_err(e)?.value;
    let r = rel(b, 4.0 * PI * i);
    finish(vec![format!("‖f‖² = {b:.8}, 4πI = {:.8}, rel {r:.1e}", 4.0 * PI * i)], if r <= 5e-3 { vec![] } else { vec![format!("rel {r:.2e}")] })
}

fn meyer_david() -> Outcome {
    let (mut notes, mut fails) = (Vec::new(), Vec::new());
    let win = CurveWindow::symmetric(10.0, 201).map_err(e)?;
    for w in [c(0.0, 1.0), c(0.0, 2.0), c(1.0, 1.0)] {
        let m = meyer_david_ratio(&Curve::line(), w, &win, 1e-11).map_err(e)?;
        let d = (m.ratio - PI).abs();
        check(&mut notes, &mut fails, d <= 1e-8, format!("line w={w}: |Δ| {d:.1e}"));
    }
    // fixed 5 × 5 probes, integration window doubled
    let g = Curve::grating(0.6).map_err(e)?;
    let small = CurveWindow::symmetric(10.0, 401).map_err(e)?;
    let large = CurveWindow::symmetric(20.0, 801).map_err(e)?;
    let probes = probe_grid(&g, &small, 5, &PROBE_OFFSETS);
    let a = meyer_david_sup(&g, &small, &probes, 1e-8).map_err(e)?.value;
    let b = meyer_david_sup(&g, &large, &probes, 1e-8).map_err(e)?.value;
    let r = rel(b, a);
    check(
        &mut notes,
        &mut fails,
        probes.len() == 25 && a.is_finite() && r <= 0.05,
        format!("grating(0.6) {} probes sup {a:.6} → {b:.6} rel {r:.1e}", probes.len()),
    );
    finish(notes, fails)
}

fn tail() -> Outcome {
    let quad = QuadratureSpec::default().with_rel_tol(1e-10);
    let (mut notes, mut fails) = (Vec::new(), Vec::new());
    let h = Domain::halfplane();
    for eps in [0.25, 0.5, 1.0] {
        let mut worst: f64 = 0.0;
        for w in [c(0.0, 1.0), c(1.0, 2.0), c(-3.0, 0.5)] {
            let t = tail_integral(&h, w, eps, &quad).map_err(e)?;
            worst = worst.max((t.ratio - 1.0 / eps).abs());
        }
        check(&mut notes, &mut fails, worst <= 1e-8, format!("ℍ ε={eps}: |ratio − 1/ε| {worst:.1e}"));
    }
    let s = Domain::sector(1.5).map_err(e)?;
    let quad = QuadratureSpec::default().with_rel_tol(1e-8);
    for eps in [0.25, 0.5, 1.0] {
        let (mut lo, mut hi, mut count) = (f64::INFINITY, 0.0f64, 0);
        for x in [-1.0, 0.0, 1.0] {
            for y in log_space(1e-3, 1e3, 13) {
                let w = s.interior_map().eval(c(x, y));
                let d = s.delta(w);
                if !(1e-2..=1e2).contains(&d) {
                    continue;
                }
                let r = tail_integral(&s, w, eps, &quad).map_err(e)?.ratio;
                lo = lo.min(r);
                hi = hi.max(r);
                count += 1;
            }
        }
        let spread = hi / lo;
        check(
            &mut notes,
            &mut fails,
            count >= 10 && spread < 50.0,
            format!("sector(1.5) ε={eps}: {count} points spread {spread:.3}"),
        );
    }
    finish(notes, fails)
}

fn config_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn rows_with<'a>(out: &'a RunOutput, col: &str) -> impl Iterator<Item = &'a ReportRow> + 'a {
    let col = col.to_string();
    out.rows.iter().filter(move |r| !r.id.starts_with("spread:") && r.get(&col).is_some())
}

fn equivalence() -> Outcome {
    let cfg = load_config(config_path("equivalence_grating.json")).map_err(e)?;
    let out = run(&cfg).map_err(e)?;
    let (mut notes, mut fails) = (Vec::new(), Vec::new());
    for fam in ["ratio_order", "ratio_conformal", "ratio_norm_energy"] {
        let vals: Vec<f64> = rows_with(&out, fam).filter_map(|r| r.value(fam)).collect();
        let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0f64), |a, &v| (a.0.min(v), a.1.max(v)));
        let spread = hi / lo;
        check(
            &mut notes,
            &mut fails,
            vals.len() >= 12 && lo > 0.0 && spread <= 100.0,
            format!("{fam}: {} values spread {spread:.3}", vals.len()),
        );
    }
    let mut worst: f64 = 0.0;
    for r in rows_with(&out, "ratio_conformal").filter(|r| r.parameter == Some(0.0)) {
        worst = worst.max((r.value("ratio_conformal").unwrap_or(f64::NAN) - 1.0).abs());
    }
    check(&mut notes, &mut fails, worst <= 1e-6, format!("c=0 conformal |Δ| {worst:.1e}"));
    let mut inside = 0;
    let mut outside = Vec::new();
    for r in rows_with(&out, "ratio_koebe") {
        let k = r.value("ratio_koebe").unwrap_or(f64::NAN);
        let s = (r.p.unwrap() * r.n.unwrap() as f64 - 2.0).abs();
        if k >= 4f64.powf(-s) && k <= 4f64.powf(s) {
            inside += 1;
        } else {
            outside.push(format!("{}={k}", r.id));
        }
    }
    check(
        &mut notes,
        &mut fails,
        outside.is_empty() && inside >= 24,
        format!("Koebe bracket {inside} rows {}", outside.join(",")),
    );
    finish(notes, fails)
}

fn energy_bound() -> Outcome {
    let (mut notes, mut fails) = (Vec::new(), Vec::new());
    for dom in [r#"{"kind": "halfplane"}"#, r#"{"kind": "grating", "c": 0.6}"#] {
        let cfg = parse_config(&format!(
            r#"{{"experiment": "characterization", "domain": {dom}, "p": [1.5, 2, 3], "n": [2], "norms": false,
                "probes": {{"x": [-1, 0, 1], "y_lo": 0.5, "y_hi": 5, "count": 3}},
                "quadrature": {{"rel_tol": 1e-5}}}}"#
        ))
        .map_err(e)?;
        let out = run(&cfg).map_err(e)?;
        let rows: Vec<&ReportRow> = out.rows.iter().filter(|r| r.id.ends_with(":energy")).collect();
        let mut worst: f64 = 0.0;
        let mut bad = Vec::new();
        for r in &rows {
            let (p, d) = (r.p.unwrap(), r.value("delta").unwrap_or(f64::NAN));
            let bound = 2.0 * PI * 2f64.powf(p) / p / d.powf(p);
            let q = r.value("energy").unwrap_or(f64::NAN) / bound;
            worst = worst.max(q);
            if !(q <= 1.0 + 1e-3) {
                bad.push(r.id.clone());
            }
        }
        let probes = rows.iter().map(|r| r.id.split(':').nth(1).unwrap()).collect::<std::collections::BTreeSet<_>>();
        check(
            &mut notes,
            &mut fails,
            bad.is_empty() && rows.len() == 27 && probes.len() == 9,
            format!("{}: {} energies, max energy/bound {worst:.4} {}", out.rows[0].domain, rows.len(), bad.join(",")),
        );
    }
    finish(notes, fails)
}

fn chord_arc() -> Outcome {
    let (mut notes, mut fails) = (Vec::new(), Vec::new());
    let win = CurveWindow::symmetric(10.0, 401).map_err(e)?;
    for a in [0.25, 0.5, 1.0, 1.5, 1.75] {
        let k = chord_arc_constant(&Curve::sector(a).map_err(e)?, &win).map_err(e)?.value;
        let oracle = 1.0 / (a * PI / 2.0).sin();
        let r = rel(k, oracle);
        check(&mut notes, &mut fails, r <= 0.01, format!("sector α={a}: {k:.5} vs {oracle:.5}"));
    }
    let p = Curve::parabola(1.0).map_err(e)?;
    let (w10, w100) = (CurveWindow::symmetric(10.0, 401).map_err(e)?, CurveWindow::symmetric(100.0, 401).map_err(e)?);
    let k10 = chord_arc_constant(&p, &w10).map_err(e)?.value;
    let k100 = chord_arc_constant(&p, &w100).map_err(e)?.value;
    let a10 = ahlfors_constant(&p, &w10, &default_radii(&w10)).map_err(e)?.value;
    let a100 = ahlfors_constant(&p, &w100, &default_radii(&w100)).map_err(e)?.value;
    check(&mut notes, &mut fails, k100 / k10 >= 5.0, format!("parabola chord-arc ×{:.3}", k100 / k10));
    check(&mut notes, &mut fails, a100 / a10 <= 1.1, format!("parabola Ahlfors ×{:.4}", a100 / a10));
    finish(notes, fails)
}

fn sewing() -> Outcome {
    let cfg = parse_config(
        r#"{"experiment": "sewing", "domain": {"kind": "sector", "alpha": 1.0},
            "sweep": {"values": [0.25, 0.5, 1.0, 1.5, 1.75]}}"#,
    )
    .map_err(e)?;
    let out = run(&cfg).map_err(e)?;
    let (mut notes, mut fails) = (Vec::new(), Vec::new());
    let mut qs = Vec::new();
    for r in rows_with(&out, "exponent") {
        let a = r.parameter.unwrap();
        let x = r.value("exponent").unwrap_or(f64::NAN);
        let d = (x - a / (2.0 - a)).abs();
        if [0.5, 1.0, 1.5].contains(&a) {
            check(&mut notes, &mut fails, d <= 1e-3, format!("α={a}: exponent |Δ| {d:.1e}"));
        }
        qs.push((a, r.value("qs").unwrap_or(f64::NAN)));
    }
    let at1 = qs.iter().find(|q| q.0 == 1.0).map(|q| q.1).unwrap_or(f64::NAN);
    check(&mut notes, &mut fails, (at1 - 1.0).abs() <= 1e-9, format!("QS(1) = {at1:.12}"));
    let mut monotone = true;
    for x in &qs {
        for y in &qs {
            let (dx, dy) = ((x.0 - 1.0).abs(), (y.0 - 1.0).abs());
            if (x.0 - 1.0) * (y.0 - 1.0) >= 0.0 && dx < dy && !(x.1 < y.1) {
                monotone = false;
            }
        }
    }
    let s: Vec<String> = qs.iter().map(|q| format!("{}:{:.4}", q.0, q.1)).collect();
    check(&mut notes, &mut fails, monotone, format!("QS strictly increasing in |α − 1| ({})", s.join(" ")));
    finish(notes, fails)
}

fn carleson() -> Outcome {
    let quad = QuadratureSpec::default().with_rel_tol(1e-6);
    let f = pole(c(0.0, -1.0));
    let (mut notes, mut fails) = (Vec::new(), Vec::new());
    let a = carleson_norm(&f, &dyadic_boxes(0.0, -4, 4, 1).map_err(e)?, &quad).map_err(e)?.value;
    let b = carleson_norm(&f, &dyadic_boxes(0.0, -4, 4, 2).map_err(e)?, &quad).map_err(e)?.value;
    let r = rel(b, a);
    check(&mut notes, &mut fails, r <= 0.05, format!("box sup {a:.6} → {b:.6} rel {r:.1e}"));
    for (lo, hi) in [(-0.5, 0.5), (0.0, 1.0), (-2.0, 2.0), (1.0, 1.25), (-8.0, 0.0)] {
        let l = lusin_average(&f, BoxInterval::new(lo, hi).map_err(e)?, &quad).map_err(e)?;
        check(
            &mut notes,
            &mut fails,
            l.holds(),
            format!("[{lo}, {hi}]: {:.5} ≤ {:.5}", l.lhs, l.rhs),
        );
    }
    finish(notes, fails)
}

fn affine_invariance() -> Outcome {
    let quad = QuadratureSpec::default().with_rel_tol(1e-10);
    let u = pole(c(0.0, -1.0));
    let (mut notes, mut fails) = (Vec::new(), Vec::new());
    for p in [1.5, 2.0, 3.0] {
        let base = boundary_norm_line(&BoundaryFunction::trace(u.clone()), p, &quad).map_err(e)?.value;
        for (a, b) in [(2.0, 0.0), (1.0, 3.0), (0.5, -1.0)] {
            let g = u.precompose_affine(c(a, 0.0), c(b, 0.0)).map_err(e)?;
            let v = boundary_norm_line(&BoundaryFunction::trace(g), p, &quad).map_err(e)?.value;
            let r = rel(v, base);
            check(&mut notes, &mut fails, r <= 1e-6, format!("p={p} (a,b)=({a},{b}): rel {r:.1e}"));
        }
    }
    finish(notes, fails)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("1 half-plane energy closed forms", halfplane_energy_closed_form, 10),
        ("2 Douglas identity", douglas_identity, 30),
        ("3 Meyer–David ratio", meyer_david, 60),
        ("4 ray tail", tail, 60),
        ("5 energy and norm equivalence on gratings", equivalence, 600),
        ("6 test-function energy bound", energy_bound, 300),
        ("7 chord-arc constants", chord_arc, 60),
        ("8 conformal sewing", sewing, 60),
        ("9 Carleson and Lusin", carleson, 120),
        ("10 affine invariance of B_p(ℝ)", affine_invariance, 60),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f, budget) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(&format!("{o} "))) {
            continue;
        }
        let t0 = Instant::now();
        let res = f();
        let dt = t0.elapsed();
        let in_time = dt <= Duration::from_secs(budget);
        let status = if res.is_ok() && in_time { Status::Pass } else { Status::Fail };
        if status == Status::Fail {
            failed += 1;
        }
        let detail = match &res {
            Ok(notes) => notes.join("; "),
            Err(msg) => msg.clone(),
        };
        let time = if in_time { String::new() } else { format!(" over budget {budget}s") };
        println!("{:<4} {name} [{:.1}s{time}] {detail}", status.to_string().to_uppercase(), dt.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
