use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{Bracket, DomainSpec, ExperimentConfig, ExperimentKind, ReportFormat};
use super::report::{emit_report, Cell, FlagSummary, ReportRow};
use crate::analysis::{
    boundary_norm_curve, bp_phi_norm, carleson_norm, dyadic_boxes, energy, lusin_average, tail_integral,
    test_function_bound, BoundaryFunction, BoxInterval, EnergyForm, HarmonicTestFunction, Weight, MIN_POLE_DISTANCE,
};
use crate::conformal::{fit_power_exponent, quasisymmetric_constant, sewing_eval, Domain, DomainKind, Side};
use crate::geometry::{diagnose, log_space, meyer_david_ratio, CurveWindow};
use crate::quadrature::QuadratureSpec;
use crate::{Error, Result};

/// Slack on the test-function energy bound.
pub const ENERGY_BOUND_SLACK: f64 = 1e-3;

/// Tolerance of the sewing evaluations.
const SEWING_TOL: f64 = 1e-10;

/// Rows of one experiment run, with the columns worth plotting.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub kind: ExperimentKind,
    pub rows: Vec<ReportRow>,
    pub plots: Vec<&'static str>,
}

impl RunOutput {
    pub fn summary(&self) -> FlagSummary {
        FlagSummary::of(&self.rows)
    }

    /// Writes the report as `dir/<experiment>.<ext>`.
    pub fn emit(&self, dir: &Path, formats: &[ReportFormat]) -> Result<Vec<PathBuf>> {
        emit_report(&self.rows, formats, dir, self.kind.name(), &self.plots)
    }

    pub fn row(&self, id: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.id == id)
    }
}

/// Validates `cfg` and runs its experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate().map_err(Error::Config)?;
    let (mut rows, plots) = match cfg.experiment {
        ExperimentKind::Equivalence => run_equivalence(cfg)?,
        ExperimentKind::Characterization => run_characterization(cfg)?,
        ExperimentKind::Diagnostics => run_diagnostics(cfg)?,
        ExperimentKind::Tail => run_tail(cfg)?,
        ExperimentKind::Sewing => run_sewing(cfg)?,
        ExperimentKind::Carleson => run_carleson(cfg)?,
        ExperimentKind::Energy => run_energy(cfg)?,
        ExperimentKind::BoundaryNorm => run_boundary_norm(cfg)?,
    };
    apply_brackets(&mut rows, &cfg.brackets);
    Ok(RunOutput {
        kind: cfg.experiment,
        rows,
        plots,
    })
}

type Rows = (Vec<ReportRow>, Vec<&'static str>);

fn cell<T>(r: &Result<T>, f: impl Fn(&T) -> f64) -> Cell {
    match r {
        Ok(v) => Cell::Value(f(v)),
        Err(e) => Cell::from_error(e),
    }
}

fn apply_brackets(rows: &mut [ReportRow], brackets: &BTreeMap<String, Bracket>) {
    for r in rows.iter_mut() {
        for (col, [lo, hi]) in brackets {
            if r.get(col).is_some() {
                r.flag(col, col, Some(*lo), Some(*hi));
            }
        }
    }
}

/// One row per column: `max/min` of its values over `rows`, flagged against
/// `max_spread`.
fn spread_rows(kind: ExperimentKind, rows: &[ReportRow], columns: &[&str], max_spread: f64, tag: &str) -> Vec<ReportRow> {
    columns
        .iter()
        .map(|col| {
            let cells: Vec<&Cell> = rows.iter().filter_map(|r| r.get(col)).collect();
            let vals: Vec<f64> = cells.iter().filter_map(|c| c.value()).collect();
            let mut row = ReportRow::new(kind.name(), format!("spread:{tag}{col}"));
            row.function = col.to_string();
            let failed = cells.iter().find(|c| matches!(c, Cell::Failed(_)));
            let spread = if let Some(f) = failed {
                (*f).clone()
            } else if vals.is_empty() {
                Cell::Unsupported(format!("no values of {col}"))
            } else {
                let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, &v| (a.0.min(v), a.1.max(v)));
                row.set_value("min", lo).set_value("max", hi).set_value("count", vals.len() as f64);
                if lo > 0.0 {
                    Cell::Value(hi / lo)
                } else {
                    Cell::Failed(format!("nonpositive {col}"))
                }
            };
            row.set("spread", spread);
            row.flag("spread", "spread", Some(1.0), Some(max_spread));
            row
        })
        .collect()
}

fn domain_row(kind: ExperimentKind, id: String, spec: &DomainSpec, domain: &Domain) -> ReportRow {
    let mut r = ReportRow::new(kind.name(), id);
    r.domain = domain.label();
    r.parameter = spec.parameter();
    r
}

fn domains(cfg: &ExperimentConfig) -> Result<Vec<(DomainSpec, Domain)>> {
    cfg.domain_specs()
        .into_iter()
        .map(|s| s.build().map(|d| (s, d)))
        .collect()
}

fn functions(cfg: &ExperimentConfig) -> Result<Vec<(String, HarmonicTestFunction)>> {
    let us = cfg.parsed_functions()?;
    Ok(cfg.functions.iter().map(|s| s.trim().to_string()).zip(us).collect())
}

const DELTA: EnergyForm = EnergyForm::Domain { weight: Weight::Delta };
const PULLBACK: EnergyForm = EnergyForm::Domain { weight: Weight::Pullback };

const EQUIVALENCE_RATIOS: [&str; 5] = [
    "ratio_order",
    "ratio_conformal",
    "ratio_norm_energy",
    "ratio_phi_energy",
    "ratio_phi_ext_energy",
];

/// Energies in the three forms and the boundary norms for each domain,
/// function and `p`; one row per order `n` with the equivalence ratios,
/// then one spread row per ratio family.
fn run_equivalence(cfg: &ExperimentConfig) -> Result<Rows> {
    let kind = cfg.experiment;
    let doms = domains(cfg)?;
    let fs = functions(cfg)?;
    let mut jobs = Vec::new();
    for (di, d) in doms.iter().enumerate() {
        for (fi, f) in fs.iter().enumerate() {
            for &p in &cfg.p {
                jobs.push((di, d, fi, f, p));
            }
        }
    }
    let quad = cfg.quadrature;
    let nquad = cfg.norm_quad();
    let blocks: Vec<Vec<ReportRow>> = jobs
        .par_iter()
        .map(|&(di, (spec, domain), fi, (label, u), p)| {
            let e1 = energy(u, domain, Side::Interior, p, 1, DELTA, &quad);
            let (bnorm, bphi, bphi_ext) = if cfg.norms {
                let tr = BoundaryFunction::trace(u.clone());
                (
                    cell(&boundary_norm_curve(&tr, domain.curve(), p, None, &nquad), |r| r.value),
                    cell(&bp_phi_norm(&tr, domain, Side::Interior, p, &nquad), |r| r.value),
                    cell(&bp_phi_norm(&tr, domain, Side::Exterior, p, &nquad), |r| r.value),
                )
            } else {
                let off = || Cell::Unsupported("norms disabled".into());
                (off(), off(), off())
            };
            cfg.n
                .iter()
                .map(|&n| {
                    let mut row = domain_row(kind, format!("d{di}:f{fi}:p{p}:n{n}"), spec, domain);
                    row.function = label.clone();
                    row.p = Some(p);
                    row.n = Some(n);
                    let higher;
                    let ed = if n == 1 {
                        &e1
                    } else {
                        higher = energy(u, domain, Side::Interior, p, n, DELTA, &quad);
                        &higher
                    };
                    let ep = energy(u, domain, Side::Interior, p, n, PULLBACK, &quad);
                    let ec = energy(u, domain, Side::Interior, p, n, EnergyForm::Composed, &quad);
                    let (ed_c, ep_c, ec_c) = (cell(ed, |r| r.value), cell(&ep, |r| r.value), cell(&ec, |r| r.value));
                    row.set("energy_delta", ed_c.clone())
                        .set("energy_delta_err", cell(ed, |r| r.total_error()))
                        .set("energy_pullback", ep_c.clone())
                        .set("energy_composed", ec_c.clone())
                        .set("energy_composed_err", cell(&ec, |r| r.total_error()))
                        .set("energy_order1", cell(&e1, |r| r.value))
                        .set("bnorm", bnorm.clone())
                        .set("bphi", bphi.clone())
                        .set("bphi_ext", bphi_ext.clone());
                    if n >= 2 {
                        row.set("ratio_order", Cell::ratio(&ed_c, &cell(&e1, |r| r.value)));
                    }
                    row.set("ratio_conformal", Cell::ratio(&ec_c, &ed_c))
                        .set("ratio_koebe", Cell::ratio(&ed_c, &ep_c))
                        .set("ratio_norm_energy", Cell::ratio(&bnorm, &ed_c))
                        .set("ratio_phi_energy", Cell::ratio(&bphi, &ed_c))
                        .set("ratio_phi_ext_energy", Cell::ratio(&bphi_ext, &ed_c));
                    // δ/(y|φ′|) ∈ [1/2, 2] pointwise
                    let k = 4f64.powf((n as f64 * p - 2.0).abs());
                    row.flag("koebe", "ratio_koebe", Some(1.0 / k), Some(k));
                    row
                })
                .collect()
        })
        .collect();
    let mut rows: Vec<ReportRow> = blocks.into_iter().flatten().collect();
    let spreads = spread_rows(kind, &rows, &EQUIVALENCE_RATIOS, cfg.max_spread, "");
    rows.extend(spreads);
    Ok((rows, EQUIVALENCE_RATIOS.to_vec()))
}

/// The lower bound on `‖F_w‖^p_{B_p(Γ)}` from the arcs near `w`.
pub fn test_function_norm_lower_bound(delta: f64, p: f64, ell2: f64, ell4: f64, ell4_annulus: f64) -> f64 {
    if p < 2.0 {
        (4.0 * delta).powf(p - 2.0) * (2.0 * delta).powf(-2.0 * p) * ell2 * ell2
    } else {
        delta.powf(p - 2.0) / (24f64.powf(p) * delta.powf(2.0 * p)) * ell4_annulus * ell4
    }
}

/// Arc-length and kernel quantities of Γ around `w`.
#[derive(Debug, Clone)]
struct LocalGeometry {
    delta: f64,
    ell2: Cell,
    ell4: Cell,
    ell4_annulus: Cell,
    near_md: Cell,
    md: Cell,
}

fn local_geometry(domain: &Domain, w: Complex64, delta: f64) -> LocalGeometry {
    let curve = domain.curve();
    let near = curve
        .ball_kernel_integral(w, 2.0 * delta, &QuadratureSpec::default().with_rel_tol(1e-10))
        .map(|v| v * delta);
    let window = CurveWindow::symmetric(20.0 * (1.0 + w.norm()), 401);
    let md = window.and_then(|win| meyer_david_ratio(curve, w, &win, 1e-8));
    LocalGeometry {
        delta,
        ell2: cell(&curve.disk_length(w, 2.0 * delta), |v| *v),
        ell4: cell(&curve.disk_length(w, 4.0 * delta), |v| *v),
        ell4_annulus: cell(&curve.annulus_length(w, 5.0 * delta, 6.0 * delta), |v| *v),
        near_md: cell(&near, |v| *v),
        md: cell(&md, |m| m.ratio),
    }
}

/// `ψ(x − iy)` where the exterior map exists, else the point `y` below
/// `γ(x)` on the base graph, moved by the domain's similarity.
pub fn exterior_probe(domain: &Domain, x: f64, y: f64) -> Complex64 {
    match domain.exterior_map() {
        Some(psi) => psi.eval(Complex64::new(x, -y)),
        None => {
            let c = domain.curve();
            c.similarity().apply(c.base().eval(x) - Complex64::new(0.0, y))
        }
    }
}

/// For probe points `w ∈ Ω⁻` (see [`exterior_probe`]): the test-function energy against its
/// bound, the arc-length lower bounds on `‖F_w‖^p`, and the near part of the
/// Meyer–David integral against `ℓ(Γ_{2w})/δ`.
fn run_characterization(cfg: &ExperimentConfig) -> Result<Rows> {
    let kind = cfg.experiment;
    let doms = domains(cfg)?;
    let pts = cfg.probes.points();
    let mut jobs = Vec::new();
    for (di, d) in doms.iter().enumerate() {
        for (wi, &xy) in pts.iter().enumerate() {
            jobs.push((di, d, wi, xy));
        }
    }
    let quad = cfg.quadrature;
    let nquad = cfg.norm_quad();
    let blocks: Vec<Vec<ReportRow>> = jobs
        .par_iter()
        .map(|&(di, (spec, domain), wi, (x, y))| {
            let w = exterior_probe(domain, x, y);
            let delta = domain.delta(w);
            let prefix = format!("d{di}:w{wi}");
            let label = format!("F_w, w={:.6}{:+.6}i", w.re, w.im);
            let base = |id: String| {
                let mut r = domain_row(kind, id, spec, domain);
                r.function = label.clone();
                r.set_value("x", x).set_value("y", y).set_value("delta", delta);
                r
            };
            if delta < MIN_POLE_DISTANCE {
                let mut r = base(format!("{prefix}:geometry"));
                r.set(
                    "energy_over_bound",
                    Cell::Unsupported(format!("δ(w) = {delta} is below the pole distance floor {MIN_POLE_DISTANCE}")),
                );
                r.flag("energy_bound", "energy_over_bound", None, Some(1.0 + ENERGY_BOUND_SLACK));
                return vec![r];
            }
            let g = local_geometry(domain, w, delta);
            let mut out = Vec::new();
            let mut geo = base(format!("{prefix}:geometry"));
            geo.set("ell2", g.ell2.clone())
                .set("ell4", g.ell4.clone())
                .set("ell4_annulus", g.ell4_annulus.clone())
                .set("ell2_over_2delta", Cell::ratio(&g.ell2, &Cell::Value(2.0 * delta)))
                .set("ell4_annulus_over_2delta", Cell::ratio(&g.ell4_annulus, &Cell::Value(2.0 * delta)))
                .set("near_md", g.near_md.clone())
                .set("md", g.md.clone())
                .set("near_md_over_arc_bound", Cell::ratio(&g.near_md, &Cell::ratio(&g.ell2, &Cell::Value(delta))))
                .set("near_md_over_md", Cell::ratio(&g.near_md, &g.md));
            geo.flag("arc_near", "ell2_over_2delta", Some(1.0), None);
            geo.flag("arc_annulus", "ell4_annulus_over_2delta", Some(1.0), None);
            geo.flag("near_md_arc", "near_md_over_arc_bound", None, Some(1.0));
            geo.flag("near_md_total", "near_md_over_md", None, Some(1.0 + 1e-6));
            out.push(geo);
            let u = HarmonicTestFunction::f_w(w);
            for &p in &cfg.p {
                for &n in &cfg.n {
                    let mut r = base(format!("{prefix}:p{p}:n{n}:energy"));
                    r.p = Some(p);
                    r.n = Some(n);
                    let e = energy(&u, domain, Side::Interior, p, n, DELTA, &quad);
                    let bound = test_function_bound(g.delta, p, n);
                    let ec = cell(&e, |r| r.value);
                    r.set("energy", ec.clone())
                        .set("energy_err", cell(&e, |r| r.total_error()))
                        .set("energy_bound", Cell::Value(bound))
                        .set("energy_over_bound", Cell::ratio(&ec, &Cell::Value(bound)));
                    r.flag("energy_bound", "energy_over_bound", None, Some(1.0 + ENERGY_BOUND_SLACK));
                    out.push(r);
                }
                if cfg.norms {
                    let mut r = base(format!("{prefix}:p{p}:norm"));
                    r.p = Some(p);
                    let tr = BoundaryFunction::trace(u.clone());
                    let b = cell(&boundary_norm_curve(&tr, domain.curve(), p, None, &nquad), |r| r.value);
                    let lower = match (&g.ell2, &g.ell4, &g.ell4_annulus) {
                        (Cell::Value(a), Cell::Value(b), Cell::Value(c)) => {
                            Cell::Value(test_function_norm_lower_bound(delta, p, *a, *b, *c))
                        }
                        (a, _, _) if !matches!(a, Cell::Value(_)) => a.clone(),
                        (_, b, c) => Cell::ratio(b, c),
                    };
                    r.set("bnorm", b.clone())
                        .set("bnorm_lower", lower.clone())
                        .set("bnorm_over_lower", Cell::ratio(&b, &lower));
                    r.flag("norm_lower", "bnorm_over_lower", Some(1.0), None);
                    out.push(r);
                }
            }
            out
        })
        .collect();
    Ok((blocks.into_iter().flatten().collect(), vec!["energy_over_bound", "near_md_over_md"]))
}

/// Chord-arc, Ahlfors and Meyer–David constants per curve and window, then
/// the growth of each constant from the first window to the last.
fn run_diagnostics(cfg: &ExperimentConfig) -> Result<Rows> {
    let kind = cfg.experiment;
    let base_dir = None::<&Path>;
    let curves = cfg
        .curves
        .iter()
        .map(|c| c.build(base_dir))
        .collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for (ci, c) in curves.iter().enumerate() {
        for &half in &cfg.windows {
            jobs.push((ci, c, half));
        }
    }
    let rows: Vec<ReportRow> = jobs
        .par_iter()
        .map(|&(ci, curve, half)| {
            let mut r = ReportRow::new(kind.name(), format!("c{ci}:T{half}"));
            r.domain = curve.label();
            r.parameter = Some(half);
            let rep = cfg.window(half).and_then(|w| diagnose(curve, &w));
            r.set("chord_arc", cell(&rep, |d| d.chord_arc_constant))
                .set("ahlfors", cell(&rep, |d| d.ahlfors_constant))
                .set("md_sup", cell(&rep, |d| d.meyer_david_sup));
            if let Ok(d) = &rep {
                r.set_value("md_witness_re", d.meyer_david_witness.re)
                    .set_value("md_witness_im", d.meyer_david_witness.im);
            }
            r
        })
        .collect();
    let mut out = rows.clone();
    for (ci, c) in curves.iter().enumerate() {
        let mine: Vec<&ReportRow> = rows.iter().filter(|r| r.id.starts_with(&format!("c{ci}:"))).collect();
        if mine.len() < 2 {
            continue;
        }
        let (first, last) = (mine[0], mine[mine.len() - 1]);
        let mut g = ReportRow::new(kind.name(), format!("c{ci}:growth"));
        g.domain = c.label();
        for col in ["chord_arc", "ahlfors", "md_sup"] {
            let (a, b) = (first.get(col).unwrap(), last.get(col).unwrap());
            g.set(&format!("growth_{col}"), Cell::ratio(b, a));
        }
        out.push(g);
    }
    Ok((out, vec!["chord_arc", "ahlfors", "md_sup"]))
}

/// The ray integral ratio `δ(w)^ε ∫_{L(w)} δ^{−1−ε}` at the probe points,
/// with its spread per domain and `ε`.
fn run_tail(cfg: &ExperimentConfig) -> Result<Rows> {
    let kind = cfg.experiment;
    let doms = domains(cfg)?;
    let pts = cfg.probes.points();
    let mut jobs = Vec::new();
    for (di, d) in doms.iter().enumerate() {
        for &eps in &cfg.eps {
            for (wi, &xy) in pts.iter().enumerate() {
                jobs.push((di, d, eps, wi, xy));
            }
        }
    }
    let quad = cfg.quadrature;
    let rows: Vec<ReportRow> = jobs
        .par_iter()
        .map(|&(di, (spec, domain), eps, wi, (x, y))| {
            let mut r = domain_row(kind, format!("d{di}:eps{eps}:w{wi}"), spec, domain);
            let w = domain.interior_map().eval(Complex64::new(x, y));
            r.function = format!("eps={eps}");
            r.set_value("eps", eps).set_value("x", x).set_value("y", y);
            let t = tail_integral(domain, w, eps, &quad);
            r.set("delta", cell(&t, |t| t.delta))
                .set("integral", cell(&t, |t| t.integral))
                .set("ratio", cell(&t, |t| t.ratio))
                .set("ratio_times_eps", cell(&t, |t| t.ratio * eps))
                .set("error", cell(&t, |t| t.error_estimate));
            r
        })
        .collect();
    let mut out = rows.clone();
    for (di, (spec, domain)) in doms.iter().enumerate() {
        for &eps in &cfg.eps {
            let prefix = format!("d{di}:eps{eps}:");
            let group: Vec<ReportRow> = rows.iter().filter(|r| r.id.starts_with(&prefix)).cloned().collect();
            for mut s in spread_rows(kind, &group, &["ratio"], cfg.max_spread, &prefix) {
                s.domain = domain.label();
                s.parameter = spec.parameter();
                s.function = format!("eps={eps}");
                out.push(s);
            }
        }
    }
    Ok((out, vec!["ratio"]))
}

/// The sewing exponent where the sewing is a power, i.e. on sectors.
pub fn sewing_exponent_closed_form(domain: &Domain) -> Option<f64> {
    match domain.kind() {
        DomainKind::Halfplane => Some(1.0),
        DomainKind::Sector { alpha } => Some(alpha / (2.0 - alpha)),
        DomainKind::Grating { .. } => None,
    }
}

/// Power-law exponent and quasisymmetry constant of the conformal sewing
/// per domain, and monotonicity of the constant in the distance from the
/// flat case.
fn run_sewing(cfg: &ExperimentConfig) -> Result<Rows> {
    let kind = cfg.experiment;
    let s = &cfg.sewing;
    let doms = domains(cfg)?;
    let window = CurveWindow::symmetric(s.window, s.window_points)?;
    let scales = log_space(s.scale_lo, s.scale_hi, s.scale_points);
    let rows: Vec<ReportRow> = doms
        .par_iter()
        .enumerate()
        .map(|(di, (spec, domain))| {
            let mut r = domain_row(kind, format!("d{di}"), spec, domain);
            let h = |x: f64| sewing_eval(domain, x, SEWING_TOL);
            let fit = h(1.0).and_then(|_| fit_power_exponent(h, s.fit_lo, s.fit_hi, s.fit_points));
            let qs = h(0.0).and_then(|_| quasisymmetric_constant(|x| h(x).unwrap_or(f64::NAN), &window, &scales));
            let qs = match qs {
                Ok(q) if !q.value.is_finite() => Err(Error::Quadrature("sewing evaluation failed".into())),
                q => q,
            };
            r.set("exponent", cell(&fit, |v| *v)).set("qs", cell(&qs, |q| q.value));
            if let Ok(q) = &qs {
                r.set_value("qs_witness_x", q.witness.0).set_value("qs_witness_s", q.witness.1);
            }
            match sewing_exponent_closed_form(domain) {
                Some(e) => {
                    r.set_value("exponent_expected", e)
                        .set("exponent_error", cell(&fit, |v| (v - e).abs()));
                    r.flag("exponent", "exponent_error", None, Some(s.exponent_tol));
                    if e == 1.0 {
                        r.flag("qs_identity", "qs", Some(1.0), Some(1.0 + 1e-9));
                    }
                }
                None => {
                    r.set("exponent_expected", Cell::Unsupported("no closed form".into()));
                }
            }
            r
        })
        .collect();
    let mut out = rows.clone();
    // strictly increasing in |α − 1| on each side of the flat case
    let mut pts: Vec<(f64, Option<f64>)> = doms
        .iter()
        .zip(&rows)
        .filter_map(|((_, d), r)| match d.kind() {
            DomainKind::Sector { alpha } => Some((alpha, r.value("qs"))),
            DomainKind::Halfplane => Some((1.0, r.value("qs"))),
            _ => None,
        })
        .collect();
    if pts.len() >= 2 {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut m = ReportRow::new(kind.name(), "qs_monotone");
        let ok = pts.iter().all(|p| p.1.is_some()) && {
            let ok_pair = |a: &(f64, Option<f64>), b: &(f64, Option<f64>)| {
                let (da, db) = ((a.0 - 1.0).abs(), (b.0 - 1.0).abs());
                let same_side = (a.0 - 1.0) * (b.0 - 1.0) >= 0.0;
                if !same_side || da == db {
                    return true;
                }
                let (qa, qb) = (a.1.unwrap(), b.1.unwrap());
                if da < db {
                    qa < qb
                } else {
                    qb < qa
                }
            };
            pts.iter().all(|a| pts.iter().all(|b| ok_pair(a, b)))
        };
        m.set_value("monotone", if ok { 1.0 } else { 0.0 });
        m.flag("qs_monotone", "monotone", Some(1.0), Some(1.0));
        out.push(m);
    }
    Ok((out, vec!["exponent", "qs"]))
}

/// Carleson box sup at two refinement levels and the averaged Lusin
/// inequality on each configured interval.
fn run_carleson(cfg: &ExperimentConfig) -> Result<Rows> {
    let kind = cfg.experiment;
    let c = &cfg.carleson;
    let fs = functions(cfg)?;
    let quad = cfg.quadrature;
    let coarse = dyadic_boxes(c.center, c.k_min, c.k_max, c.refine)?;
    let fine = dyadic_boxes(c.center, c.k_min, c.k_max, c.refine + 1)?;
    let intervals = c
        .intervals
        .iter()
        .map(|&[a, b]| BoxInterval::new(a, b))
        .collect::<Result<Vec<_>>>()?;
    let blocks: Vec<Vec<ReportRow>> = fs
        .par_iter()
        .enumerate()
        .map(|(fi, (label, u))| {
            let mut out = Vec::new();
            let mut r = ReportRow::new(kind.name(), format!("f{fi}:carleson"));
            r.function = label.clone();
            let a = carleson_norm(u, &coarse, &quad);
            let b = carleson_norm(u, &fine, &quad);
            let (ac, bc) = (cell(&a, |r| r.value), cell(&b, |r| r.value));
            let change = match (&ac, &bc) {
                (Cell::Value(x), Cell::Value(y)) => Cell::Value((y / x - 1.0).abs()),
                _ => Cell::ratio(&ac, &bc),
            };
            r.set("sup", ac)
                .set("sup_refined", bc)
                .set("boxes", cell(&a, |r| r.boxes as f64))
                .set("boxes_refined", cell(&b, |r| r.boxes as f64))
                .set("relative_change", change);
            if let Ok(res) = &b {
                r.set_value("witness_a", res.witness.a).set_value("witness_b", res.witness.b);
            }
            r.flag("stable", "relative_change", None, Some(c.stability));
            out.push(r);
            for (ii, iv) in intervals.iter().enumerate() {
                let mut r = ReportRow::new(kind.name(), format!("f{fi}:lusin{ii}"));
                r.function = label.clone();
                r.parameter = Some(iv.len());
                let l = lusin_average(u, *iv, &quad);
                r.set_value("a", iv.a)
                    .set_value("b", iv.b)
                    .set("lhs", cell(&l, |l| l.lhs))
                    .set("rhs", cell(&l, |l| l.rhs))
                    .set("lusin_ratio", cell(&l, |l| l.lhs / (l.rhs + l.lhs_error + l.rhs_error)));
                r.flag("lusin", "lusin_ratio", None, Some(1.0));
                out.push(r);
            }
            out
        })
        .collect();
    Ok((blocks.into_iter().flatten().collect(), vec!["lusin_ratio"]))
}

/// Energies in each form, one row per domain, function, `p` and `n`.
fn run_energy(cfg: &ExperimentConfig) -> Result<Rows> {
    let kind = cfg.experiment;
    let doms = domains(cfg)?;
    let fs = functions(cfg)?;
    let mut jobs = Vec::new();
    for (di, d) in doms.iter().enumerate() {
        for (fi, f) in fs.iter().enumerate() {
            for &p in &cfg.p {
                for &n in &cfg.n {
                    jobs.push((di, d, fi, f, p, n));
                }
            }
        }
    }
    let quad = cfg.quadrature;
    let rows = jobs
        .par_iter()
        .map(|&(di, (spec, domain), fi, (label, u), p, n)| {
            let mut r = domain_row(kind, format!("d{di}:f{fi}:p{p}:n{n}"), spec, domain);
            r.function = label.clone();
            r.p = Some(p);
            r.n = Some(n);
            for (name, form) in [("delta", DELTA), ("pullback", PULLBACK), ("composed", EnergyForm::Composed)] {
                let e = energy(u, domain, Side::Interior, p, n, form, &quad);
                r.set(&format!("energy_{name}"), cell(&e, |e| e.value))
                    .set(&format!("energy_{name}_err"), cell(&e, |e| e.total_error()));
            }
            r
        })
        .collect();
    Ok((rows, vec!["energy_delta"]))
}

/// Boundary norms of the traces, one row per domain, function and `p`.
fn run_boundary_norm(cfg: &ExperimentConfig) -> Result<Rows> {
    let kind = cfg.experiment;
    let doms = domains(cfg)?;
    let fs = functions(cfg)?;
    let mut jobs = Vec::new();
    for (di, d) in doms.iter().enumerate() {
        for (fi, f) in fs.iter().enumerate() {
            for &p in &cfg.p {
                jobs.push((di, d, fi, f, p));
            }
        }
    }
    let nquad = cfg.norm_quad();
    let rows = jobs
        .par_iter()
        .map(|&(di, (spec, domain), fi, (label, u), p)| {
            let mut r = domain_row(kind, format!("d{di}:f{fi}:p{p}"), spec, domain);
            r.function = label.clone();
            r.p = Some(p);
            let tr = BoundaryFunction::trace(u.clone());
            let b = boundary_norm_curve(&tr, domain.curve(), p, None, &nquad);
            let i = bp_phi_norm(&tr, domain, Side::Interior, p, &nquad);
            let e = bp_phi_norm(&tr, domain, Side::Exterior, p, &nquad);
            r.set("bnorm", cell(&b, |r| r.value))
                .set("bnorm_err", cell(&b, |r| r.error_estimate))
                .set("bphi", cell(&i, |r| r.value))
                .set("bphi_err", cell(&i, |r| r.error_estimate))
                .set("bphi_ext", cell(&e, |r| r.value))
                .set("bphi_ext_err", cell(&e, |r| r.error_estimate));
            r
        })
        .collect();
    Ok((rows, vec!["bnorm", "bphi"]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::parse_config;
    use crate::harness::report::Status;
    use std::f64::consts::PI;

    #[test]
    fn halfplane_tail_ratio_is_one_over_eps() {
        let cfg = parse_config(
            r#"{"experiment": "tail", "domain": {"kind": "halfplane"}, "eps": [0.5, 1.0],
                "probes": {"x": [0.0, 2.0], "y_lo": 0.1, "y_hi": 10.0, "count": 3},
                "quadrature": {"rel_tol": 1e-10}}"#,
        )
        .unwrap();
        let out = run(&cfg).unwrap();
        let data: Vec<&ReportRow> = out.rows.iter().filter(|r| r.get("ratio").is_some()).collect();
        assert_eq!(data.len(), 12);
        for r in data {
            let eps = r.value("eps").unwrap();
            assert!((r.value("ratio").unwrap() * eps - 1.0).abs() < 1e-8, "{r:?}");
        }
        let spreads: Vec<&ReportRow> = out.rows.iter().filter(|r| r.id.starts_with("spread:")).collect();
        assert_eq!(spreads.len(), 2);
        assert!(out.summary().all_pass());
    }

    #[test]
    fn sector_sewing_run() {
        let cfg = parse_config(
            r#"{"experiment": "sewing", "domain": {"kind": "sector", "alpha": 1.0},
                "sweep": {"values": [0.5, 1.0, 1.5]}}"#,
        )
        .unwrap();
        let out = run(&cfg).unwrap();
        assert_eq!(out.rows.len(), 4);
        for r in &out.rows[..3] {
            assert!(r.value("exponent_error").unwrap() < 1e-3, "{r:?}");
        }
        assert!((out.rows[1].value("qs").unwrap() - 1.0).abs() < 1e-9);
        assert!(out.summary().all_pass(), "{:?}", out.rows);
    }

    #[test]
    fn grating_has_no_sewing() {
        let cfg = parse_config(r#"{"experiment": "sewing", "domain": {"kind": "grating", "c": 0.5}}"#).unwrap();
        let out = run(&cfg).unwrap();
        assert!(matches!(out.rows[0].get("qs"), Some(Cell::Unsupported(_))));
        assert!(out.rows[0].flags.is_empty());
    }

    #[test]
    fn halfplane_characterization_oracle() {
        // I²₂(F_w, ℍ) = π/(8δ²) and the bound is 4π/δ²
        let cfg = parse_config(
            r#"{"experiment": "characterization", "domain": {"kind": "halfplane"}, "n": [2], "p": [2],
                "norms": false, "probes": {"x": [0.0], "y_lo": 0.5, "y_hi": 2.0, "count": 2}}"#,
        )
        .unwrap();
        let out = run(&cfg).unwrap();
        let energies: Vec<&ReportRow> = out.rows.iter().filter(|r| r.id.ends_with(":energy")).collect();
        assert_eq!(energies.len(), 2);
        for r in energies {
            let d = r.value("delta").unwrap();
            let e = r.value("energy").unwrap_or_else(|| panic!("{r:?}"));
            assert!((e - PI / 8.0 / (d * d)).abs() < 1e-8 / (d * d));
            assert!((r.value("energy_over_bound").unwrap() - 1.0 / 32.0).abs() < 1e-8);
        }
        assert!(out.summary().all_pass(), "{:?}", out.rows);
    }

    #[test]
    fn characterization_below_the_pole_floor_is_unsupported() {
        let cfg = parse_config(
            r#"{"experiment": "characterization", "domain": {"kind": "halfplane"},
                "probes": {"x": [0.0], "y_lo": 0.01, "y_hi": 0.01, "count": 1}}"#,
        )
        .unwrap();
        let out = run(&cfg).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.rows[0].flags[0].status, Status::Unsupported);
    }

    #[test]
    fn norm_lower_bound_cases() {
        // p = 2 uses the annulus arcs; p < 2 only the near arc
        let b = test_function_norm_lower_bound(1.0, 2.0, 3.0, 5.0, 2.0);
        assert!((b - 10.0 / 576.0).abs() < 1e-15);
        let b = test_function_norm_lower_bound(1.0, 1.5, 3.0, 5.0, 2.0);
        assert!((b - 4f64.powf(-0.5) * 2f64.powf(-3.0) * 9.0).abs() < 1e-15);
    }

    #[test]
    fn halfplane_equivalence_small() {
        let cfg = parse_config(
            r#"{"experiment": "equivalence", "domain": {"kind": "halfplane"},
                "functions": ["pole(w=-1i,k=1,coef=1)"], "p": [2], "n": [1, 2],
                "norm_quadrature": {"rel_tol": 1e-4},
                "brackets": {"ratio_conformal": [0.999999, 1.000001]}}"#,
        )
        .unwrap();
        let out = run(&cfg).unwrap();
        let r = out.row("d0:f0:p2:n1").unwrap();
        // ‖1/(x + i)‖²_{B₂(ℝ)} = π², energy π/4, Douglas factor 4π
        assert!((r.value("bnorm").unwrap() - PI * PI).abs() < 1e-3 * PI * PI);
        assert!((r.value("energy_delta").unwrap() - PI / 4.0).abs() < 1e-6);
        assert!((r.value("ratio_norm_energy").unwrap() - 4.0 * PI).abs() < 1e-2);
        assert!((r.value("bphi").unwrap() - 0.25).abs() < 1e-4);
        assert!(out.row("d0:f0:p2:n2").unwrap().get("ratio_order").is_some());
        assert!(out.summary().all_pass(), "{:#?}", out.rows);
    }
}
