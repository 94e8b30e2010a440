use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{parse_complex, HarmonicTestFunction};
use crate::conformal::Domain;
use crate::geometry::{Curve, CurveWindow};
use crate::quadrature::QuadratureSpec;
use crate::{Error, Result};

/// Which experiment a config drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Equivalence,
    Characterization,
    Diagnostics,
    Tail,
    Sewing,
    Carleson,
    Energy,
    BoundaryNorm,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Equivalence => "equivalence",
            Self::Characterization => "characterization",
            Self::Diagnostics => "diagnostics",
            Self::Tail => "tail",
            Self::Sewing => "sewing",
            Self::Carleson => "carleson",
            Self::Energy => "energy",
            Self::BoundaryNorm => "boundary_norm",
        }
    }

    fn needs_domain(self) -> bool {
        !matches!(self, Self::Diagnostics | Self::Carleson)
    }

    fn needs_functions(self) -> bool {
        matches!(self, Self::Equivalence | Self::Energy | Self::BoundaryNorm | Self::Carleson)
    }
}

/// A catalog domain, optionally moved by `z ↦ a·z + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Halfplane {
        #[serde(default)]
        transform: Option<TransformSpec>,
    },
    Sector {
        alpha: f64,
        #[serde(default)]
        transform: Option<TransformSpec>,
    },
    Grating {
        c: f64,
        #[serde(default)]
        transform: Option<TransformSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSpec {
    pub a: String,
    pub b: String,
}

impl DomainSpec {
    /// The name of the sweepable parameter, if any.
    pub fn parameter_name(&self) -> Option<&'static str> {
        match self {
            Self::Halfplane { .. } => None,
            Self::Sector { .. } => Some("alpha"),
            Self::Grating { .. } => Some("c"),
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match self {
            Self::Halfplane { .. } => None,
            Self::Sector { alpha, .. } => Some(*alpha),
            Self::Grating { c, .. } => Some(*c),
        }
    }

    /// The same spec with its parameter replaced.
    pub fn with_parameter(&self, v: f64) -> Self {
        let mut s = self.clone();
        match &mut s {
            Self::Halfplane { .. } => {}
            Self::Sector { alpha, .. } => *alpha = v,
            Self::Grating { c, .. } => *c = v,
        }
        s
    }

    fn transform(&self) -> Option<&TransformSpec> {
        match self {
            Self::Halfplane { transform } | Self::Sector { transform, .. } | Self::Grating { transform, .. } => {
                transform.as_ref()
            }
        }
    }

    fn check_parameter(&self, v: f64, path: &str, errs: &mut Vec<String>) {
        match self {
            Self::Halfplane { .. } => {}
            Self::Sector { .. } if !(v > 0.0 && v < 2.0) => {
                errs.push(format!("{path}: sector opening alpha must lie in (0, 2), got {v}"))
            }
            Self::Grating { .. } if !(0.0..1.0).contains(&v) => {
                errs.push(format!("{path}: grating amplitude c must lie in [0, 1), got {v}"))
            }
            _ => {}
        }
    }

    pub fn build(&self) -> Result<Domain> {
        let d = match self {
            Self::Halfplane { .. } => Domain::halfplane(),
            Self::Sector { alpha, .. } => Domain::sector(*alpha)?,
            Self::Grating { c, .. } => Domain::grating(*c)?,
        };
        match self.transform() {
            Some(t) => d.transformed(parse_complex(&t.a)?, parse_complex(&t.b)?),
            None => Ok(d),
        }
    }
}

/// A curve for the diagnostics sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Line,
    Sector { alpha: f64 },
    Grating { c: f64 },
    Parabola { a: f64 },
    Wiggle { depth: u32 },
    Polyline {
        #[serde(default)]
        points: Vec<[f64; 2]>,
        #[serde(default)]
        csv: Option<PathBuf>,
    },
}

impl CurveSpec {
    pub fn build(&self, base_dir: Option<&Path>) -> Result<Curve> {
        match self {
            Self::Line => Ok(Curve::line()),
            Self::Sector { alpha } => Curve::sector(*alpha),
            Self::Grating { c } => Curve::grating(*c),
            Self::Parabola { a } => Curve::parabola(*a),
            Self::Wiggle { depth } => Curve::wiggle(*depth),
            Self::Polyline { points, csv } => match csv {
                Some(p) => {
                    let p = match base_dir {
                        Some(d) if p.is_relative() => d.join(p),
                        _ => p.clone(),
                    };
                    Curve::polyline_from_csv(p)
                }
                None => Curve::polyline(points.iter().map(|&[x, y]| Complex64::new(x, y)).collect()),
            },
        }
    }
}

/// Values for the domain parameter (`c` of a grating, `alpha` of a sector).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub values: Vec<f64>,
}

/// Probe points from abscissae `x` and `count` log-spaced heights `y`: the
/// tail run uses `w = φ(x + iy) ∈ Ω⁺`, the characterization run the
/// exterior points of [`crate::harness::exterior_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeSpec {
    pub x: Vec<f64>,
    pub y_lo: f64,
    pub y_hi: f64,
    pub count: usize,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        Self {
            x: vec![0.0],
            y_lo: 0.5,
            y_hi: 50.0,
            count: 5,
        }
    }
}

impl ProbeSpec {
    /// All `(x, y)` pairs, `x` outer.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let ys = if self.count == 1 {
            vec![self.y_lo]
        } else {
            crate::geometry::log_space(self.y_lo, self.y_hi, self.count)
        };
        self.x.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect()
    }
}

/// Dyadic box family and Lusin intervals for the Carleson run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CarlesonSpec {
    pub center: f64,
    pub k_min: i32,
    pub k_max: i32,
    pub refine: u32,
    /// Allowed relative change of the box sup under one refinement.
    pub stability: f64,
    pub intervals: Vec<[f64; 2]>,
}

impl Default for CarlesonSpec {
    fn default() -> Self {
        Self {
            center: 0.0,
            k_min: -4,
            k_max: 4,
            refine: 0,
            stability: 0.05,
            intervals: vec![[-0.5, 0.5], [0.0, 1.0], [-2.0, 2.0], [3.0, 4.0], [-0.1, 0.1]],
        }
    }
}

/// Sampling for the sewing run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SewingSpec {
    pub fit_lo: f64,
    pub fit_hi: f64,
    pub fit_points: usize,
    pub window: f64,
    pub window_points: usize,
    pub scale_lo: f64,
    pub scale_hi: f64,
    pub scale_points: usize,
    /// Allowed error of the fitted exponent where a closed form exists.
    pub exponent_tol: f64,
}

impl Default for SewingSpec {
    fn default() -> Self {
        Self {
            fit_lo: 1e-2,
            fit_hi: 1e2,
            fit_points: 17,
            window: 4.0,
            window_points: 9,
            scale_lo: 1e-2,
            scale_hi: 1e2,
            scale_points: 17,
            exponent_tol: 1e-3,
        }
    }
}

/// Output location and formats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub formats: Vec<ReportFormat>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: None,
            formats: vec![ReportFormat::Csv, ReportFormat::Json, ReportFormat::Svg],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Json,
    Svg,
}

/// A closed bracket `[lo, hi]` for a reported column.
pub type Bracket = [f64; 2];

/// Everything an experiment run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub domain: Option<DomainSpec>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub curves: Vec<CurveSpec>,
    /// Window half-widths (in curve parameter) for diagnostics.
    #[serde(default = "default_windows")]
    pub windows: Vec<f64>,
    #[serde(default = "default_window_samples")]
    pub window_samples: usize,
    #[serde(default)]
    pub functions: Vec<String>,
    #[serde(default = "default_p")]
    pub p: Vec<f64>,
    #[serde(default = "default_n")]
    pub n: Vec<usize>,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub probes: ProbeSpec,
    #[serde(default)]
    pub carleson: CarlesonSpec,
    #[serde(default)]
    pub sewing: SewingSpec,
    /// Compute boundary norms (the slowest columns) where they apply.
    #[serde(default = "default_true")]
    pub norms: bool,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    /// Quadrature for boundary norms; defaults to `quadrature`.
    #[serde(default)]
    pub norm_quadrature: Option<QuadratureSpec>,
    /// Brackets keyed by column name; columns without one are not flagged.
    #[serde(default)]
    pub brackets: BTreeMap<String, Bracket>,
    /// Largest allowed `max/min` of each ratio family across the sweep.
    #[serde(default = "default_spread")]
    pub max_spread: f64,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_windows() -> Vec<f64> {
    vec![10.0]
}

fn default_window_samples() -> usize {
    401
}

fn default_p() -> Vec<f64> {
    vec![2.0]
}

fn default_n() -> Vec<usize> {
    vec![1]
}

fn default_eps() -> Vec<f64> {
    vec![crate::analysis::DEFAULT_EPS]
}

fn default_true() -> bool {
    true
}

fn default_spread() -> f64 {
    100.0
}

impl ExperimentConfig {
    /// A config with defaults for `kind`.
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            experiment: kind,
            domain: None,
            sweep: None,
            curves: Vec::new(),
            windows: default_windows(),
            window_samples: default_window_samples(),
            functions: Vec::new(),
            p: default_p(),
            n: default_n(),
            eps: default_eps(),
            probes: ProbeSpec::default(),
            carleson: CarlesonSpec::default(),
            sewing: SewingSpec::default(),
            norms: true,
            quadrature: QuadratureSpec::default(),
            norm_quadrature: None,
            brackets: BTreeMap::new(),
            max_spread: default_spread(),
            output: OutputSpec::default(),
        }
    }

    pub fn norm_quad(&self) -> QuadratureSpec {
        self.norm_quadrature.unwrap_or(self.quadrature)
    }

    /// The swept domain specs in sweep order (a single one without sweep).
    pub fn domain_specs(&self) -> Vec<DomainSpec> {
        let Some(d) = &self.domain else {
            return Vec::new();
        };
        match &self.sweep {
            Some(s) => s.values.iter().map(|&v| d.with_parameter(v)).collect(),
            None => vec![d.clone()],
        }
    }

    pub fn parsed_functions(&self) -> Result<Vec<HarmonicTestFunction>> {
        self.functions.iter().map(|s| s.parse()).collect()
    }

    /// Every violation of the schema's value rules, path-addressed.
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let mut errs = Vec::new();
        let kind = self.experiment;
        match &self.domain {
            None if kind.needs_domain() => errs.push(format!("domain: required for {}", kind.name())),
            Some(d) => {
                if let Some(v) = d.parameter() {
                    let path = format!("domain.{}", d.parameter_name().unwrap_or("parameter"));
                    d.check_parameter(v, &path, &mut errs);
                }
                if let Some(t) = d.transform() {
                    match (parse_complex(&t.a), parse_complex(&t.b)) {
                        (Ok(a), Ok(_)) if a.norm() == 0.0 => {
                            errs.push("domain.transform.a: scale factor must be nonzero".into())
                        }
                        (Ok(_), Ok(_)) => {}
                        (a, b) => {
                            if let Err(e) = a {
                                errs.push(format!("domain.transform.a: {e}"));
                            }
                            if let Err(e) = b {
                                errs.push(format!("domain.transform.b: {e}"));
                            }
                        }
                    }
                }
                if let Some(s) = &self.sweep {
                    if s.values.is_empty() {
                        errs.push("sweep.values: must be non-empty".into());
                    }
                    if d.parameter_name().is_none() {
                        errs.push("sweep: the halfplane has no parameter to sweep".into());
                    }
                    for (i, &v) in s.values.iter().enumerate() {
                        d.check_parameter(v, &format!("sweep.values[{i}]"), &mut errs);
                    }
                }
            }
            None => {}
        }
        if kind == ExperimentKind::Diagnostics {
            if self.curves.is_empty() {
                errs.push("curves: diagnostics needs at least one curve".into());
            }
            for (i, c) in self.curves.iter().enumerate() {
                match c {
                    CurveSpec::Sector { alpha } if !(*alpha > 0.0 && *alpha < 2.0) => {
                        errs.push(format!("curves[{i}].alpha: must lie in (0, 2), got {alpha}"))
                    }
                    CurveSpec::Grating { c } if !(0.0..1.0).contains(c) => {
                        errs.push(format!("curves[{i}].c: must lie in [0, 1), got {c}"))
                    }
                    CurveSpec::Parabola { a } if !(*a > 0.0 && a.is_finite()) => {
                        errs.push(format!("curves[{i}].a: must be positive, got {a}"))
                    }
                    CurveSpec::Wiggle { depth } if *depth == 0 => {
                        errs.push(format!("curves[{i}].depth: must be at least 1"))
                    }
                    CurveSpec::Polyline { points, csv } if points.len() < 2 && csv.is_none() => {
                        errs.push(format!("curves[{i}].points: a polyline needs two points or a csv path"))
                    }
                    _ => {}
                }
            }
            if self.windows.is_empty() {
                errs.push("windows: must be non-empty".into());
            }
            for (i, &w) in self.windows.iter().enumerate() {
                if !(w > 0.0 && w.is_finite()) {
                    errs.push(format!("windows[{i}]: half-width must be positive, got {w}"));
                }
            }
            if self.window_samples < 3 {
                errs.push(format!("window_samples: need at least 3, got {}", self.window_samples));
            }
        }
        if kind.needs_functions() && self.functions.is_empty() {
            errs.push(format!("functions: {} needs at least one test function", kind.name()));
        }
        for (i, f) in self.functions.iter().enumerate() {
            if let Err(e) = f.parse::<HarmonicTestFunction>() {
                errs.push(format!("functions[{i}]: {e}"));
            }
        }
        if self.p.is_empty() {
            errs.push("p: must be non-empty".into());
        }
        for (i, &p) in self.p.iter().enumerate() {
            if !(p > 1.0 && p.is_finite()) {
                let path = if self.p.len() == 1 { "p".to_string() } else { format!("p[{i}]") };
                errs.push(format!("{path}: Besov exponent must lie in (1, ∞), got {p}"));
            }
        }
        if self.n.is_empty() {
            errs.push("n: must be non-empty".into());
        }
        for (i, &n) in self.n.iter().enumerate() {
            if !(1..=3).contains(&n) {
                let path = if self.n.len() == 1 { "n".to_string() } else { format!("n[{i}]") };
                errs.push(format!("{path}: order must be 1, 2 or 3, got {n}"));
            }
        }
        for (i, &e) in self.eps.iter().enumerate() {
            if !(e > 0.0 && e < 2.0) {
                errs.push(format!("eps[{i}]: must lie in (0, 2), got {e}"));
            }
        }
        if matches!(kind, ExperimentKind::Characterization | ExperimentKind::Tail) {
            let pr = &self.probes;
            if pr.x.is_empty() {
                errs.push("probes.x: must be non-empty".into());
            }
            if !(pr.y_lo > 0.0 && pr.y_hi >= pr.y_lo && pr.y_hi.is_finite()) {
                errs.push(format!("probes.y_lo/y_hi: need 0 < lo ≤ hi < ∞, got [{}, {}]", pr.y_lo, pr.y_hi));
            }
            if pr.count == 0 {
                errs.push("probes.count: must be positive".into());
            }
        }
        if kind == ExperimentKind::Carleson {
            let c = &self.carleson;
            if c.k_min > c.k_max {
                errs.push(format!("carleson.k_min: exceeds k_max ({} > {})", c.k_min, c.k_max));
            }
            if c.refine > 6 {
                errs.push(format!("carleson.refine: at most 6, got {}", c.refine));
            }
            if !(c.stability > 0.0) {
                errs.push("carleson.stability: must be positive".into());
            }
            for (i, [a, b]) in c.intervals.iter().enumerate() {
                if !(a < b) {
                    errs.push(format!("carleson.intervals[{i}]: need a < b, got [{a}, {b}]"));
                }
            }
        }
        if kind == ExperimentKind::Sewing {
            let s = &self.sewing;
            if !(s.fit_lo > 0.0 && s.fit_hi > s.fit_lo && s.fit_points >= 2) {
                errs.push("sewing.fit_lo/fit_hi/fit_points: need 0 < lo < hi and at least 2 points".into());
            }
            if !(s.scale_lo > 0.0 && s.scale_hi >= s.scale_lo && s.scale_points >= 1) {
                errs.push("sewing.scale_lo/scale_hi/scale_points: need 0 < lo ≤ hi and a point".into());
            }
            if !(s.window > 0.0 && s.window_points >= 2) {
                errs.push("sewing.window/window_points: need a positive window and at least 2 points".into());
            }
        }
        for (name, [lo, hi]) in &self.brackets {
            if !(lo <= hi) {
                errs.push(format!("brackets.{name}: need lo ≤ hi, got [{lo}, {hi}]"));
            }
        }
        if !(self.max_spread >= 1.0) {
            errs.push(format!("max_spread: must be at least 1, got {}", self.max_spread));
        }
        if let Err(v) = self.quadrature.validate() {
            errs.extend(v.into_iter().map(|m| format!("quadrature: {m}")));
        }
        if let Some(q) = &self.norm_quadrature {
            if let Err(v) = q.validate() {
                errs.extend(v.into_iter().map(|m| format!("norm_quadrature: {m}")));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    /// Window for diagnostics at half-width `half`.
    pub fn window(&self, half: f64) -> Result<CurveWindow> {
        CurveWindow::symmetric(half, self.window_samples)
    }
}

/// Parses and validates a JSON config.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(vec![format!("schema: {e}")]))?;
    cfg.validate().map_err(Error::Config)?;
    Ok(cfg)
}

/// [`parse_config`] on a file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
