use std::f64::consts::{PI, TAU};
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate_1d, Interval, QuadratureSpec};
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Catalog of curves through ∞. Each kind has a fixed parametrization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveKind {
    /// The real axis, `t ↦ t`.
    Line,
    /// Two rays from 0 with opening `απ`, by signed arc length: `t ≥ 0` on the
    /// positive axis, `t < 0` on the ray of argument `απ`.
    SectorBoundary { alpha: f64 },
    /// `t ↦ t + c·e^{it}`.
    Grating { c: f64 },
    /// `t ↦ t + i·a·t²`.
    Parabola { a: f64 },
    /// `t ↦ t + i·(t/4)·sin(depth·ln|t|)`, a Lipschitz graph whose
    /// oscillation accumulates at the origin.
    Wiggle { depth: u32 },
    /// Finite polygonal arc parametrized by arc length on `[0, L]`.
    Polyline { points: Vec<Complex64> },
}

/// Affine map `z ↦ a·z + b` applied after the catalog parametrization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub a: Complex64,
    pub b: Complex64,
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity {
        a: Complex64 { re: 1.0, im: 0.0 },
        b: Complex64 { re: 0.0, im: 0.0 },
    };

    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if !(a.norm() > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::invalid(format!("similarity needs finite a ≠ 0, got a = {a}")));
        }
        Ok(Self { a, b })
    }

    #[inline]
    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }

    #[inline]
    pub fn invert(&self, w: Complex64) -> Complex64 {
        (w - self.b) / self.a
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Similarity) -> Similarity {
        Similarity {
            a: self.a * inner.a,
            b: self.a * inner.b + self.b,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// Finite parameter window standing in for an unbounded curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveWindow {
    pub t_lo: f64,
    pub t_hi: f64,
    pub sample_count: usize,
}

impl CurveWindow {
    pub fn new(t_lo: f64, t_hi: f64, sample_count: usize) -> Result<Self> {
        if !(t_lo.is_finite() && t_hi.is_finite() && t_lo < t_hi) {
            return Err(Error::invalid(format!("window needs t_lo < t_hi, got [{t_lo}, {t_hi}]")));
        }
        if sample_count < 2 {
            return Err(Error::invalid("window needs at least 2 samples"));
        }
        Ok(Self {
            t_lo,
            t_hi,
            sample_count,
        })
    }

    pub fn symmetric(half: f64, sample_count: usize) -> Result<Self> {
        Self::new(-half, half, sample_count)
    }

    pub fn width(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_lo && t <= self.t_hi
    }

    /// Same centre, `factor` times the width, samples scaled alike.
    pub fn scaled(&self, factor: f64) -> Self {
        let c = 0.5 * (self.t_lo + self.t_hi);
        let h = 0.5 * self.width() * factor;
        Self {
            t_lo: c - h,
            t_hi: c + h,
            sample_count: ((self.sample_count as f64 * factor).ceil() as usize).max(2),
        }
    }
}

/// A curve from the catalog, possibly moved by a similarity.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    kind: CurveKind,
    sim: Similarity,
    /// Cumulative arc length at the polyline vertices.
    cumulative: Vec<f64>,
}

impl Curve {
    pub fn line() -> Self {
        Self::raw(CurveKind::Line)
    }

    pub fn sector(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::invalid(format!("sector opening alpha must lie in (0, 2), got {alpha}")));
        }
        Ok(Self::raw(CurveKind::SectorBoundary { alpha }))
    }

    pub fn grating(c: f64) -> Result<Self> {
        if !(c >= 0.0 && c < 1.0) {
            return Err(Error::invalid(format!("grating amplitude c must lie in [0, 1), got {c}")));
        }
        Ok(Self::raw(CurveKind::Grating { c }))
    }

    pub fn parabola(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid(format!("parabola coefficient a must be positive, got {a}")));
        }
        Ok(Self::raw(CurveKind::Parabola { a }))
    }

    pub fn wiggle(depth: u32) -> Result<Self> {
        if depth == 0 || depth > 64 {
            return Err(Error::invalid(format!("wiggle depth must lie in 1..=64, got {depth}")));
        }
        Ok(Self::raw(CurveKind::Wiggle { depth }))
    }

    pub fn polyline(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::MalformedCurve("polyline needs at least two points".into()));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::MalformedCurve(format!("non-finite polyline vertex {p}")));
        }
        let mut cumulative = vec![0.0];
        for w in points.windows(2) {
            let len = (w[1] - w[0]).norm();
            if len < 1e-14 {
                return Err(Error::MalformedCurve(format!("repeated polyline vertex {}", w[0])));
            }
            cumulative.push(cumulative.last().unwrap() + len);
        }
        check_simple(&points, &cumulative)?;
        Ok(Self {
            kind: CurveKind::Polyline { points },
            sim: Similarity::IDENTITY,
            cumulative,
        })
    }

    /// Read a polyline from a two-column CSV (`re, im`); a header row is
    /// optional.
    pub fn polyline_from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|source| Error::Csv {
                path: path.into(),
                source,
            })?;
        let mut points = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|source| Error::Csv {
                path: path.into(),
                source,
            })?;
            if rec.len() < 2 {
                return Err(Error::Parse(format!("{}: row {} has fewer than two columns", path.display(), i + 1)));
            }
            match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
                (Ok(re), Ok(im)) => points.push(Complex64::new(re, im)),
                _ if i == 0 => continue,
                _ => {
                    return Err(Error::Parse(format!(
                        "{}: row {} is not numeric: {:?}",
                        path.display(),
                        i + 1,
                        rec
                    )))
                }
            }
        }
        Self::polyline(points)
    }

    fn raw(kind: CurveKind) -> Self {
        Self {
            kind,
            sim: Similarity::IDENTITY,
            cumulative: Vec::new(),
        }
    }

    /// The image of this curve under `z ↦ a·z + b`, same parametrization.
    pub fn transformed(&self, a: Complex64, b: Complex64) -> Result<Self> {
        let outer = Similarity::new(a, b)?;
        Ok(Self {
            sim: outer.compose(&self.sim),
            ..self.clone()
        })
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn similarity(&self) -> &Similarity {
        &self.sim
    }

    /// The same catalog curve without its similarity.
    pub fn base(&self) -> Self {
        Self {
            sim: Similarity::IDENTITY,
            ..self.clone()
        }
    }

    /// Short identifier such as `sector:alpha=0.5`.
    pub fn label(&self) -> String {
        let base = match &self.kind {
            CurveKind::Line => "halfplane".to_string(),
            CurveKind::SectorBoundary { alpha } => format!("sector:alpha={alpha}"),
            CurveKind::Grating { c } => format!("grating:c={c}"),
            CurveKind::Parabola { a } => format!("parabola:a={a}"),
            CurveKind::Wiggle { depth } => format!("wiggle:depth={depth}"),
            CurveKind::Polyline { points } => format!("polyline:n={}", points.len()),
        };
        if self.sim.is_identity() {
            base
        } else {
            format!("{base}@({},{})", self.sim.a, self.sim.b)
        }
    }

    /// Whether the curve passes through ∞ (every kind except polylines).
    pub fn is_unbounded(&self) -> bool {
        !matches!(self.kind, CurveKind::Polyline { .. })
    }

    /// Parameter domain.
    pub fn param_range(&self) -> (f64, f64) {
        match &self.kind {
            CurveKind::Polyline { .. } => (0.0, *self.cumulative.last().unwrap()),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Parameters where the curve has a corner or a non-smooth point.
    pub fn corners(&self) -> Vec<f64> {
        match &self.kind {
            CurveKind::SectorBoundary { alpha } if *alpha != 1.0 => vec![0.0],
            CurveKind::Wiggle { .. } => vec![0.0],
            CurveKind::Polyline { .. } => {
                let n = self.cumulative.len();
                self.cumulative[1..n - 1].to_vec()
            }
            _ => Vec::new(),
        }
    }

    pub fn default_window(&self) -> CurveWindow {
        let (lo, hi) = match &self.kind {
            CurveKind::Grating { .. } => (-4.0 * PI, 4.0 * PI),
            CurveKind::Wiggle { .. } => (-1.0, 1.0),
            CurveKind::Polyline { .. } => self.param_range(),
            _ => (-10.0, 10.0),
        };
        CurveWindow {
            t_lo: lo,
            t_hi: hi,
            sample_count: 401,
        }
    }

    /// Point of the base (untransformed) curve.
    pub(crate) fn base_eval(&self, t: f64) -> Complex64 {
        match &self.kind {
            CurveKind::Line => Complex64::new(t, 0.0),
            CurveKind::SectorBoundary { alpha } => {
                if t >= 0.0 {
                    Complex64::new(t, 0.0)
                } else {
                    Complex64::from_polar(-t, alpha * PI)
                }
            }
            CurveKind::Grating { c } => Complex64::new(t + c * t.cos(), c * t.sin()),
            CurveKind::Parabola { a } => Complex64::new(t, a * t * t),
            CurveKind::Wiggle { depth } => {
                if t == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    let l = *depth as f64 * t.abs().ln();
                    Complex64::new(t, 0.25 * t * l.sin())
                }
            }
            CurveKind::Polyline { points } => {
                let (i, s) = self.segment(t);
                let d = points[i + 1] - points[i];
                points[i] + d * (s / d.norm())
            }
        }
    }

    pub(crate) fn base_deriv(&self, t: f64) -> Complex64 {
        match &self.kind {
            CurveKind::Line => Complex64::new(1.0, 0.0),
            CurveKind::SectorBoundary { alpha } => {
                if t >= 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    -Complex64::from_polar(1.0, alpha * PI)
                }
            }
            CurveKind::Grating { c } => Complex64::new(1.0, 0.0) + I * c * Complex64::from_polar(1.0, t),
            CurveKind::Parabola { a } => Complex64::new(1.0, 2.0 * a * t),
            CurveKind::Wiggle { depth } => {
                if t == 0.0 {
                    return Complex64::new(1.0, 0.0);
                }
                let d = *depth as f64;
                let l = d * t.abs().ln();
                Complex64::new(1.0, 0.25 * (l.sin() + d * l.cos()))
            }
            CurveKind::Polyline { points } => {
                let (i, _) = self.segment(t);
                let d = points[i + 1] - points[i];
                d / d.norm()
            }
        }
    }

    pub(crate) fn base_deriv2(&self, t: f64) -> Complex64 {
        match &self.kind {
            CurveKind::Grating { c } => -c * Complex64::from_polar(1.0, t),
            CurveKind::Parabola { a } => Complex64::new(0.0, 2.0 * a),
            CurveKind::Wiggle { depth } => {
                if t == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let d = *depth as f64;
                let l = d * t.abs().ln();
                Complex64::new(0.0, 0.25 * (d * l.cos() - d * d * l.sin()) / t)
            }
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `γ(s) − γ(t)` of the base curve without catastrophic cancellation.
    pub(crate) fn base_chord(&self, t: f64, s: f64) -> Complex64 {
        let h = s - t;
        match &self.kind {
            CurveKind::Line => Complex64::new(h, 0.0),
            CurveKind::SectorBoundary { alpha } if (t >= 0.0) == (s >= 0.0) => {
                if t >= 0.0 {
                    Complex64::new(h, 0.0)
                } else {
                    -Complex64::from_polar(h, alpha * PI)
                }
            }
            CurveKind::Grating { c } => {
                let m = Complex64::from_polar(1.0, 0.5 * (s + t));
                Complex64::new(h, 0.0) + 2.0 * c * (0.5 * h).sin() * I * m
            }
            CurveKind::Parabola { a } => Complex64::new(h, a * h * (s + t)),
            _ => self.base_eval(s) - self.base_eval(t),
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.sim.apply(self.base_eval(t))
    }

    /// Tangent `γ′(t)`; one-sided from the right at corners.
    pub fn deriv(&self, t: f64) -> Complex64 {
        self.sim.a * self.base_deriv(t)
    }

    pub fn deriv2(&self, t: f64) -> Complex64 {
        self.sim.a * self.base_deriv2(t)
    }

    /// `γ(s) − γ(t)`, accurate for nearby parameters.
    pub fn chord(&self, t: f64, s: f64) -> Complex64 {
        self.sim.a * self.base_chord(t, s)
    }

    /// Upper bound of `|γ′|` on `[t_lo, t_hi]`.
    pub fn speed_bound(&self, t_lo: f64, t_hi: f64) -> f64 {
        let k = self.sim.a.norm();
        k * match &self.kind {
            CurveKind::Grating { c } => 1.0 + c,
            CurveKind::Parabola { a } => (1.0 + 4.0 * a * a * t_lo.abs().max(t_hi.abs()).powi(2)).sqrt(),
            CurveKind::Wiggle { depth } => {
                let d = *depth as f64;
                (1.0 + (0.25 * (1.0 + d)).powi(2)).sqrt()
            }
            _ => 1.0,
        }
    }

    /// Lower bound of `|γ′|` over the whole curve.
    pub fn speed_floor(&self) -> f64 {
        let k = self.sim.a.norm();
        k * match &self.kind {
            CurveKind::Grating { c } => 1.0 - c,
            _ => 1.0,
        }
    }

    fn segment(&self, t: f64) -> (usize, f64) {
        let n = self.cumulative.len();
        let t = t.clamp(0.0, self.cumulative[n - 1]);
        let i = match self.cumulative.binary_search_by(|c| c.total_cmp(&t)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        (i, t - self.cumulative[i])
    }

    /// Arc length `∫_{t1}^{t2} |γ′(t)| dt` with absolute error at most `tol`.
    /// Tolerances below twelve significant digits of the length are raised to it.
    pub fn arc_length(&self, t1: f64, t2: f64, tol: f64) -> Result<f64> {
        if !(t1 <= t2) {
            return Err(Error::invalid(format!("arc_length needs t1 ≤ t2, got {t1} > {t2}")));
        }
        if !(tol > 0.0) {
            return Err(Error::invalid("arc_length tolerance must be positive"));
        }
        let (lo, hi) = self.param_range();
        if !(t1.is_finite() && t2.is_finite()) || t1 < lo || t2 > hi {
            return Err(Error::invalid(format!("arc_length window [{t1}, {t2}] outside the curve")));
        }
        let k = self.sim.a.norm();
        let base = match &self.kind {
            CurveKind::Line | CurveKind::SectorBoundary { .. } | CurveKind::Polyline { .. } => t2 - t1,
            CurveKind::Parabola { a } => {
                let f = |t: f64| {
                    let u = 2.0 * a * t;
                    0.5 * t * (1.0 + u * u).sqrt() + u.asinh() / (4.0 * a)
                };
                f(t2) - f(t1)
            }
            CurveKind::Grating { c } => grating_length(*c, t1, t2, tol / k)?,
            CurveKind::Wiggle { depth } => wiggle_length(*depth, t1, t2, tol / k)?,
        };
        Ok(k * base)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn check_simple(points: &[Complex64], cumulative: &[f64]) -> Result<()> {
    let n = points.len() - 1;
    for i in 0..n {
        for j in i + 2..n {
            if let Some((s, u)) = segments_meet(points[i], points[i + 1], points[j], points[j + 1]) {
                return Err(Error::InjectivityViolation {
                    t1: cumulative[i] + s * (cumulative[i + 1] - cumulative[i]),
                    t2: cumulative[j] + u * (cumulative[j + 1] - cumulative[j]),
                });
            }
        }
    }
    Ok(())
}

fn segments_meet(a0: Complex64, a1: Complex64, b0: Complex64, b1: Complex64) -> Option<(f64, f64)> {
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    let (r, s) = (a1 - a0, b1 - b0);
    let den = cross(r, s);
    let q = b0 - a0;
    if den.abs() < 1e-300 {
        if cross(q, r).abs() > 1e-14 * r.norm() * q.norm().max(1.0) {
            return None;
        }
        // collinear: overlap test along r
        let rr = r.norm_sqr();
        let t0 = (q.re * r.re + q.im * r.im) / rr;
        let t1 = t0 + (s.re * r.re + s.im * r.im) / rr;
        let (lo, hi) = (t0.min(t1), t0.max(t1));
        if hi >= 0.0 && lo <= 1.0 {
            return Some((lo.max(0.0), 0.0));
        }
        return None;
    }
    let t = cross(q, s) / den;
    let u = cross(q, r) / den;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some((t, u))
    } else {
        None
    }
}

fn length_spec(tol: f64) -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(1e-13).with_abs_tol(tol.max(1e-15))
}

fn checked(r: crate::quadrature::IntegralValue, tol: f64) -> Result<f64> {
    if !r.value.is_finite() {
        return Err(Error::MalformedCurve("non-finite tangent while measuring arc length".into()));
    }
    // twelve significant digits is the floor for long windows
    let tol = tol.max(1e-12 * r.value.abs());
    if r.error_estimate > tol {
        return Err(Error::Quadrature(format!(
            "arc length to {tol:e}: estimate {:e}",
            r.error_estimate
        )));
    }
    Ok(r.value)
}

fn grating_speed(c: f64, t: f64) -> f64 {
    (1.0 + c * c - 2.0 * c * t.sin()).max(0.0).sqrt()
}

/// Length of one period of the grating.
pub(crate) fn grating_period_length(c: f64) -> f64 {
    if c == 0.0 {
        return TAU;
    }
    let iv = Interval::new(0.0, TAU).with_breakpoints([0.5 * PI, PI, 1.5 * PI]);
    integrate_1d(|t| grating_speed(c, t), &iv, &length_spec(1e-15)).value
}

fn grating_length(c: f64, t1: f64, t2: f64, tol: f64) -> Result<f64> {
    if c == 0.0 {
        return Ok(t2 - t1);
    }
    let periods = ((t2 - t1) / TAU).floor();
    let rest_lo = t1 + periods * TAU;
    let whole = if periods > 0.0 {
        periods * grating_period_length(c)
    } else {
        0.0
    };
    let iv = Interval::new(rest_lo, t2);
    let part = checked(integrate_1d(|t| grating_speed(c, t), &iv, &length_spec(0.5 * tol)), tol)?;
    Ok(whole + part)
}

fn wiggle_speed(d: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let l = d * t.abs().ln();
    (1.0 + (0.25 * (l.sin() + d * l.cos())).powi(2)).sqrt()
}

/// Arc length of the wiggle from 0 to `b > 0`, via the exact
/// self-similarity `γ(λt) = λγ(t)` with `λ = e^{2π/d}`.
fn wiggle_from_zero(d: f64, b: f64, tol: f64) -> Result<f64> {
    if b == 0.0 {
        return Ok(0.0);
    }
    let lambda = (TAU / d).exp();
    let one = wiggle_direct(d, b / lambda, b, tol * (lambda - 1.0) / lambda)?;
    Ok(one * lambda / (lambda - 1.0))
}

fn wiggle_direct(d: f64, t1: f64, t2: f64, tol: f64) -> Result<f64> {
    // t1, t2 > 0 here; breakpoints at every half-period of the oscillation in ln t.
    let step = (PI / d).exp();
    let mut marks = Vec::new();
    let mut m = t1 * step;
    while m < t2 && marks.len() < 10_000 {
        marks.push(m);
        m *= step;
    }
    let iv = Interval::new(t1, t2).with_breakpoints(marks);
    checked(integrate_1d(|t| wiggle_speed(d, t), &iv, &length_spec(0.5 * tol)), tol)
}

fn wiggle_length(depth: u32, t1: f64, t2: f64, tol: f64) -> Result<f64> {
    let d = depth as f64;
    // speed depends on |t| only, so negative parameters mirror positive ones
    if t1 >= 0.0 {
        if t1 == 0.0 || t2 / t1 > 1e6 {
            Ok(wiggle_from_zero(d, t2, 0.5 * tol)? - wiggle_from_zero(d, t1, 0.5 * tol)?)
        } else {
            wiggle_direct(d, t1, t2, tol)
        }
    } else if t2 <= 0.0 {
        wiggle_length(depth, -t2, -t1, tol)
    } else {
        Ok(wiggle_from_zero(d, -t1, 0.5 * tol)? + wiggle_from_zero(d, t2, 0.5 * tol)?)
    }
}
