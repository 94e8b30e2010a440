use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::features::{curve_features, pullback_features, Feature};
use super::harmonic::HarmonicTestFunction;
use crate::conformal::{Domain, Side};
use crate::geometry::{Curve, CurveKind, CurveWindow};
use crate::quadrature::{integrate_1d, integrate_pair_offset, IntegralValue, Interval, QuadratureSpec};
use crate::{Error, Result};

type Formula = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Rule {
    Trace(HarmonicTestFunction),
    Formula { label: String, f: Formula },
    Table { t: Vec<f64>, v: Vec<Complex64> },
}

/// A function on Γ (or ℝ): the trace of a harmonic test function, an
/// explicit formula in the point, or a table of samples in the curve
/// parameter (linear in between, zero outside the table).
#[derive(Clone)]
pub struct BoundaryFunction {
    rule: Rule,
}

impl fmt::Debug for BoundaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoundaryFunction({})", self.origin())
    }
}

/// Which normalization a boundary norm uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `∫∫ |f(w) − f(z)|^p/|w − z|²`, no prefactor.
    Plain,
    /// `(1/4π²)∫∫ |f∘φ(x) − f∘φ(y)|^p/|x − y|² dx dy`.
    Pullback,
}

/// The `p`-th power of a boundary Besov norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    pub error_estimate: f64,
    pub p: f64,
    pub normalization: Normalization,
}

impl BoundaryFunction {
    pub fn trace(u: HarmonicTestFunction) -> Self {
        Self { rule: Rule::Trace(u) }
    }

    pub fn formula<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            rule: Rule::Formula {
                label: label.into(),
                f: Arc::new(f),
            },
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::formula(format!("constant {c}"), move |_| c)
    }

    /// Samples `(t, f)` with strictly increasing finite `t`.
    pub fn table(samples: Vec<(f64, Complex64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("a sample table needs at least two entries"));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) || samples.iter().any(|s| !s.0.is_finite()) {
            return Err(Error::invalid("sample parameters must be finite and strictly increasing"));
        }
        if samples.iter().any(|s| !(s.1.re.is_finite() && s.1.im.is_finite())) {
            return Err(Error::invalid("sample values must be finite"));
        }
        let (t, v) = samples.into_iter().unzip();
        Ok(Self { rule: Rule::Table { t, v } })
    }

    pub fn origin(&self) -> String {
        match &self.rule {
            Rule::Trace(u) => format!("trace of {u}"),
            Rule::Formula { label, .. } => format!("formula {label}"),
            Rule::Table { t, .. } => format!("table of {} samples", t.len()),
        }
    }

    pub fn harmonic(&self) -> Option<&HarmonicTestFunction> {
        match &self.rule {
            Rule::Trace(u) => Some(u),
            _ => None,
        }
    }

    /// `f` at the curve point `z = γ(t)`.
    pub fn eval(&self, t: f64, z: Complex64) -> Complex64 {
        match &self.rule {
            Rule::Trace(u) => u.value_unchecked(z),
            Rule::Formula { f, .. } => f(z),
            Rule::Table { t: ts, v } => {
                let n = ts.len();
                if !(t >= ts[0] && t <= ts[n - 1]) {
                    return Complex64::new(0.0, 0.0);
                }
                let i = ts.partition_point(|&s| s <= t).clamp(1, n - 1);
                let s = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
                v[i - 1] * (1.0 - s) + v[i] * s
            }
        }
    }

    /// `|f(z₁) − f(z₂)|` given `d = z₁ − z₂` computed without cancellation;
    /// exact divided differences are used for traces.
    pub fn difference(&self, t1: f64, z1: Complex64, t2: f64, z2: Complex64, d: Complex64) -> f64 {
        let Rule::Trace(u) = &self.rule else {
            return (self.eval(t1, z1) - self.eval(t2, z2)).norm();
        };
        if d == Complex64::new(0.0, 0.0) {
            return 0.0;
        }
        // f(z₁) − f(z₂) = d·Q₁ + conj(d·Q₂)
        let q = |ts: &[super::harmonic::PoleTerm]| {
            ts.iter().fold(Complex64::new(0.0, 0.0), |acc, t| {
                let (a, b) = (z1 - t.w, z2 - t.w);
                let k = t.k as i32;
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..k {
                    s += b.powi(j) * a.powi(k - 1 - j);
                }
                acc - t.coef * s / (a.powi(k) * b.powi(k))
            })
        };
        let (q1, q2) = (q(&u.holo), q(&u.anti));
        let rot = d.conj() / d;
        d.norm() * (q1 + rot * q2.conj()).norm()
    }

    /// For traces: the largest deviation between `f(φ(x))` and the
    /// Richardson limit of `u(φ(x + iε))` over `xs`.
    pub fn trace_defect(&self, domain: &Domain, side: Side, xs: &[f64]) -> Result<f64> {
        let Rule::Trace(u) = &self.rule else {
            return Err(Error::invalid("trace check needs data from a trace"));
        };
        let m = domain.map(side)?;
        let s = if side == Side::Interior { 1.0 } else { -1.0 };
        let mut worst: f64 = 0.0;
        for &x in xs {
            let t = domain.boundary_param(side, x);
            let b = m.boundary_value(x);
            let exact = self.eval(t, b);
            let v: Vec<Complex64> = [1e-3, 1e-4, 1e-5]
                .iter()
                .map(|&e| u.value(m.eval(Complex64::new(x, s * e))))
                .collect::<Result<_>>()?;
            let r1 = (v[1] * 10.0 - v[0]) / 9.0;
            let r2 = (v[2] * 10.0 - v[1]) / 9.0;
            let lim = (r2 * 100.0 - r1) / 99.0;
            worst = worst.max((lim - exact).norm() / (1.0 + exact.norm()));
        }
        Ok(worst)
    }

    /// Rejects formulas whose values at ±∞ disagree or do not settle, which
    /// makes the pair integral diverge logarithmically.
    fn check_decay(&self, at: impl Fn(f64) -> Complex64) -> Result<()> {
        if !matches!(self.rule, Rule::Formula { .. }) {
            return Ok(());
        }
        let pts = [1e6, 1e7, 1e8];
        let hi: Vec<Complex64> = pts.iter().map(|&x| at(x)).collect();
        let lo: Vec<Complex64> = pts.iter().map(|&x| at(-x)).collect();
        if hi.iter().chain(&lo).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Divergence("boundary function is not finite far out".into()));
        }
        let scale = 1.0 + hi.iter().chain(&lo).map(|z| z.norm()).fold(0.0, f64::max);
        let settle = (hi[2] - hi[1]).norm().max((lo[2] - lo[1]).norm());
        let jump = (hi[2] - lo[2]).norm();
        if settle > 1e-3 * scale || jump > 1e-3 * scale {
            return Err(Error::Divergence(format!(
                "boundary function has no common limit at ±∞ (jump {jump:.3e}, drift {settle:.3e})"
            )));
        }
        Ok(())
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("Besov exponent must satisfy 1 < p < ∞, got {p}")));
    }
    Ok(())
}

fn finish(r: IntegralValue, scale: f64, p: f64, normalization: Normalization, what: &str) -> Result<NormResult> {
    let r = r.certified(what)?;
    Ok(NormResult {
        value: scale * r.value,
        error_estimate: scale * r.error_estimate,
        p,
        normalization,
    })
}

/// Square interval for a pair integral over `(lo, hi)` marked at `features`.
fn pair_square(lo: f64, hi: f64, features: &[Feature], extra: &[f64]) -> Interval {
    let mut iv = Interval::new(lo, hi);
    if let Some(first) = features.first() {
        iv = iv.with_center(first.center).with_scale(first.width);
        iv = iv.with_breakpoints(features.iter().map(|f| f.center));
    }
    iv.with_breakpoints(extra.iter().copied())
}

/// `‖f‖^p_{B_p(ℝ)} = ∫∫_{ℝ²} |f(x) − f(y)|^p/|x − y|² dx dy`.
pub fn boundary_norm_line(f: &BoundaryFunction, p: f64, quad: &QuadratureSpec) -> Result<NormResult> {
    check_p(p)?;
    f.check_decay(|x| f.eval(x, Complex64::new(x, 0.0)))?;
    let features = match f.harmonic() {
        Some(u) => curve_features(&Curve::line(), u),
        None => Vec::new(),
    };
    let square = pair_square(f64::NEG_INFINITY, f64::INFINITY, &features, &[]);
    let h = |x: f64, v: f64| {
        let (z1, z2) = (Complex64::new(x, 0.0), Complex64::new(x + v, 0.0));
        f.difference(x, z1, x + v, z2, Complex64::new(-v, 0.0)).powf(p) / (v * v)
    };
    finish(integrate_pair_offset(h, &square, p, quad)?, 1.0, p, Normalization::Plain, "B_p(ℝ) norm")
}

/// Arc length of one base grating, tabulated as `L(t) = m·t + P(t)` with
/// `P` 2π-periodic and cubic Hermite interpolated.
struct ArcTable {
    c: f64,
    m: f64,
    p: Vec<f64>,
}

const ARC_NODES: usize = 2048;

impl ArcTable {
    fn new(c: f64) -> Self {
        let h = TAU / ARC_NODES as f64;
        let spec = QuadratureSpec::default().with_rel_tol(1e-15).with_abs_tol(1e-17);
        let mut cum = vec![0.0; ARC_NODES + 1];
        for i in 0..ARC_NODES {
            let iv = Interval::new(i as f64 * h, (i + 1) as f64 * h);
            cum[i + 1] = cum[i] + integrate_1d(|t| Self::speed_of(c, t), &iv, &spec).value;
        }
        let m = cum[ARC_NODES] / TAU;
        let p = cum.iter().enumerate().map(|(i, &l)| l - m * i as f64 * h).collect();
        Self { c, m, p }
    }

    fn speed_of(c: f64, t: f64) -> f64 {
        (1.0 + c * c - 2.0 * c * t.sin()).max(0.0).sqrt()
    }

    fn speed(&self, t: f64) -> f64 {
        Self::speed_of(self.c, t)
    }

    /// Periodic part `P(t)`.
    fn periodic(&self, t: f64) -> f64 {
        let h = TAU / ARC_NODES as f64;
        let r = t.rem_euclid(TAU);
        let i = ((r / h) as usize).min(ARC_NODES - 1);
        let s = (r - i as f64 * h) / h;
        let (t0, t1) = (i as f64 * h, (i + 1) as f64 * h);
        let (p0, p1) = (self.p[i], self.p[i + 1]);
        let (d0, d1) = (self.speed(t0) - self.m, self.speed(t1) - self.m);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * p0 + (s3 - 2.0 * s2 + s) * h * d0 + (-2.0 * s3 + 3.0 * s2) * p1 + (s3 - s2) * h * d1
    }

    /// `L(t + Δ) − L(t)`.
    fn length_between(&self, t: f64, delta: f64) -> f64 {
        if delta.abs() < 0.02 {
            // five-point Gauss–Legendre on a short arc keeps relative precision
            const X: [f64; 5] = [0.0, -0.538_469_310_105_683, 0.538_469_310_105_683, -0.906_179_845_938_664, 0.906_179_845_938_664];
            const W: [f64; 5] = [
                0.568_888_888_888_889,
                0.478_628_670_499_366,
                0.478_628_670_499_366,
                0.236_926_885_056_189,
                0.236_926_885_056_189,
            ];
            let mid = t + 0.5 * delta;
            0.5 * delta * X.iter().zip(W).map(|(&x, w)| w * self.speed(mid + 0.5 * delta * x)).sum::<f64>()
        } else {
            self.m * delta + self.periodic(t + delta) - self.periodic(t)
        }
    }

    fn length(&self, t: f64) -> f64 {
        self.m * t + self.periodic(t)
    }

    /// `t` with `L(t) = σ`.
    fn param(&self, sigma: f64) -> f64 {
        let mut t = sigma / self.m;
        for _ in 0..50 {
            let step = (self.length(t) - sigma) / self.speed(t);
            t -= step;
            if step.abs() <= 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        t
    }

    /// `Δ` with `L(t + Δ) − L(t) = v`.
    fn offset(&self, t: f64, v: f64) -> f64 {
        let mut d = v / self.m;
        for _ in 0..50 {
            let step = (self.length_between(t, d) - v) / self.speed(t + d);
            d -= step;
            if step.abs() <= 1e-15 * d.abs() + 1e-300 {
                break;
            }
        }
        d
    }
}

/// Coordinates along a curve for the pair integral: `u ↦ (t, γ(t))` with
/// `|dγ/du|` and a cancellation-free chord.
enum Coords<'a> {
    Param(&'a Curve),
    GratingArc { curve: &'a Curve, table: ArcTable },
}

impl Coords<'_> {
    fn new(curve: &Curve) -> Coords<'_> {
        match curve.kind() {
            CurveKind::Grating { c } if *c > 0.0 => Coords::GratingArc {
                curve,
                table: ArcTable::new(*c),
            },
            _ => Coords::Param(curve),
        }
    }

    fn to_u(&self, t: f64) -> f64 {
        match self {
            Coords::Param(_) => t,
            Coords::GratingArc { curve, table } => curve.similarity().a.norm() * table.length(t),
        }
    }

    fn to_t(&self, u: f64) -> f64 {
        match self {
            Coords::Param(_) => u,
            Coords::GratingArc { curve, table } => table.param(u / curve.similarity().a.norm()),
        }
    }

    /// `(t₂, γ(t₂) − γ(t₁), |dγ/du| at t₁, at t₂)` for `u₂ = u₁ + v`.
    fn step(&self, t1: f64, v: f64) -> (f64, Complex64, f64, f64) {
        match self {
            Coords::Param(curve) => {
                let t2 = t1 + v;
                // far out t1 + v rounds; rescale the chord to the intended offset
                let dt = t2 - t1;
                let chord = if dt == 0.0 {
                    curve.deriv(t1) * v
                } else {
                    curve.chord(t1, t2) * (v / dt)
                };
                (t2, chord, curve.deriv(t1).norm(), curve.deriv(t2).norm())
            }
            Coords::GratingArc { curve, table } => {
                let a = curve.similarity().a;
                let delta = table.offset(t1, v / a.norm());
                let CurveKind::Grating { c } = curve.kind() else { unreachable!() };
                // γ(t + Δ) − γ(t) = Δ + 2ic·sin(Δ/2)·e^{i(t + Δ/2)}
                let chord = Complex64::new(delta, 0.0)
                    + Complex64::new(0.0, 2.0 * c * (0.5 * delta).sin()) * Complex64::from_polar(1.0, t1 + 0.5 * delta);
                (t1 + delta, a * chord, 1.0, 1.0)
            }
        }
    }
}

/// `‖f‖^p_{B_p(Γ)} = ∫_Γ∫_Γ |f(w) − f(z)|^p/|w − z|² |dw||dz|`.
///
/// With `window = None` the integral runs over the whole curve (compactified
/// for unbounded curves); otherwise over `window²` in the curve parameter.
/// Gratings are integrated in arc length.
pub fn boundary_norm_curve(
    f: &BoundaryFunction,
    curve: &Curve,
    p: f64,
    window: Option<&CurveWindow>,
    quad: &QuadratureSpec,
) -> Result<NormResult> {
    check_p(p)?;
    if matches!(curve.kind(), CurveKind::Parabola { .. } | CurveKind::Wiggle { .. }) && window.is_none() {
        return Err(Error::UnsupportedDomain(format!(
            "whole-curve boundary norms on {} need a window",
            curve.label()
        )));
    }
    let coords = Coords::new(curve);
    let (t_lo, t_hi) = match window {
        Some(w) => (w.t_lo, w.t_hi),
        None => curve.param_range(),
    };
    if t_lo.is_infinite() || t_hi.is_infinite() {
        f.check_decay(|t| f.eval(t, curve.eval(t)))?;
    }
    let u_of = |t: f64| if t.is_finite() { coords.to_u(t) } else { t };
    let (lo, hi) = (u_of(t_lo), u_of(t_hi));
    let features: Vec<Feature> = match f.harmonic() {
        Some(u) => curve_features(curve, u)
            .into_iter()
            .map(|ft| {
                let jac = match coords {
                    Coords::Param(c) => c.deriv(ft.center).norm().max(1e-300),
                    Coords::GratingArc { .. } => 1.0,
                };
                Feature {
                    center: coords.to_u(ft.center),
                    width: ft.width / jac,
                }
            })
            .collect(),
        None => Vec::new(),
    };
    let corners: Vec<f64> = curve.corners().into_iter().map(u_of).collect();
    let square = pair_square(lo, hi, &features, &corners);
    let h = |x: f64, v: f64| {
        let t1 = coords.to_t(x);
        let (t2, d, j1, j2) = coords.step(t1, v);
        let z1 = curve.eval(t1);
        let z2 = z1 + d;
        let diff = f.difference(t1, z1, t2, z2, -d);
        diff.powf(p) / d.norm_sqr() * j1 * j2
    };
    finish(integrate_pair_offset(h, &square, p, quad)?, 1.0, p, Normalization::Plain, "B_p(Γ) norm")
}

/// `(1/4π²)∫∫ |f∘φ(x) − f∘φ(y)|^p/|x − y|² dx dy` for the map onto `side`.
pub fn bp_phi_norm(
    f: &BoundaryFunction,
    domain: &Domain,
    side: Side,
    p: f64,
    quad: &QuadratureSpec,
) -> Result<NormResult> {
    check_p(p)?;
    let m = domain.map(side)?;
    f.check_decay(|x| f.eval(domain.boundary_param(side, x), m.boundary_value(x)))?;
    let features = match f.harmonic() {
        Some(u) => pullback_features(domain, side, u)?,
        None => Vec::new(),
    };
    let corners: Vec<f64> = if matches!(domain.kind(), crate::conformal::DomainKind::Sector { .. }) {
        vec![0.0]
    } else {
        Vec::new()
    };
    let square = pair_square(f64::NEG_INFINITY, f64::INFINITY, &features, &corners);
    let h = |x: f64, v: f64| {
        let d = m.boundary_chord(x, v);
        let z1 = m.boundary_value(x);
        let (t1, t2) = (domain.boundary_param(side, x), domain.boundary_param(side, x + v));
        f.difference(t1, z1, t2, z1 + d, -d).powf(p) / (v * v)
    };
    let r = integrate_pair_offset(h, &square, p, quad)?;
    finish(r, 1.0 / (4.0 * PI * PI), p, Normalization::Pullback, "B_p^φ norm")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn trace(s: &str) -> BoundaryFunction {
        BoundaryFunction::trace(s.parse().unwrap())
    }

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default().with_rel_tol(1e-9)
    }

    #[test]
    fn line_norm_of_pole_traces() {
        // |f(x) − f(y)|²/(x − y)² separates into (x² + b²)⁻¹(y² + b²)⁻¹
        for b in [1.0, 2.0] {
            let f = BoundaryFunction::trace(HarmonicTestFunction::pole(c(0.0, -b), 1, c(1.0, 0.0)).unwrap());
            let r = boundary_norm_line(&f, 2.0, &quad()).unwrap();
            let oracle = (PI / b).powi(2);
            assert!((r.value - oracle).abs() < 1e-5 * oracle, "{b}: {r:?}");
        }
    }

    #[test]
    fn constants_have_zero_norm() {
        let f = BoundaryFunction::constant(c(2.0, -1.0));
        assert_eq!(boundary_norm_line(&f, 1.5, &quad()).unwrap().value, 0.0);
        let g = Curve::grating(0.5).unwrap();
        assert_eq!(boundary_norm_curve(&f, &g, 2.0, None, &quad()).unwrap().value, 0.0);
    }

    #[test]
    fn divergent_and_invalid_inputs() {
        let step = BoundaryFunction::formula("sign", |z: Complex64| c(z.re.signum(), 0.0));
        assert!(matches!(boundary_norm_line(&step, 2.0, &quad()), Err(Error::Divergence(_))));
        let f = trace("pole(w=-1i,k=1,coef=1)");
        assert!(boundary_norm_line(&f, 1.0, &quad()).is_err());
    }

    #[test]
    fn curve_norm_on_the_line_matches() {
        let f = trace("pole(w=-1i,k=1,coef=1)");
        let r = boundary_norm_curve(&f, &Curve::line(), 2.0, None, &quad()).unwrap();
        assert!((r.value - PI * PI).abs() < 1e-5 * PI * PI, "{r:?}");
    }

    #[test]
    fn exact_differences_agree_with_direct_ones() {
        let f = trace("pole(w=-1i,k=2,coef=1+1i) + conj(pole(w=0.5-2i,k=3,coef=2))");
        let u = f.harmonic().unwrap().clone();
        for (z1, z2) in [(c(0.3, 0.1), c(-1.0, 0.4)), (c(2.0, 0.0), c(2.5, 0.0))] {
            let direct = (u.value(z1).unwrap() - u.value(z2).unwrap()).norm();
            let exact = f.difference(0.0, z1, 0.0, z2, z1 - z2);
            assert!((direct - exact).abs() < 1e-13 * direct.max(1.0));
        }
    }

    #[test]
    fn arc_table_inverts_lengths() {
        let table = ArcTable::new(0.9);
        let curve = Curve::grating(0.9).unwrap();
        for t in [-20.0, -1.0, 0.3, 7.5] {
            let l = table.length(t) - table.length(0.0);
            let direct = if t >= 0.0 {
                curve.arc_length(0.0, t, 1e-12).unwrap()
            } else {
                -curve.arc_length(t, 0.0, 1e-12).unwrap()
            };
            assert!((l - direct).abs() < 1e-9, "{t}: {l} vs {direct}");
            assert!((table.param(table.length(t)) - t).abs() < 1e-12 * (1.0 + t.abs()));
        }
        for v in [1e-9, 1e-3, 0.5, 30.0] {
            let d = table.offset(1.3, v);
            assert!((table.length_between(1.3, d) - v).abs() < 1e-13 * (1.0 + v));
        }
    }

    #[test]
    fn pullback_norm_on_the_halfplane() {
        let f = trace("pole(w=-1i,k=1,coef=1)");
        let h = Domain::halfplane();
        let r = bp_phi_norm(&f, &h, Side::Interior, 2.0, &quad()).unwrap();
        assert!((r.value - 0.25).abs() < 1e-5 * 0.25, "{r:?}");
        let s = Domain::sector(1.0).unwrap();
        let q = bp_phi_norm(&f, &s, Side::Interior, 2.0, &quad()).unwrap();
        assert!((q.value - r.value).abs() < 1e-7);
        assert_eq!(r.normalization, Normalization::Pullback);
    }

    #[test]
    fn traces_are_boundary_limits() {
        let f = trace("pole(w=-2i,k=1,coef=1)");
        let xs: Vec<f64> = (0..10).map(|i| -4.5 + i as f64).collect();
        let d = Domain::grating(0.5).unwrap();
        assert!(f.trace_defect(&d, Side::Interior, &xs).unwrap() < 1e-6);
        let s = Domain::sector(0.5).unwrap();
        let g = trace("pole(w=-1-1i,k=1,coef=1)");
        assert!(g.trace_defect(&s, Side::Interior, &xs).unwrap() < 1e-6);
    }

    #[test]
    fn tables_interpolate() {
        let f = BoundaryFunction::table(vec![(0.0, c(1.0, 0.0)), (2.0, c(3.0, 0.0))]).unwrap();
        assert_eq!(f.eval(1.0, c(0.0, 0.0)), c(2.0, 0.0));
        assert_eq!(f.eval(3.0, c(0.0, 0.0)), c(0.0, 0.0));
        assert!(BoundaryFunction::table(vec![(1.0, c(0.0, 0.0)), (0.0, c(0.0, 0.0))]).is_err());
    }
}
