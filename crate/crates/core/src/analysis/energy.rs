use std::f64::consts::{PI, TAU};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::features::{pullback_features, source_point, Feature};
use super::harmonic::HarmonicTestFunction;
use crate::conformal::{Domain, DomainKind, Side, MAX_DERIVATIVE};
use crate::quadrature::{integrate_1d, integrate_iterated, Interval, QuadratureSpec};
use crate::{Error, Result};

/// Weight standing in for `δ` in `Iⁿₚ(u, Ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    /// The true distance `δ(φ(z))`.
    Delta,
    /// `Im z·|φ′(z)|`.
    Pullback,
}

/// Which energy integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum EnergyForm {
    /// `∫_Ω |∇ⁿu|^p w^{np−2} dm` pulled back to the half-plane.
    Domain { weight: Weight },
    /// `∫ |∇ⁿ(u∘φ)|^p y^{np−2} dm` over the source half-plane.
    Composed,
}

/// Integration region in pullback coordinates; `None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub x_lo: Option<f64>,
    pub x_hi: Option<f64>,
    pub depth_hi: Option<f64>,
    /// The x-range is one period and the lattice of translates is summed.
    pub periodized: bool,
}

/// A Besov energy with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub value: f64,
    pub quadrature_error: f64,
    pub truncation_tail: f64,
    pub p: f64,
    pub n: usize,
    pub side: Side,
    pub form: EnergyForm,
    pub truncation: Truncation,
}

impl EnergyResult {
    pub fn total_error(&self) -> f64 {
        self.quadrature_error + self.truncation_tail
    }
}

/// Explicit lattice terms kept on each side of the pole centres.
const LATTICE_MARGIN: i64 = 16;

/// `Iⁿₚ(u, Ω⁺)` with the true distance.
pub fn interior_energy(
    u: &HarmonicTestFunction,
    domain: &Domain,
    p: f64,
    n: usize,
    quad: &QuadratureSpec,
) -> Result<EnergyResult> {
    energy(u, domain, Side::Interior, p, n, EnergyForm::Domain { weight: Weight::Delta }, quad)
}

/// `Iⁿₚ(u∘φ, ℍ)` (or over 𝕃 for the exterior map).
pub fn composed_energy(
    u: &HarmonicTestFunction,
    domain: &Domain,
    side: Side,
    p: f64,
    n: usize,
    quad: &QuadratureSpec,
) -> Result<EnergyResult> {
    energy(u, domain, side, p, n, EnergyForm::Composed, quad)
}

/// `Iⁿₚ(u, ℍ)`.
pub fn halfplane_energy(u: &HarmonicTestFunction, p: f64, n: usize, quad: &QuadratureSpec) -> Result<EnergyResult> {
    interior_energy(u, &Domain::halfplane(), p, n, quad)
}

fn check_inputs(p: f64, n: usize, quad: &QuadratureSpec) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("Besov exponent must satisfy 1 < p < ∞, got {p}")));
    }
    if n == 0 || n > MAX_DERIVATIVE {
        return Err(Error::invalid(format!("order n must be in 1..={MAX_DERIVATIVE}, got {n}")));
    }
    quad.validate().map_err(Error::Config)
}

/// Lattice sum `Σ_{k∈ℤ} h(k)` for a smooth `h ≥ 0` concentrated near the
/// real parts of `centers`, with widths up to their imaginary parts, and decaying at least like `|s|^{−2}`: explicit terms within
/// [`LATTICE_MARGIN`] of the centres, Euler–Maclaurin (midpoint) for the
/// rest. Returns the sum and an error estimate.
fn lattice_sum<H: Fn(f64) -> f64 + Sync>(h: H, centers: &[Complex64], quad: &QuadratureSpec) -> (f64, f64) {
    let min = centers.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
    let max = centers.iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max);
    let spread = centers.iter().map(|c| c.im.abs()).fold(1.0, f64::max);
    let lo = min.floor() as i64 - LATTICE_MARGIN;
    let hi = max.ceil() as i64 + LATTICE_MARGIN;
    let mut sum = 0.0;
    for k in lo..=hi {
        sum += h(k as f64);
    }
    let spec = QuadratureSpec {
        rel_tol: (quad.rel_tol * 1e-2).max(1e-13),
        abs_tol: 1e-300,
        ..*quad
    };
    let mut err = 0.0;
    // right tail from a = hi + ½, left tail up to b = lo − ½
    let tail = |edge: i64, dir: f64| -> (f64, f64) {
        let a = edge as f64 + 0.5 * dir;
        // outward derivatives at a by fourth-order central differences
        let g = |s: f64| h(a + dir * s);
        let (p1, m1, p2, m2) = (g(0.25), g(-0.25), g(0.5), g(-0.5));
        let d1 = (8.0 * (p1 - m1) - (p2 - m2)) / 3.0;
        let (p3, m3, p4, m4) = (g(1.0), g(-1.0), g(1.5), g(-1.5));
        let d3 = -p4 + 8.0 * p3 - 13.0 * p2 + 13.0 * m2 - 8.0 * m3 + m4;
        let d5 = (p4 - 4.0 * p3 + 5.0 * p2 - 5.0 * m2 + 4.0 * m3 - m4) * 16.0;
        let scale = (a - if dir > 0.0 { max } else { min }).abs().max(spread);
        let iv = Interval::new(0.0, f64::INFINITY).with_scale(scale);
        let r = integrate_1d(g, &iv, &spec);
        let last = 31.0 * d5 / 967_680.0;
        let corr = d1 / 24.0 - 7.0 * d3 / 5760.0 + last;
        (r.value + corr, r.error_estimate + last.abs() + if r.converged { 0.0 } else { f64::INFINITY })
    };
    let (rv, re) = tail(hi, 1.0);
    let (lv, le) = tail(lo, -1.0);
    sum += rv + lv;
    err += re + le;
    (sum, err)
}

/// Records the first failure seen inside a quadrature integrand.
struct Failure(Mutex<Option<Error>>);

impl Failure {
    fn new() -> Self {
        Self(Mutex::new(None))
    }

    fn nan(&self, e: Error) -> f64 {
        let mut g = self.0.lock().unwrap();
        g.get_or_insert(e);
        f64::NAN
    }

    fn take(&self) -> Option<Error> {
        self.0.lock().unwrap().take()
    }
}

/// `Iⁿₚ` in the requested form over `side`, in pullback coordinates on the
/// source half-plane.
///
/// Catalog domains other than gratings are integrated over the whole
/// half-plane with compactified tails. For gratings `δ∘φ` and `φ′` are
/// 2π-periodic in `x`, so the half-plane integral equals the integral over
/// one period strip of the lattice sum of the `u`-dependent factor over
/// translates `φ(z) + k·φ(2π)−φ(0)`. The lattice tails are summed by
/// Euler–Maclaurin and their estimated error is reported as
/// `truncation_tail`.
pub fn energy(
    u: &HarmonicTestFunction,
    domain: &Domain,
    side: Side,
    p: f64,
    n: usize,
    form: EnergyForm,
    quad: &QuadratureSpec,
) -> Result<EnergyResult> {
    check_inputs(p, n, quad)?;
    let map = domain.map(side)?;
    u.check_admissible(domain, side)?;
    let periodic = matches!(domain.kind(), DomainKind::Grating { .. });
    let vertex = matches!(domain.kind(), DomainKind::Sector { .. });
    let e = n as f64 * p - 2.0;
    let truncation = |x_lo, x_hi| Truncation {
        x_lo,
        x_hi,
        depth_hi: None,
        periodized: periodic,
    };
    if u.is_zero() {
        return Ok(EnergyResult {
            value: 0.0,
            quadrature_error: 0.0,
            truncation_tail: 0.0,
            p,
            n,
            side,
            form,
            truncation: truncation(None, None),
        });
    }
    let features = pullback_features(domain, side, u)?;
    let lattice = map.similarity().a * TAU;
    let failure = Failure::new();
    let worst_lattice = AtomicU64::new(0.0f64.to_bits());

    // weight(z)·Σ density(φ(z) + k·lattice)
    let integrand = |x: f64, t: f64| -> f64 {
        let z = source_point(side, x, t);
        let derivs = match map.eval_derivs(z, n) {
            Ok(d) => d,
            Err(err) => return failure.nan(err),
        };
        let zeta = derivs[0];
        let jac = derivs[1].norm();
        let weight = match form {
            EnergyForm::Domain { weight: Weight::Delta } => match domain.delta_pullback(side, z) {
                Ok(d) => d.powf(e) * jac * jac,
                Err(err) => return failure.nan(err),
            },
            EnergyForm::Domain { weight: Weight::Pullback } => (t * jac).powf(e) * jac * jac,
            EnergyForm::Composed => t.powf(e),
        };
        if weight == 0.0 {
            return 0.0;
        }
        let density = |w: Complex64| -> f64 {
            match form {
                EnergyForm::Domain { .. } => u.grad_norm_unchecked(w, n).powf(p),
                EnergyForm::Composed => u.composed_grad_norm_at(w, &derivs, n).powf(p),
            }
        };
        if !periodic {
            return weight * density(zeta);
        }
        let centers: Vec<Complex64> = u.poles().map(|pt| (pt.w - zeta) / lattice).collect();
        let (sum, err) = lattice_sum(|s| density(zeta + lattice * s), &centers, quad);
        if sum > 0.0 {
            worst_lattice.fetch_max((err / sum).to_bits(), Ordering::Relaxed);
        }
        weight * sum
    };

    let width_at = |x: f64| -> f64 {
        let mut w = f64::INFINITY;
        for f in &features {
            let mut d = (x - f.center).abs();
            if periodic {
                d = d.rem_euclid(TAU);
                d = d.min(TAU - d);
            }
            w = w.min(d + f.width);
        }
        if vertex {
            w = w.min(x.abs().max(1e-300));
        }
        w
    };
    let inner = |x: f64| {
        let w = width_at(x);
        Interval::new(0.0, f64::INFINITY)
            .graded_lo()
            .with_scale(w)
            .with_breakpoints([w / 16.0, w / 4.0, w, 4.0 * w])
    };
    let main = features.first().copied().unwrap_or(Feature {
        center: 0.0,
        width: 1.0,
    });
    let (outer, x_range) = if periodic {
        let (a, b) = (main.center - PI, main.center + PI);
        let mut iv = Interval::new(a, b);
        for f in &features {
            let c = a + (f.center - a).rem_euclid(TAU);
            iv = iv.with_cluster(c, f.width.min(1.0));
        }
        (iv, (Some(a), Some(b)))
    } else {
        let mut iv = Interval::real_line().with_center(main.center).with_scale(main.width);
        for f in &features {
            iv = iv.with_cluster(f.center, f.width);
        }
        if vertex {
            iv = iv.graded_at(0.0);
        }
        (iv, (None, None))
    };
    let r = integrate_iterated(&outer, inner, integrand, quad);
    if let Some(err) = failure.take() {
        return Err(err);
    }
    let r = r.certified("energy integral")?;
    let rel_lattice = f64::from_bits(worst_lattice.load(Ordering::Relaxed));
    let truncation_tail = rel_lattice * r.value;
    if truncation_tail > 0.5 * quad.target(r.value) {
        return Err(Error::TruncationInsufficient {
            radius: LATTICE_MARGIN as f64,
            target: 0.5 * quad.target(r.value),
            bound: truncation_tail,
        });
    }
    Ok(EnergyResult {
        value: r.value,
        quadrature_error: r.error_estimate,
        truncation_tail,
        p,
        n,
        side,
        form,
        truncation: truncation(x_range.0, x_range.1),
    })
}

/// `2π(n!)^p p⁻¹ δ(w)^{−p}`, the bound on `Iⁿₚ(F_w, Ω)` for `F_w = (w − z)^{−1}`.
pub fn test_function_bound(delta: f64, p: f64, n: usize) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    TAU * fact.powf(p) / p * delta.powf(-p)
}
