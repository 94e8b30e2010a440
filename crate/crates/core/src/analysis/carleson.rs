use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::harmonic::HarmonicTestFunction;
use crate::conformal::{Domain, Side};
use crate::quadrature::{integrate_1d, integrate_2d_graded, integrate_iterated, Interval, QuadratureSpec, Rectangle};
use crate::{Error, Result};

/// A boundary interval `[a, b]`; its Carleson box is `[a, b] × (0, b − a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxInterval {
    pub a: f64,
    pub b: f64,
}

impl BoxInterval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b && a.is_finite() && b.is_finite()) {
            return Err(Error::invalid(format!("interval needs a < b, got [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    pub fn centered(x: f64, len: f64) -> Result<Self> {
        Self::new(x - 0.5 * len, x + 0.5 * len)
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// The interval with the same centre and three times the length.
    pub fn tripled(&self) -> Self {
        let l = self.len();
        Self {
            a: self.a - l,
            b: self.b + l,
        }
    }
}

/// `sup ν(Q_I)/|I|` over a finite family of boxes, with the maximizing box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlesonResult {
    pub value: f64,
    pub error_estimate: f64,
    pub witness: BoxInterval,
    pub boxes: usize,
}

/// Boxes over `center` of lengths `2^{k/2^r}` for `k/2^r ∈ [k_min, k_max]`,
/// each translated by multiples of `|I|/2^{r+1}` within `±|I|` of `center`.
/// Refinement level `r` doubles the density of lengths and of positions.
pub fn dyadic_boxes(center: f64, k_min: i32, k_max: i32, refine: u32) -> Result<Vec<BoxInterval>> {
    if k_min > k_max {
        return Err(Error::invalid(format!("empty length range 2^{k_min}..2^{k_max}")));
    }
    let per = 1i32 << refine;
    let shifts = 2 * per;
    let mut out = Vec::new();
    for j in k_min * per..=k_max * per {
        let len = (j as f64 / per as f64).exp2();
        for s in -shifts..=shifts {
            out.push(BoxInterval::centered(center + len * s as f64 / shifts as f64, len)?);
        }
    }
    Ok(out)
}

fn energy_density(f: &HarmonicTestFunction, z: Complex64) -> f64 {
    f.grad_norm_unchecked(z, 1).powi(2)
}

fn check(f: &HarmonicTestFunction) -> Result<()> {
    f.check_admissible(&Domain::halfplane(), Side::Interior)
}

/// `ν(R) = ∫_R |∇F|² y dm` over `R = [a, b] × (0, h)`.
pub fn carleson_measure(
    f: &HarmonicTestFunction,
    interval: BoxInterval,
    height: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    check(f)?;
    if !(height > 0.0) {
        return Err(Error::invalid(format!("box height must be positive, got {height}")));
    }
    let mut x = Interval::new(interval.a, interval.b);
    for pole in f.poles() {
        x = x.with_cluster(pole.w.re, pole.w.im.abs());
    }
    let rect = Rectangle::new(x, Interval::new(0.0, height));
    let r = integrate_2d_graded(|x, y| energy_density(f, Complex64::new(x, y)) * y, &rect, quad)
        .certified("Carleson box integral")?;
    Ok((r.value, r.error_estimate))
}

/// `max_I ν(Q_I)/|I|` over `boxes`, `dν = |∇F|² y dm`.
pub fn carleson_norm(f: &HarmonicTestFunction, boxes: &[BoxInterval], quad: &QuadratureSpec) -> Result<CarlesonResult> {
    check(f)?;
    let first = *boxes.first().ok_or_else(|| Error::invalid("no Carleson boxes given"))?;
    let mut best = CarlesonResult {
        value: f64::NEG_INFINITY,
        error_estimate: 0.0,
        witness: first,
        boxes: boxes.len(),
    };
    for &b in boxes {
        let (v, e) = carleson_measure(f, b, b.len(), quad)?;
        let ratio = v / b.len();
        if ratio > best.value {
            best.value = ratio;
            best.error_estimate = e / b.len();
            best.witness = b;
        }
    }
    Ok(best)
}

/// `S_I(x₀) = (∫_{T_I(x₀)} |∇F|² dm)^{1/2}` over the truncated cone
/// `T_I(x₀) = {|x − x₀| < y < len}`.
pub fn lusin_area(f: &HarmonicTestFunction, x0: f64, len: f64, quad: &QuadratureSpec) -> Result<f64> {
    check(f)?;
    if !(len > 0.0) {
        return Err(Error::Domain {
            z: Complex64::new(x0, len),
            reason: "truncated cone is empty".into(),
        });
    }
    Ok(lusin_squared(f, x0, len, quad)?.0.sqrt())
}

fn lusin_squared(f: &HarmonicTestFunction, x0: f64, len: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let outer = Interval::new(0.0, len);
    let inner = |y: f64| {
        let mut iv = Interval::new(x0 - y, x0 + y);
        for pole in f.poles() {
            iv = iv.with_cluster(pole.w.re, pole.w.im.abs());
        }
        iv
    };
    let r = integrate_iterated(&outer, inner, |y, x| energy_density(f, Complex64::new(x, y)), quad)
        .certified("Lusin area integral")?;
    Ok((r.value, r.error_estimate))
}

/// Both sides of `∫_I S_I(x₀)² dx₀ ≤ 2ν(3I × (0, |I|))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LusinAverage {
    pub interval: BoxInterval,
    pub lhs: f64,
    pub lhs_error: f64,
    pub rhs: f64,
    pub rhs_error: f64,
}

impl LusinAverage {
    /// The inequality up to the combined quadrature error.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + self.lhs_error + self.rhs_error
    }
}

/// The averaged Lusin inequality on `interval`: the left side integrates
/// `S_I(x₀)²` over `x₀ ∈ I`, the right side is twice the Carleson measure of
/// the tripled interval at height `|I|`. The two are computed independently.
pub fn lusin_average(f: &HarmonicTestFunction, interval: BoxInterval, quad: &QuadratureSpec) -> Result<LusinAverage> {
    check(f)?;
    let len = interval.len();
    let inner = QuadratureSpec {
        rel_tol: 0.1 * quad.rel_tol,
        ..*quad
    };
    let failure = std::sync::Mutex::new(None);
    let lhs = integrate_1d(
        |x0| match lusin_squared(f, x0, len, &inner) {
            Ok((v, _)) => v,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                f64::NAN
            }
        },
        &Interval::new(interval.a, interval.b),
        quad,
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let lhs = lhs.certified("averaged Lusin integral")?;
    let (nu, nu_err) = carleson_measure(f, interval.tripled(), len, quad)?;
    Ok(LusinAverage {
        interval,
        lhs: lhs.value,
        lhs_error: lhs.error_estimate + inner.rel_tol * lhs.value,
        rhs: 2.0 * nu,
        rhs_error: 2.0 * nu_err,
    })
}
