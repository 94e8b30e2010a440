//! Deterministic adaptive quadrature with certified error estimates.
//!
//! Everything is built on one nested Gauss–Kronrod (7, 15) pair and global
//! adaptive bisection. Infinite ranges and endpoint singularities are handled
//! by changes of variables described by [`Interval`]; multi-dimensional
//! integrals are iterated one-dimensional ones.

mod adaptive;
mod interval;
mod plane;
mod rule;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use adaptive::{integrate_1d, integrate_1d_par, integrate_complex};
pub use interval::Interval;
pub use plane::{integrate_2d_graded, integrate_iterated, integrate_pair_offset, integrate_pair_singular, Rectangle};

/// Tolerances and budgets for every quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Exponent of the power-law substitution used next to graded points.
    pub grading_exponent: f64,
    /// Largest truncation radius an energy or ray integral may use before
    /// giving up on certifying its tail.
    pub max_truncation: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            grading_exponent: 4.0,
            max_truncation: 1e6,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Tolerance target for a result of magnitude `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut errs = Vec::new();
        if !(self.rel_tol > 0.0) {
            errs.push("rel_tol must be positive".to_string());
        }
        if !(self.abs_tol > 0.0) {
            errs.push("abs_tol must be positive".to_string());
        }
        if self.max_subdivisions < 16 {
            errs.push("max_subdivisions must be at least 16".to_string());
        }
        if !(self.grading_exponent >= 1.0) {
            errs.push("grading_exponent must be at least 1".to_string());
        }
        if !(self.max_truncation > 1.0) {
            errs.push("max_truncation must exceed 1".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    /// Spec for an inner integral of an iterated scheme.
    pub(crate) fn inner(&self) -> Self {
        Self {
            rel_tol: self.rel_tol * 0.25,
            abs_tol: self.abs_tol * 0.25,
            ..*self
        }
    }
}

/// Result of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralValue<T = f64> {
    pub value: T,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    pub converged: bool,
}

impl IntegralValue<f64> {
    /// Turn a non-converged result into an error.
    pub fn certified(self, what: &str) -> crate::Result<Self> {
        if self.converged && self.value.is_finite() {
            Ok(self)
        } else {
            Err(crate::Error::Quadrature(format!(
                "{what}: value {} with error estimate {:.3e} after {} subdivisions",
                self.value, self.error_estimate, self.subdivisions_used
            )))
        }
    }
}

/// Values a quadrature can accumulate.
pub trait QuadValue:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// An inner-integral value that carries its own error estimate and a
/// failure indicator through an outer quadrature. Only `value` drives the
/// outer error control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Carry {
    pub value: f64,
    pub err: f64,
    pub failed: f64,
}

impl Add for Carry {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Carry {
            value: self.value + o.value,
            err: self.err + o.err,
            failed: self.failed + o.failed,
        }
    }
}

impl Sub for Carry {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Carry {
            value: self.value - o.value,
            err: self.err - o.err,
            failed: self.failed - o.failed,
        }
    }
}

impl Mul<f64> for Carry {
    type Output = Self;
    fn mul(self, w: f64) -> Self {
        Carry {
            value: self.value * w,
            err: self.err * w.abs(),
            failed: self.failed * w.abs(),
        }
    }
}

impl QuadValue for Carry {
    fn zero() -> Self {
        Carry {
            value: 0.0,
            err: 0.0,
            failed: 0.0,
        }
    }
    fn magnitude(&self) -> f64 {
        self.value.abs()
    }
    fn finite(&self) -> bool {
        self.value.is_finite() && self.err.is_finite()
    }
}

impl From<IntegralValue<f64>> for Carry {
    fn from(v: IntegralValue<f64>) -> Self {
        Carry {
            value: v.value,
            err: v.error_estimate,
            failed: if v.converged { 0.0 } else { 1.0 },
        }
    }
}

/// Pairwise summation; the result depends only on the order of `xs`.
pub(crate) fn pairwise_sum<T: QuadValue>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => xs[0],
        n if n <= 8 => xs[1..].iter().fold(xs[0], |acc, &x| acc + x),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}
