use std::f64::consts::PI;

use num_complex::Complex64;

use super::boundary::BoundaryFunction;
use crate::quadrature::{integrate_complex, Interval, QuadratureSpec};
use crate::{Error, Result};

/// `(Pf)(z) = (1/π)∫ y·f(t)/((x − t)² + y²) dt` for `z = x + iy ∈ ℍ`, with
/// `f` read on the real line.
pub fn poisson_extend(f: &BoundaryFunction, z: Complex64, quad: &QuadratureSpec) -> Result<Complex64> {
    if !(z.im > 0.0 && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain {
            z,
            reason: "Poisson extension needs a point of the upper half-plane".into(),
        });
    }
    quad.validate().map_err(Error::Config)?;
    let at = |t: f64| f.eval(t, Complex64::new(t, 0.0));
    check_growth(&at)?;
    let (x, y) = (z.re, z.im);
    let kernel = |t: f64| {
        let d = t - x;
        at(t) * (y / (PI * (d * d + y * y)))
    };
    let mut iv = Interval::real_line().with_center(x).with_scale(y).with_cluster(x, y);
    if let Some(u) = f.harmonic() {
        for pole in u.poles() {
            iv = iv.with_cluster(pole.w.re, pole.w.im.abs().max(1e-6));
        }
    }
    let r = integrate_complex(kernel, &iv, quad);
    if !r.converged || !(r.value.re.is_finite() && r.value.im.is_finite()) {
        return Err(Error::Quadrature(format!(
            "Poisson integral at {z}: value {} with error estimate {:.3e} after {} subdivisions",
            r.value, r.error_estimate, r.subdivisions_used
        )));
    }
    Ok(r.value)
}

/// The pairing with the Poisson kernel needs `f(t) = o(|t|)`; near-linear
/// growth between `10⁶` and `10⁸` is reported as divergence.
fn check_growth(at: &impl Fn(f64) -> Complex64) -> Result<()> {
    for t in [1e6, -1e6] {
        let (a, b) = (at(t), at(100.0 * t));
        if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::Divergence(format!("boundary function is not finite near {t:e}")));
        }
        if (1.0 + b.norm()) > 50.0 * (1.0 + a.norm()) {
            return Err(Error::Divergence(format!(
                "Poisson pairing diverges: |f| grows from {:.3e} to {:.3e} between {t:e} and {:e}",
                a.norm(),
                b.norm(),
                100.0 * t
            )));
        }
    }
    Ok(())
}
