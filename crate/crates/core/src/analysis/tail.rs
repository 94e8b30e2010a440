use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::{Domain, Side};
use crate::quadrature::{integrate_1d, Interval, QuadratureSpec};
use crate::{Error, Result};

/// Default exponent `ε`.
pub const DEFAULT_EPS: f64 = 0.5;

/// `∫_{L(w)} δ^{−1−ε} |dξ|` along the conformal vertical ray from `w`, and
/// the scale-free ratio `integral·δ(w)^ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailResult {
    pub integral: f64,
    pub ratio: f64,
    pub error_estimate: f64,
    pub delta: f64,
    pub eps: f64,
}

/// The ray `L(w) = {φ(z₀ + it) : t ≥ 0}`, `z₀ = φ⁻¹(w)`, integrated as
/// `∫_0^∞ δ(φ(z₀ + it))^{−1−ε} |φ′(z₀ + it)| dt` with the infinite end
/// compactified.
pub fn tail_integral(domain: &Domain, w: Complex64, eps: f64, quad: &QuadratureSpec) -> Result<TailResult> {
    if !(eps > 0.0 && eps < 2.0) {
        return Err(Error::invalid(format!("tail exponent must lie in (0, 2), got {eps}")));
    }
    quad.validate().map_err(Error::Config)?;
    if domain.side_of(w) != Side::Interior {
        return Err(Error::Domain {
            z: w,
            reason: "tail integral needs a point of the interior domain".into(),
        });
    }
    let delta = domain.delta(w);
    if !(delta > 0.0) {
        return Err(Error::Domain {
            z: w,
            reason: "point lies on the curve".into(),
        });
    }
    let z0 = domain.interior_preimage(w)?;
    let map = domain.interior_map();
    let failure = std::sync::Mutex::new(None);
    let integrand = |t: f64| {
        let z = z0 + Complex64::new(0.0, t);
        match domain.delta_pullback(Side::Interior, z) {
            Ok(d) => d.powf(-1.0 - eps) * map.deriv(z).norm(),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let y0 = z0.im;
    let iv = Interval::new(0.0, f64::INFINITY)
        .with_scale(y0)
        .with_breakpoints([y0, 10.0 * y0]);
    let r = integrate_1d(integrand, &iv, quad);
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let r = r.certified("tail integral")?;
    let scale = delta.powf(eps);
    Ok(TailResult {
        integral: r.value,
        ratio: r.value * scale,
        error_estimate: r.error_estimate,
        delta,
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default().with_rel_tol(1e-11)
    }

    #[test]
    fn halfplane_power_integral() {
        let h = Domain::halfplane();
        for eps in [0.25, 0.5, 1.0, 1.9] {
            for w in [c(0.0, 1.0), c(3.0, 0.01), c(-2.0, 40.0)] {
                let r = tail_integral(&h, w, eps, &quad()).unwrap();
                // ∫_0^∞ (y + t)^{−1−ε} dt = y^{−ε}/ε
                let oracle = w.im.powf(-eps) / eps;
                assert!((r.integral - oracle).abs() < 1e-9 * oracle, "{eps} {w}");
                assert!((r.ratio - 1.0 / eps).abs() < 1e-8, "{eps} {w}: {}", r.ratio);
            }
        }
    }

    #[test]
    fn similarity_invariant_ratio() {
        let d = Domain::sector(1.5).unwrap();
        let w = c(-0.2, 1.3);
        let a = tail_integral(&d, w, 0.5, &quad()).unwrap();
        let (s, b) = (c(0.0, 3.0), c(2.0, -1.0));
        let moved = d.transformed(s, b).unwrap();
        let r = tail_integral(&moved, s * w + b, 0.5, &quad()).unwrap();
        assert!((r.ratio - a.ratio).abs() < 1e-7 * a.ratio, "{} vs {}", r.ratio, a.ratio);
    }

    #[test]
    fn rejects_bad_inputs() {
        let h = Domain::halfplane();
        assert!(tail_integral(&h, c(0.0, 1.0), 2.0, &quad()).is_err());
        assert!(tail_integral(&h, c(0.0, 1.0), 0.0, &quad()).is_err());
        assert!(tail_integral(&h, c(0.0, -1.0), 0.5, &quad()).is_err());
    }
}
