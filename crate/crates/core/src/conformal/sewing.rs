use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::domain::{Domain, Side};
use crate::geometry::{CurveWindow, Witnessed};
use crate::{Error, Result};

/// Heights used for vertical boundary limits.
pub const LIMIT_HEIGHTS: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// The conformal sewing `h = ψ⁻¹∘φ` on ℝ.
#[derive(Debug, Clone)]
pub struct SewingMap<'a> {
    domain: &'a Domain,
}

/// A boundary limit and its Richardson error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limit {
    pub value: f64,
    pub error_estimate: f64,
}

impl<'a> SewingMap<'a> {
    pub fn new(domain: &'a Domain) -> Result<Self> {
        domain.map(Side::Exterior)?;
        Ok(Self { domain })
    }

    /// `h(x)` from the continuous boundary extensions of both maps.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let phi = self.domain.interior_map();
        let psi = self.domain.map(Side::Exterior)?;
        psi.boundary_inverse(phi.boundary_value(x))
    }

    /// `h(x)` from vertical limits: `φ(x)` as the Richardson limit of
    /// `φ(x + iε)`, then `ψ⁻¹` of it as the limit of `Re ψ⁻¹` along the
    /// outward normal of Γ, both over [`LIMIT_HEIGHTS`].
    ///
    /// The extrapolation assumes smooth dependence on ε and is unreliable at
    /// preimages of corners.
    pub fn eval_by_limits(&self, x: f64) -> Result<Limit> {
        let phi = self.domain.interior_map();
        let psi = self.domain.map(Side::Exterior)?;
        let b_re = richardson(|e| phi.eval(Complex64::new(x, e)).re);
        let b_im = richardson(|e| phi.eval(Complex64::new(x, e)).im);
        let b = Complex64::new(b_re.0, b_im.0);
        let b_err = b_re.1.hypot(b_im.1);
        let curve = self.domain.curve();
        let t = self.domain.boundary_param(Side::Interior, x);
        let tangent = curve.deriv(t);
        let out = -Complex64::new(0.0, 1.0) * tangent / tangent.norm();
        let scale = 1.0 + b.norm();
        let mut fail = None;
        let h = richardson(|e| match psi.inverse(b + out * (e * scale), 1e-15 * (1.0 + b.norm())) {
            Ok(z) => z.re,
            Err(err) => {
                fail.get_or_insert(err);
                f64::NAN
            }
        });
        if let Some(err) = fail {
            return Err(err);
        }
        // first-order sensitivity of h to the error in φ(x)
        let slope = (self.eval(x + 1e-6)? - self.eval(x - 1e-6)?) / 2e-6;
        let dphi = phi.boundary_value(x + 1e-6) - phi.boundary_value(x - 1e-6);
        let gain = slope.abs() * 2e-6 / dphi.norm().max(1e-300);
        Ok(Limit {
            value: h.0,
            error_estimate: h.1 + gain * b_err,
        })
    }
}

/// Two-level Richardson extrapolation to ε → 0 over [`LIMIT_HEIGHTS`],
/// returning the value and the change made by the last level.
fn richardson<F: FnMut(f64) -> f64>(mut g: F) -> (f64, f64) {
    let v: Vec<f64> = LIMIT_HEIGHTS.iter().map(|&e| g(e)).collect();
    let r1 = (10.0 * v[1] - v[0]) / 9.0;
    let r2 = (10.0 * v[2] - v[1]) / 9.0;
    let s = (100.0 * r2 - r1) / 99.0;
    (s, (s - r2).abs())
}

/// `ψ⁻¹(φ(x))` with error at most `tol`: the vertical-limit evaluation is
/// used when its estimate meets `tol`, otherwise the closed-form boundary
/// extension of the catalog maps.
pub fn sewing_eval(domain: &Domain, x: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid("sewing tolerance must be positive"));
    }
    let h = SewingMap::new(domain)?;
    match h.eval_by_limits(x) {
        Ok(l) if l.error_estimate <= tol => Ok(l.value),
        _ => h.eval(x),
    }
}

/// Sup over centres `x` (the window grid) and scales `s` of
/// `max(ρ, 1/ρ)`, `ρ = (h(x+s) − h(x))/(h(x) − h(x−s))`; the witness is `(x, s)`.
pub fn quasisymmetric_constant<H>(h: H, window: &CurveWindow, scales: &[f64]) -> Result<Witnessed<(f64, f64)>>
where
    H: Fn(f64) -> f64,
{
    if scales.is_empty() || scales.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::invalid("scales must be positive and finite"));
    }
    let n = window.sample_count.max(2);
    let mut best = Witnessed {
        value: 1.0,
        witness: (window.t_lo, scales[0]),
    };
    for i in 0..n {
        let x = window.t_lo + window.width() * i as f64 / (n - 1) as f64;
        let hx = h(x);
        for &s in scales {
            let (lo, hi) = (h(x - s), h(x + s));
            if !(lo < hx) {
                return Err(Error::MonotonicityViolation { x: x - s });
            }
            if !(hx < hi) {
                return Err(Error::MonotonicityViolation { x });
            }
            let rho = (hi - hx) / (hx - lo);
            let v = rho.max(1.0 / rho);
            if v > best.value {
                best = Witnessed { value: v, witness: (x, s) };
            }
        }
    }
    Ok(best)
}

/// Least-squares slope of `ln h(x)` against `ln x` over `n` log-spaced
/// points in `[lo, hi]` (`0 < lo < hi`, `h > 0` there).
pub fn fit_power_exponent<H>(h: H, lo: f64, hi: f64, n: usize) -> Result<f64>
where
    H: Fn(f64) -> Result<f64>,
{
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(Error::invalid("exponent fit needs 0 < lo < hi and n ≥ 2"));
    }
    let pts: Vec<(f64, f64)> = crate::geometry::log_space(lo, hi, n)
        .into_iter()
        .map(|x| {
            let y = h(x)?;
            if !(y > 0.0) {
                return Err(Error::invalid(format!("exponent fit needs h(x) > 0, got h({x}) = {y}")));
            }
            Ok((x.ln(), y.ln()))
        })
        .collect::<Result<_>>()?;
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scales() -> Vec<f64> {
        crate::geometry::log_space(1e-2, 1e2, 17)
    }

    #[test]
    fn line_sewing_is_the_identity() {
        let d = Domain::halfplane();
        for x in [-5.0, -0.3, 0.0, 1.0, 40.0] {
            assert!((sewing_eval(&d, x, 1e-10).unwrap() - x).abs() < 1e-10);
        }
        let s = Domain::sector(1.0).unwrap();
        for x in [-2.0, 0.5, 3.0] {
            assert!((sewing_eval(&s, x, 1e-10).unwrap() - x).abs() < 1e-10);
        }
    }

    #[test]
    fn sector_sewing_matches_limits_and_power_law() {
        for alpha in [0.5, 0.75, 1.5] {
            let d = Domain::sector(alpha).unwrap();
            let h = SewingMap::new(&d).unwrap();
            let g = alpha / (2.0 - alpha);
            for x in [-4.0, -0.5, 0.25, 1.0, 7.0] {
                let exact = h.eval(x).unwrap();
                assert!((exact - x.signum() * x.abs().powf(g)).abs() < 1e-12 * (1.0 + exact.abs()));
                let l = h.eval_by_limits(x).unwrap();
                assert!((l.value - exact).abs() < 1e-7 * (1.0 + exact.abs()), "{alpha} {x} {l:?} {exact}");
                assert!((l.value - exact).abs() <= 10.0 * l.error_estimate + 1e-12 * (1.0 + exact.abs()));
            }
            let fit = fit_power_exponent(|x| sewing_eval(&d, x, 1e-9), 1.0, 1e3, 31).unwrap();
            assert!((fit - g).abs() < 1e-3, "{alpha} {fit}");
        }
    }

    #[test]
    fn grating_has_no_sewing() {
        let d = Domain::grating(0.4).unwrap();
        assert!(matches!(sewing_eval(&d, 0.0, 1e-8), Err(Error::UnsupportedDomain(_))));
    }

    #[test]
    fn affine_maps_are_one_quasisymmetric() {
        let w = CurveWindow::symmetric(10.0, 41).unwrap();
        assert!((quasisymmetric_constant(|x| x, &w, &scales()).unwrap().value - 1.0).abs() < 1e-12);
        let v = quasisymmetric_constant(|x| 2.0 * x + 3.0, &w, &scales()).unwrap().value;
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_monotone_maps_are_rejected() {
        let w = CurveWindow::symmetric(2.0, 11).unwrap();
        assert!(matches!(
            quasisymmetric_constant(|x| x * x, &w, &[0.5]),
            Err(Error::MonotonicityViolation { .. })
        ));
    }

    #[test]
    fn sector_constant_grows_away_from_the_line() {
        let w = CurveWindow::symmetric(10.0, 41).unwrap();
        let k = |alpha: f64| {
            let d = Domain::sector(alpha).unwrap();
            let h = SewingMap::new(&d).unwrap();
            quasisymmetric_constant(|x| h.eval(x).unwrap(), &w, &scales()).unwrap().value
        };
        assert!((k(1.0) - 1.0).abs() < 1e-12);
        let below: Vec<f64> = [1.0, 0.75, 0.5].iter().map(|&a| k(a)).collect();
        let above: Vec<f64> = [1.0, 1.25, 1.5].iter().map(|&a| k(a)).collect();
        assert!(below.windows(2).all(|p| p[1] > p[0]), "{below:?}");
        assert!(above.windows(2).all(|p| p[1] > p[0]), "{above:?}");
    }
}
