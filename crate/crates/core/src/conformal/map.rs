use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::Similarity;
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Highest derivative order with a closed form.
pub const MAX_DERIVATIVE: usize = 4;

/// Source half-plane of a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfPlane {
    /// ℍ = {Im z > 0}.
    Upper,
    /// 𝕃 = {Im z < 0}.
    Lower,
}

impl HalfPlane {
    pub fn contains(self, z: Complex64) -> bool {
        match self {
            HalfPlane::Upper => z.im > 0.0,
            HalfPlane::Lower => z.im < 0.0,
        }
    }

    /// Distance from `z` to the boundary line.
    pub fn depth(self, z: Complex64) -> f64 {
        match self {
            HalfPlane::Upper => z.im,
            HalfPlane::Lower => -z.im,
        }
    }
}

/// Closed-form conformal maps fixing ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapKind {
    /// `z ↦ z` on ℍ.
    IdentityH,
    /// `z ↦ z` on 𝕃.
    IdentityL,
    /// `z ↦ z^α` on ℍ, onto `{0 < arg w < απ}`.
    Power { alpha: f64 },
    /// `z ↦ e^{iαπ}(−z)^{2−α}` on 𝕃, onto `{απ < arg w < 2π}`.
    ExteriorPower { alpha: f64 },
    /// `z ↦ z + c·e^{iz}` on ℍ.
    Grating { c: f64 },
}

/// A catalog map followed by a similarity `w ↦ a·w + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformalMap {
    kind: MapKind,
    post: Similarity,
}

/// `z^β` with `arg z ∈ (−π, π]`.
fn cpow(z: Complex64, beta: f64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(z.norm().powf(beta), beta * z.arg())
}

/// `arg w ∈ [0, 2π)`.
fn arg_positive(w: Complex64) -> f64 {
    let a = w.arg();
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Falling factorial `β(β−1)…(β−k+1)`.
fn falling(beta: f64, k: usize) -> f64 {
    (0..k).map(|j| beta - j as f64).product()
}

impl ConformalMap {
    fn new(kind: MapKind) -> Self {
        Self {
            kind,
            post: Similarity::IDENTITY,
        }
    }

    pub fn identity_h() -> Self {
        Self::new(MapKind::IdentityH)
    }

    pub fn identity_l() -> Self {
        Self::new(MapKind::IdentityL)
    }

    pub fn power(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self::new(MapKind::Power { alpha }))
    }

    /// Exterior map of the sector of opening `απ`: sends −1 to the ray
    /// `arg = απ` and 1 to the ray `arg = 0`.
    pub fn exterior_power(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let m = Self::new(MapKind::ExteriorPower { alpha });
        let on_ray = |w: Complex64, angle: f64| {
            let d = arg_positive(w) - angle;
            d.abs() < 1e-12 || (d - TAU).abs() < 1e-12 || (d + TAU).abs() < 1e-12
        };
        let (lo, hi) = (m.boundary_value(-1.0), m.boundary_value(1.0));
        if !(on_ray(lo, alpha * PI) && on_ray(hi, 0.0)) {
            return Err(Error::invalid(format!("exterior power map for alpha = {alpha} misplaces its boundary")));
        }
        Ok(m)
    }

    pub fn grating(c: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&c) {
            return Err(Error::invalid(format!("grating amplitude c = {c} must lie in [0, 1)")));
        }
        Ok(Self::new(MapKind::Grating { c }))
    }

    /// `a·φ + b`.
    pub fn transformed(&self, a: Complex64, b: Complex64) -> Result<Self> {
        let outer = Similarity::new(a, b)?;
        Ok(Self {
            kind: self.kind,
            post: outer.compose(&self.post),
        })
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn similarity(&self) -> &Similarity {
        &self.post
    }

    pub fn source(&self) -> HalfPlane {
        match self.kind {
            MapKind::IdentityL | MapKind::ExteriorPower { .. } => HalfPlane::Lower,
            _ => HalfPlane::Upper,
        }
    }

    fn base_eval(&self, z: Complex64) -> Complex64 {
        match self.kind {
            MapKind::IdentityH | MapKind::IdentityL => z,
            MapKind::Power { alpha } => cpow(z, alpha),
            MapKind::ExteriorPower { alpha } => Complex64::from_polar(1.0, alpha * PI) * cpow(-z, 2.0 - alpha),
            MapKind::Grating { c } => z + c * (I * z).exp(),
        }
    }

    /// `φ^{(k)}(z)` of the catalog map, `k ≤ MAX_DERIVATIVE`.
    fn base_deriv(&self, z: Complex64, k: usize) -> Complex64 {
        if k == 0 {
            return self.base_eval(z);
        }
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self.kind {
            MapKind::IdentityH | MapKind::IdentityL => {
                if k == 1 {
                    one
                } else {
                    zero
                }
            }
            MapKind::Power { alpha } => falling(alpha, k) * cpow(z, alpha) / z.powi(k as i32),
            MapKind::ExteriorPower { alpha } => {
                let beta = 2.0 - alpha;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::from_polar(sign * falling(beta, k), alpha * PI) * cpow(-z, beta) / (-z).powi(k as i32)
            }
            MapKind::Grating { c } => {
                let e = c * I.powi(k as i32) * (I * z).exp();
                if k == 1 {
                    one + e
                } else {
                    e
                }
            }
        }
    }

    /// `φ(z)` without a domain check.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.post.apply(self.base_eval(z))
    }

    /// `φ′(z)` without a domain check.
    pub fn deriv(&self, z: Complex64) -> Complex64 {
        self.post.a * self.base_deriv(z, 1)
    }

    /// `(φ(z), φ′(z), …, φ^{(k_max)}(z))` by closed forms.
    pub fn eval_derivs(&self, z: Complex64, k_max: usize) -> Result<Vec<Complex64>> {
        if k_max > MAX_DERIVATIVE {
            return Err(Error::invalid(format!("derivative order {k_max} exceeds {MAX_DERIVATIVE}")));
        }
        self.check_source(z)?;
        Ok((0..=k_max)
            .map(|k| {
                if k == 0 {
                    self.eval(z)
                } else {
                    self.post.a * self.base_deriv(z, k)
                }
            })
            .collect())
    }

    pub(crate) fn check_source(&self, z: Complex64) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) || !self.source().contains(z) {
            return Err(Error::Domain {
                z,
                reason: format!("not in the open source half-plane of {:?}", self.kind),
            });
        }
        Ok(())
    }

    /// Continuous extension of the map to the real line.
    pub fn boundary_value(&self, x: f64) -> Complex64 {
        let b = match self.kind {
            MapKind::IdentityH | MapKind::IdentityL => Complex64::new(x, 0.0),
            MapKind::Power { alpha } => {
                if x >= 0.0 {
                    Complex64::new(x.powf(alpha), 0.0)
                } else {
                    Complex64::from_polar((-x).powf(alpha), alpha * PI)
                }
            }
            MapKind::ExteriorPower { alpha } => {
                let beta = 2.0 - alpha;
                if x >= 0.0 {
                    Complex64::new(x.powf(beta), 0.0)
                } else {
                    Complex64::from_polar((-x).powf(beta), alpha * PI)
                }
            }
            MapKind::Grating { c } => Complex64::new(x, 0.0) + c * Complex64::from_polar(1.0, x),
        };
        self.post.apply(b)
    }

    /// `φ(x + iy) − φ(x)`, accurate when `|y|` is small.
    pub fn boundary_offset(&self, z: Complex64) -> Complex64 {
        let d = match self.kind {
            MapKind::IdentityH | MapKind::IdentityL => Complex64::new(0.0, z.im),
            MapKind::Grating { c } => Complex64::new(0.0, z.im) + c * Complex64::from_polar(1.0, z.re) * (-z.im).exp_m1(),
            _ => self.base_eval(z) - self.post.invert(self.boundary_value(z.re)),
        };
        self.post.a * d
    }

    /// `φ(x + v) − φ(x)` on the real line, accurate when `|v| ≪ |x|` for the
    /// identity and grating maps.
    pub fn boundary_chord(&self, x: f64, v: f64) -> Complex64 {
        match self.kind {
            MapKind::IdentityH | MapKind::IdentityL => self.post.a * v,
            MapKind::Grating { c } => {
                // e^{iv} − 1 = −2 sin²(v/2) + i sin v
                let em1 = Complex64::new(-2.0 * (0.5 * v).sin().powi(2), v.sin());
                self.post.a * (Complex64::new(v, 0.0) + c * Complex64::from_polar(1.0, x) * em1)
            }
            _ => self.boundary_value(x + v) - self.boundary_value(x),
        }
    }

    /// Inverse of the boundary extension: the real `x` with `φ(x) = w` for
    /// `w` on the image of the real line.
    pub fn boundary_inverse(&self, w: Complex64) -> Result<f64> {
        let b = self.post.invert(w);
        match self.kind {
            MapKind::IdentityH | MapKind::IdentityL => Ok(b.re),
            MapKind::Power { alpha } | MapKind::ExteriorPower { alpha } => {
                let beta = match self.kind {
                    MapKind::Power { .. } => alpha,
                    _ => 2.0 - alpha,
                };
                let r = b.norm();
                if r == 0.0 {
                    return Ok(0.0);
                }
                let a = arg_positive(b);
                let s = r.powf(1.0 / beta);
                // the image of ℝ is the two rays arg 0 and arg απ
                if (a - alpha * PI).abs() < (a.min(TAU - a)) {
                    Ok(-s)
                } else {
                    Ok(s)
                }
            }
            MapKind::Grating { c } => {
                // x + c·cos x = Re b is strictly increasing
                let g = |x: f64| x + c * x.cos() - b.re;
                let (mut lo, mut hi) = (b.re - c - 1.0, b.re + c + 1.0);
                let mut x = b.re;
                for _ in 0..100 {
                    let fx = g(x);
                    if fx > 0.0 {
                        hi = x;
                    } else {
                        lo = x;
                    }
                    let step = fx / (1.0 - c * x.sin());
                    let next = x - step;
                    x = if next >= lo && next <= hi { next } else { 0.5 * (lo + hi) };
                    if step.abs() <= 1e-16 * (1.0 + x.abs()) || hi - lo <= 1e-16 * (1.0 + x.abs()) {
                        break;
                    }
                }
                Ok(x)
            }
        }
    }

    /// Starting point for Newton inversion.
    fn seed(&self, b: Complex64) -> Complex64 {
        match self.kind {
            MapKind::IdentityH | MapKind::IdentityL => b,
            MapKind::Grating { c } => {
                if b.im > 2.0 * c {
                    return b;
                }
                // start above the curve point sharing the real part
                let t = Self::new(self.kind).boundary_inverse(Complex64::new(b.re, 0.0)).unwrap_or(b.re);
                let gap = b.im - c * t.sin();
                Complex64::new(t, (gap / (1.0 + c)).max(f64::MIN_POSITIVE))
            }
            MapKind::Power { alpha } => Complex64::from_polar(b.norm().powf(1.0 / alpha), arg_positive(b) / alpha),
            MapKind::ExteriorPower { alpha } => {
                let beta = 2.0 - alpha;
                let mut a = arg_positive(b) - alpha * PI;
                if a < 0.0 {
                    a += TAU;
                }
                -Complex64::from_polar(b.norm().powf(1.0 / beta), a / beta)
            }
        }
    }

    /// `z` in the source half-plane with `|φ(z) − w| ≤ tol`.
    ///
    /// Damped Newton from the asymptotic inverse; iterates are kept inside
    /// the source half-plane. The tolerance is floored at the rounding level
    /// `4ε(1 + |w|)`.
    pub fn inverse(&self, w: Complex64, tol: f64) -> Result<Complex64> {
        if !(tol > 0.0) {
            return Err(Error::invalid("inversion tolerance must be positive"));
        }
        let b = self.post.invert(w);
        let goal = (tol / self.post.a.norm()).max(4.0 * f64::EPSILON * (1.0 + b.norm()));
        let side = self.source();
        let mut z = self.seed(b);
        if !side.contains(z) {
            return Err(Error::InversionFailure { target: w, last: z });
        }
        let mut res = (self.base_eval(z) - b).norm();
        for _ in 0..100 {
            if res <= goal {
                return Ok(z);
            }
            let step = (self.base_eval(z) - b) / self.base_deriv(z, 1);
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let cand = z - step * lambda;
                if side.contains(cand) {
                    let r = (self.base_eval(cand) - b).norm();
                    if r < res {
                        z = cand;
                        res = r;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if res <= goal {
            Ok(z)
        } else {
            Err(Error::InversionFailure { target: w, last: z })
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::invalid(format!("sector opening alpha = {alpha} must lie in (0, 2)")));
    }
    Ok(())
}

/// `f^{(k)}(z)` for `k = 0..=k_max` from `n` samples on the circle
/// `|ζ − z| = r` (trapezoidal Cauchy integral).
pub fn cauchy_derivatives<F>(f: F, z: Complex64, r: f64, k_max: usize, n: usize) -> Vec<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let samples: Vec<(Complex64, Complex64)> = (0..n)
        .map(|j| {
            let e = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
            (e, f(z + r * e))
        })
        .collect();
    let mut fact = 1.0;
    (0..=k_max)
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            let s: Complex64 = samples.iter().map(|(e, v)| v / e.powi(k as i32)).sum();
            s * fact / (n as f64 * r.powi(k as i32))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn catalog() -> Vec<ConformalMap> {
        vec![
            ConformalMap::identity_h(),
            ConformalMap::identity_l(),
            ConformalMap::power(0.5).unwrap(),
            ConformalMap::power(1.5).unwrap(),
            ConformalMap::exterior_power(0.5).unwrap(),
            ConformalMap::exterior_power(1.75).unwrap(),
            ConformalMap::grating(0.5).unwrap(),
            ConformalMap::grating(0.9).unwrap(),
            ConformalMap::power(0.75)
                .unwrap()
                .transformed(Complex64::new(1.0, 2.0), Complex64::new(-3.0, 0.5))
                .unwrap(),
        ]
    }

    fn source_grid(side: HalfPlane) -> Vec<Complex64> {
        let s = if side == HalfPlane::Upper { 1.0 } else { -1.0 };
        let mut out = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                let x = -20.0 + 40.0 * i as f64 / 9.0;
                let y = 10f64.powf(-2.0 + 4.0 * j as f64 / 9.0);
                out.push(Complex64::new(x, s * y));
            }
        }
        out
    }

    #[test]
    fn spot_values() {
        let z = Complex64::new(1.0, 2.0);
        let d = ConformalMap::identity_h().eval_derivs(z, 2).unwrap();
        assert_eq!(d, vec![z, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let g = ConformalMap::grating(0.5).unwrap().eval_derivs(I, 1).unwrap();
        let e = (-1f64).exp();
        assert!(close(g[0], Complex64::new(0.5 * e, 1.0), 1e-15));
        assert!(close(g[1], Complex64::new(1.0, 0.5 * e), 1e-15));
        let p = ConformalMap::power(0.5).unwrap().eval(I);
        let h = 0.5f64.sqrt();
        assert!(close(p, Complex64::new(h, h), 1e-15));
    }

    #[test]
    fn rejects_points_outside_the_source() {
        let m = ConformalMap::power(0.5).unwrap();
        assert!(m.eval_derivs(Complex64::new(1.0, 0.0), 1).is_err());
        assert!(ConformalMap::identity_l().eval_derivs(I, 0).is_err());
        assert!(m.eval_derivs(I, 5).is_err());
        assert!(ConformalMap::grating(1.0).is_err());
        assert!(ConformalMap::power(2.0).is_err());
    }

    #[test]
    fn round_trip_on_grids() {
        for m in catalog() {
            for z in source_grid(m.source()) {
                let w = m.eval(z);
                let back = m.inverse(w, 1e-13 * (1.0 + w.norm())).unwrap_or_else(|e| panic!("{:?} {z} {e}", m.kind()));
                assert!(close(back, z, 1e-10 * (1.0 + z.norm())), "{:?} {z} {back}", m.kind());
            }
        }
    }

    #[test]
    fn inverse_spot_values() {
        let p = ConformalMap::power(0.5).unwrap();
        let z = p.inverse(Complex64::from_polar(1.0, PI / 4.0), 1e-14).unwrap();
        assert!(close(z, I, 1e-14));
        let g = ConformalMap::grating(0.5).unwrap();
        let z0 = Complex64::new(1.0, 1.0);
        assert!(close(g.inverse(g.eval(z0), 1e-14).unwrap(), z0, 1e-10));
    }

    #[test]
    fn derivatives_match_cauchy_integrals() {
        for m in catalog() {
            for z in source_grid(m.source()).into_iter().step_by(7) {
                let r = 0.5 * m.source().depth(z);
                let num = cauchy_derivatives(|q| m.eval(q), z, r, MAX_DERIVATIVE, 128);
                let exact = m.eval_derivs(z, MAX_DERIVATIVE).unwrap();
                // the sampled circle sees values of size max|φ| ≈ |φ(z)| + r|φ′|
                let scale = m.eval(z).norm() + exact[1].norm() * r;
                for k in 1..=MAX_DERIVATIVE {
                    let tol = 1e-8 * exact[k].norm().max(scale * 1e-6 / r.powi(k as i32));
                    assert!(close(num[k], exact[k], tol), "{:?} z={z} k={k} {} {}", m.kind(), num[k], exact[k]);
                }
            }
        }
    }

    #[test]
    fn boundary_traces_and_their_inverse() {
        for m in catalog() {
            let d = if m.source() == HalfPlane::Upper { 1.0 } else { -1.0 };
            for x in [-7.5, -1.0, -0.01, 0.3, 2.0, 11.0] {
                let b = m.boundary_value(x);
                let near = m.eval(Complex64::new(x, d * 1e-9));
                assert!(close(b, near, 1e-7 * (1.0 + b.norm())), "{:?} {x}", m.kind());
                let off = m.boundary_offset(Complex64::new(x, d * 1e-3));
                assert!(close(b + off, m.eval(Complex64::new(x, d * 1e-3)), 1e-12 * (1.0 + b.norm())));
                let xb = m.boundary_inverse(b).unwrap();
                assert!((xb - x).abs() < 1e-10 * (1.0 + x.abs()), "{:?} {x} {xb}", m.kind());
            }
        }
    }

    #[test]
    fn images_are_the_sector_and_its_complement() {
        let (a, b) = (ConformalMap::power(0.75).unwrap(), ConformalMap::exterior_power(0.75).unwrap());
        for z in source_grid(HalfPlane::Upper) {
            let t = arg_positive(a.eval(z));
            assert!(t > 0.0 && t < 0.75 * PI);
            let s = arg_positive(b.eval(z.conj()));
            assert!(s > 0.75 * PI && s < TAU);
        }
    }

    #[test]
    fn grating_derivative_floor() {
        let g = ConformalMap::grating(0.9).unwrap();
        for z in source_grid(HalfPlane::Upper) {
            assert!(g.deriv(z).norm() >= 0.1 - 1e-15);
        }
    }

    #[test]
    fn infinity_is_fixed() {
        for m in catalog() {
            let d = if m.source() == HalfPlane::Upper { 1.0 } else { -1.0 };
            for theta in [0.1, 0.5, 0.9] {
                let z = Complex64::from_polar(1e6, d * theta * PI);
                assert!(m.eval(z).norm() > 10.0, "{:?} {z}", m.kind());
            }
        }
    }
}
