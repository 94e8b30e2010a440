use dashmap::DashMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::map::ConformalMap;
use crate::geometry::Curve;
use crate::{Error, Result};

/// Catalog domains with explicit Riemann maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    /// Ω⁺ = ℍ, Ω⁻ = 𝕃.
    Halfplane,
    /// Ω⁺ = `{0 < arg w < απ}` and its complement.
    Sector { alpha: f64 },
    /// Ω⁺ above the curve `t + c·e^{it}`; no exterior map.
    Grating { c: f64 },
}

/// Which complementary component of `ℂ \ Γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Ω⁺ = φ(ℍ).
    Interior,
    /// Ω⁻ = ψ(𝕃).
    Exterior,
}

/// Above this many entries the δ cache stops growing.
const CACHE_CAP: usize = 1 << 20;

/// Below this depth δ∘φ is computed from the boundary offset.
const ANCHOR_DEPTH: f64 = 1.0;

/// A curve Γ with its interior map φ: ℍ → Ω⁺ and, when available, its
/// exterior map ψ: 𝕃 → Ω⁻.
#[derive(Debug, Clone)]
pub struct Domain {
    kind: DomainKind,
    curve: Curve,
    interior: ConformalMap,
    exterior: Option<ConformalMap>,
    cache: DashMap<(Side, u64, u64), f64>,
}

impl Domain {
    pub fn new(kind: DomainKind) -> Result<Self> {
        let (curve, interior, exterior) = match kind {
            DomainKind::Halfplane => (Curve::line(), ConformalMap::identity_h(), Some(ConformalMap::identity_l())),
            DomainKind::Sector { alpha } => (
                Curve::sector(alpha)?,
                ConformalMap::power(alpha)?,
                Some(ConformalMap::exterior_power(alpha)?),
            ),
            DomainKind::Grating { c } => (Curve::grating(c)?, ConformalMap::grating(c)?, None),
        };
        Ok(Self {
            kind,
            curve,
            interior,
            exterior,
            cache: DashMap::new(),
        })
    }

    pub fn halfplane() -> Self {
        Self::new(DomainKind::Halfplane).expect("half-plane is always valid")
    }

    pub fn sector(alpha: f64) -> Result<Self> {
        Self::new(DomainKind::Sector { alpha })
    }

    pub fn grating(c: f64) -> Result<Self> {
        Self::new(DomainKind::Grating { c })
    }

    /// The image under `w ↦ a·w + b`: curve and maps move together.
    pub fn transformed(&self, a: Complex64, b: Complex64) -> Result<Self> {
        Ok(Self {
            kind: self.kind,
            curve: self.curve.transformed(a, b)?,
            interior: self.interior.transformed(a, b)?,
            exterior: self.exterior.map(|m| m.transformed(a, b)).transpose()?,
            cache: DashMap::new(),
        })
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn interior_map(&self) -> &ConformalMap {
        &self.interior
    }

    pub fn exterior_map(&self) -> Option<&ConformalMap> {
        self.exterior.as_ref()
    }

    /// Short identifier such as `grating:c=0.6`.
    pub fn label(&self) -> String {
        match self.kind {
            DomainKind::Halfplane => "halfplane".into(),
            DomainKind::Sector { alpha } => format!("sector:alpha={alpha}"),
            DomainKind::Grating { c } => format!("grating:c={c}"),
        }
    }

    /// The map onto `side`.
    pub fn map(&self, side: Side) -> Result<&ConformalMap> {
        match side {
            Side::Interior => Ok(&self.interior),
            Side::Exterior => self
                .exterior
                .as_ref()
                .ok_or_else(|| Error::UnsupportedDomain(format!("{} has no exterior map", self.label()))),
        }
    }

    /// `δ(w) = dist(w, Γ)`.
    pub fn delta(&self, w: Complex64) -> f64 {
        self.curve.distance(w).delta
    }

    /// Whether `w` lies in Ω⁺ (`Interior`) or Ω⁻.
    pub fn side_of(&self, w: Complex64) -> Side {
        let b = self.interior.similarity().invert(w);
        let inside = match self.kind {
            DomainKind::Halfplane => b.im > 0.0,
            DomainKind::Sector { alpha } => {
                let a = if b.arg() < 0.0 { b.arg() + std::f64::consts::TAU } else { b.arg() };
                a > 0.0 && a < alpha * std::f64::consts::PI
            }
            DomainKind::Grating { c } => {
                // Γ is the graph of Im over Re; find the curve point with the same real part
                let t = ConformalMap::grating(c)
                    .expect("valid grating")
                    .boundary_inverse(Complex64::new(b.re, 0.0))
                    .unwrap_or(b.re);
                b.im > c * t.sin()
            }
        };
        if inside {
            Side::Interior
        } else {
            Side::Exterior
        }
    }

    /// Curve parameter of the boundary point `φ(x)` (or `ψ(x)`).
    pub fn boundary_param(&self, side: Side, x: f64) -> f64 {
        let signed_pow = |e: f64| x.signum() * x.abs().powf(e);
        match (self.kind, side) {
            (DomainKind::Sector { alpha }, Side::Interior) => signed_pow(alpha),
            (DomainKind::Sector { alpha }, Side::Exterior) => signed_pow(2.0 - alpha),
            _ => x,
        }
    }

    /// Inverse of [`Domain::boundary_param`]: the real `x` whose boundary
    /// image has curve parameter `t`.
    pub fn boundary_preimage(&self, side: Side, t: f64) -> f64 {
        let signed_pow = |e: f64| t.signum() * t.abs().powf(e);
        match (self.kind, side) {
            (DomainKind::Sector { alpha }, Side::Interior) => signed_pow(1.0 / alpha),
            (DomainKind::Sector { alpha }, Side::Exterior) => signed_pow(1.0 / (2.0 - alpha)),
            _ => t,
        }
    }

    /// `δ(φ(z))` for `z` in the source half-plane of `side`'s map, keeping
    /// full relative precision as `z` approaches the real line.
    pub fn delta_pullback(&self, side: Side, z: Complex64) -> Result<f64> {
        let m = self.map(side)?;
        m.check_source(z)?;
        let k = m.similarity().a.norm();
        let depth = m.source().depth(z);
        let base = match self.kind {
            DomainKind::Halfplane => depth,
            DomainKind::Sector { .. } => {
                let wb = m.similarity().invert(m.eval(z));
                self.curve.base().distance(wb).delta
            }
            DomainKind::Grating { c } => {
                let key = (side, z.re.to_bits(), z.im.to_bits());
                if let Some(v) = self.cache.get(&key) {
                    return Ok(*v);
                }
                let base_curve = self.curve.base();
                let d = if depth < ANCHOR_DEPTH {
                    let offset = Complex64::new(0.0, z.im) + c * Complex64::from_polar(1.0, z.re) * (-z.im).exp_m1();
                    base_curve.distance_from_anchor(z.re, offset).delta
                } else {
                    let wb = m.similarity().invert(m.eval(z));
                    base_curve.distance(wb).delta
                };
                let v = k * d;
                if self.cache.len() < CACHE_CAP {
                    self.cache.insert(key, v);
                }
                return Ok(v);
            }
        };
        Ok(k * base)
    }

    /// `Im z·|φ′(z)|` (depth below ℝ for the exterior side).
    pub fn pullback_weight(&self, side: Side, z: Complex64) -> Result<f64> {
        let m = self.map(side)?;
        m.check_source(z)?;
        Ok(m.source().depth(z) * m.deriv(z).norm())
    }

    /// `δ(φ(z))/(Im z·|φ′(z)|)`, which lies in `[1/4, 4]` by Koebe's theorem.
    pub fn poincare_ratio(&self, z: Complex64) -> Result<f64> {
        Ok(self.delta_pullback(Side::Interior, z)? / self.pullback_weight(Side::Interior, z)?)
    }

    /// `φ⁻¹(w)` for `w ∈ Ω⁺`.
    pub fn interior_preimage(&self, w: Complex64) -> Result<Complex64> {
        self.interior.inverse(w, 1e-13 * (1.0 + w.norm()))
    }

    /// The point at height `t` on the conformal vertical ray through `w`:
    /// `φ(x + i(y + t))` where `x + iy = φ⁻¹(w)`.
    pub fn vertical_ray_point(&self, w: Complex64, t: f64) -> Result<Complex64> {
        if !(t >= 0.0) {
            return Err(Error::invalid(format!("ray height must be nonnegative, got {t}")));
        }
        if t == 0.0 {
            return Ok(w);
        }
        let z = self.interior_preimage(w)?;
        Ok(self.interior.eval(z + Complex64::new(0.0, t)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn catalog() -> Vec<Domain> {
        vec![
            Domain::halfplane(),
            Domain::sector(0.5).unwrap(),
            Domain::sector(1.5).unwrap(),
            Domain::grating(0.5).unwrap(),
            Domain::grating(0.9).unwrap(),
            Domain::sector(0.75)
                .unwrap()
                .transformed(Complex64::new(0.0, 2.0), Complex64::new(1.0, -1.0))
                .unwrap(),
        ]
    }

    fn grid() -> Vec<Complex64> {
        let mut out = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                let x = -15.0 + 30.0 * i as f64 / 9.0;
                let y = 10f64.powf(-3.0 + 5.0 * j as f64 / 9.0);
                out.push(Complex64::new(x, y));
            }
        }
        out
    }

    #[test]
    fn traces_lie_on_the_curve() {
        for d in catalog() {
            for x in [-9.0, -2.5, -0.1, 0.0, 0.7, 3.0, 12.0] {
                let b = d.interior_map().boundary_value(x);
                let t = d.boundary_param(Side::Interior, x);
                assert!((d.curve().eval(t) - b).norm() <= 1e-9 * (1.0 + b.norm()), "{} {x}", d.label());
                assert!(d.delta(b) <= 1e-9 * (1.0 + b.norm()));
                if let Some(e) = d.exterior_map() {
                    let b = e.boundary_value(x);
                    let t = d.boundary_param(Side::Exterior, x);
                    assert!((d.curve().eval(t) - b).norm() <= 1e-9 * (1.0 + b.norm()));
                }
            }
        }
    }

    #[test]
    fn koebe_bracket_on_grids() {
        for d in catalog() {
            for z in grid() {
                let r = d.poincare_ratio(z).unwrap();
                assert!((0.25..=4.0).contains(&r), "{} {z} {r}", d.label());
            }
        }
        for z in grid() {
            assert!((Domain::halfplane().poincare_ratio(z).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pullback_delta_matches_direct_distance() {
        for d in catalog() {
            for z in grid() {
                let w = d.interior_map().eval(z);
                let direct = d.delta(w);
                let pulled = d.delta_pullback(Side::Interior, z).unwrap();
                assert!((direct - pulled).abs() <= 1e-9 * (1.0 + w.norm()), "{} {z}", d.label());
            }
        }
    }

    #[test]
    fn pullback_delta_keeps_relative_precision() {
        let d = Domain::grating(0.6).unwrap();
        for x in [-3.0, 0.4, 2.0] {
            let y = 1e-10;
            let v = d.delta_pullback(Side::Interior, Complex64::new(x, y)).unwrap();
            // δ ≈ y·|φ′(x)| to first order
            let lin = y * d.interior_map().deriv(Complex64::new(x, 0.0)).norm();
            assert!((v / lin - 1.0).abs() < 1e-8, "{x} {v} {lin}");
        }
    }

    #[test]
    fn exterior_side_is_unsupported_for_the_grating() {
        let d = Domain::grating(0.3).unwrap();
        assert!(matches!(d.map(Side::Exterior), Err(Error::UnsupportedDomain(_))));
        assert!(d.delta_pullback(Side::Exterior, Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn sides() {
        let d = Domain::sector(0.5).unwrap();
        assert_eq!(d.side_of(Complex64::from_polar(1.0, 0.2 * PI)), Side::Interior);
        assert_eq!(d.side_of(Complex64::from_polar(1.0, 0.7 * PI)), Side::Exterior);
        let g = Domain::grating(0.6).unwrap();
        assert_eq!(g.side_of(Complex64::new(1.0, 0.7)), Side::Interior);
        assert_eq!(g.side_of(Complex64::new(PI / 2.0, 0.5)), Side::Exterior);
    }

    #[test]
    fn vertical_rays() {
        let h = Domain::halfplane();
        let p = h.vertical_ray_point(Complex64::new(0.0, 1.0), 1.0).unwrap();
        assert!((p - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        let s = Domain::sector(0.5).unwrap();
        let w = Complex64::from_polar(1.0, PI / 4.0);
        assert_eq!(s.vertical_ray_point(w, 0.0).unwrap(), w);
        let g = Domain::grating(0.5).unwrap();
        let m = g.interior_map();
        let p = g.vertical_ray_point(m.eval(Complex64::new(0.0, 1.0)), 1.0).unwrap();
        assert!((p - m.eval(Complex64::new(0.0, 2.0))).norm() < 1e-10);
        // distance to Γ grows along the ray
        for d in catalog() {
            let w = d.interior_map().eval(Complex64::new(0.3, 0.05));
            let mut last = d.delta(w);
            for k in 1..40 {
                let t = 0.05 * 1.3f64.powi(k);
                let q = d.vertical_ray_point(w, t).unwrap();
                let now = d.delta(q);
                assert!(now >= last * (1.0 - 1e-12), "{} t={t}", d.label());
                last = now;
            }
        }
    }
}
