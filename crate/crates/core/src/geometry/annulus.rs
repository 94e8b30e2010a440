use num_complex::Complex64;

use super::curve::{Curve, CurveKind, CurveWindow};
use crate::quadrature::{integrate_1d, Interval, QuadratureSpec};
use crate::{Error, Result};

const SAMPLES: usize = 4097;
const LENGTH_TOL: f64 = 1e-12;

impl Curve {
    /// A parameter range that contains every `t` with `|γ(t) − w| ≤ r`.
    fn ball_param_range(&self, w: Complex64, r: f64) -> (f64, f64) {
        let k = self.similarity().a.norm();
        let wb = self.similarity().invert(w);
        let rb = r / k;
        match self.kind() {
            // graphs over the real axis with Re γ(t) = t (+ c cos t)
            CurveKind::Line | CurveKind::Parabola { .. } | CurveKind::Wiggle { .. } => (wb.re - rb, wb.re + rb),
            CurveKind::Grating { c } => (wb.re - rb - c, wb.re + rb + c),
            // arc length from the vertex equals |γ(t)|
            CurveKind::SectorBoundary { .. } => {
                let m = wb.norm() + rb;
                (-m, m)
            }
            CurveKind::Polyline { .. } => self.param_range(),
        }
    }

    /// Parameter intervals on which `r_in ≤ |γ(t) − w| ≤ r_out`.
    pub fn annulus_arcs(&self, w: Complex64, r_in: f64, r_out: f64) -> Result<Vec<(f64, f64)>> {
        if !(r_in >= 0.0 && r_out > r_in && r_out.is_finite()) {
            return Err(Error::invalid(format!("annulus needs 0 ≤ r_in < r_out < ∞, got [{r_in}, {r_out}]")));
        }
        let (lo, hi) = self.ball_param_range(w, r_out);
        if !(lo < hi) {
            return Ok(Vec::new());
        }
        let ts = self.window_params(&CurveWindow::new(lo, hi, SAMPLES)?);
        let inside = |t: f64| {
            let d = (self.eval(t) - w).norm();
            d >= r_in && d <= r_out
        };
        // boundary between in and out on [a, b], inside(a) != inside(b)
        let cross = |mut a: f64, mut b: f64| {
            let ia = inside(a);
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if inside(m) == ia {
                    a = m;
                } else {
                    b = m;
                }
            }
            0.5 * (a + b)
        };
        let mut out = Vec::new();
        let mut start = if inside(ts[0]) { Some(ts[0]) } else { None };
        for pair in ts.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            match (start, inside(b)) {
                (None, true) => start = Some(cross(a, b)),
                (Some(s), false) => {
                    out.push((s, cross(a, b)));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, *ts.last().unwrap()));
        }
        Ok(out)
    }

    /// `ℓ(Γ ∩ {r_in ≤ |z − w| ≤ r_out})`.
    pub fn annulus_length(&self, w: Complex64, r_in: f64, r_out: f64) -> Result<f64> {
        self.annulus_arcs(w, r_in, r_out)?
            .into_iter()
            .map(|(a, b)| self.arc_length(a, b, LENGTH_TOL))
            .sum()
    }

    /// `ℓ(Γ ∩ B(w, r))`.
    pub fn disk_length(&self, w: Complex64, r: f64) -> Result<f64> {
        self.annulus_length(w, 0.0, r)
    }

    /// `∫_{Γ ∩ B(w, r)} |dz|/|z − w|²`.
    pub fn ball_kernel_integral(&self, w: Complex64, r: f64, quad: &QuadratureSpec) -> Result<f64> {
        let mut total = 0.0;
        for (a, b) in self.annulus_arcs(w, 0.0, r)? {
            let iv = Interval::new(a, b).with_breakpoints(self.corners());
            let res = integrate_1d(|t| self.deriv(t).norm() / (self.eval(t) - w).norm_sqr(), &iv, quad);
            total += res.certified("ball kernel integral")?.value;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn line_chords() {
        let l = Curve::line();
        // chord of a circle of radius r at height h
        let len = l.disk_length(c(0.3, 1.0), 2.0).unwrap();
        assert!((len - 2.0 * 3f64.sqrt()).abs() < 1e-9, "{len}");
        let ann = l.annulus_length(c(0.0, 1.0), 5.0, 6.0).unwrap();
        let oracle = 2.0 * ((35f64).sqrt() - (24f64).sqrt());
        assert!((ann - oracle).abs() < 1e-9, "{ann}");
        assert_eq!(l.disk_length(c(0.0, 3.0), 2.0).unwrap(), 0.0);
    }

    #[test]
    fn line_kernel_integral() {
        // ∫_{|x|<√3} dx/(x² + 1) = 2 atan √3
        let v = Curve::line()
            .ball_kernel_integral(c(0.0, 1.0), 2.0, &QuadratureSpec::default())
            .unwrap();
        assert!((v - 2.0 * PI / 3.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn sector_vertex_ball() {
        // ball about the vertex of radius r meets both rays in length r
        let s = Curve::sector(0.5).unwrap();
        let len = s.disk_length(c(0.0, 0.0), 1.5).unwrap();
        assert!((len - 3.0).abs() < 1e-9, "{len}");
    }

    #[test]
    fn similarity_scales_length() {
        let g = Curve::grating(0.6).unwrap();
        let gt = g.transformed(c(0.0, 2.0), c(1.0, 1.0)).unwrap();
        let w = c(0.5, 1.2);
        let a = g.annulus_length(w, 0.5, 2.0).unwrap();
        let b = gt.annulus_length(c(0.0, 2.0) * w + c(1.0, 1.0), 1.0, 4.0).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-8 * b, "{a} {b}");
    }

    #[test]
    fn connected_curve_crosses_every_annulus() {
        // an unbounded curve through B(w, δ) crosses {5δ ≤ |z − w| ≤ 6δ} twice
        let g = Curve::grating(0.9).unwrap();
        for w in [c(0.0, 2.0), c(1.0, 0.5), c(-3.0, 7.0)] {
            let d = g.distance(w).delta;
            assert!(g.annulus_length(w, 5.0 * d, 6.0 * d).unwrap() >= 2.0 * d);
            assert!(g.disk_length(w, 2.0 * d).unwrap() >= 2.0 * d);
        }
    }

    #[test]
    fn bad_radii() {
        assert!(Curve::line().annulus_arcs(c(0.0, 1.0), 2.0, 1.0).is_err());
    }
}
