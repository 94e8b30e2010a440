use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curve::{Curve, CurveWindow};
use super::meyer_david::meyer_david_ratio;
use crate::{Error, Result};

/// Tolerance used for arc lengths inside the sup-type constants.
const LENGTH_TOL: f64 = 1e-12;

/// A sampled curve point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub t: f64,
    pub point: Complex64,
    pub tangent: Complex64,
}

/// A supremum together with the arguments that realize it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witnessed<W> {
    pub value: f64,
    pub witness: W,
}

impl Curve {
    /// Monotone parameter grid for `window`: `sample_count` uniform points
    /// plus geometric refinement (ratio 2, down to 1e-6 of the spacing)
    /// toward every corner inside the window.
    pub fn window_params(&self, window: &CurveWindow) -> Vec<f64> {
        let (plo, phi) = self.param_range();
        let lo = window.t_lo.max(plo);
        let hi = window.t_hi.min(phi);
        let n = window.sample_count.max(2);
        let h = (hi - lo) / (n - 1) as f64;
        let mut ts: Vec<f64> = (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + h * i as f64 })
            .collect();
        for c in self.corners() {
            if c < lo || c > hi {
                continue;
            }
            ts.push(c);
            let mut d = 0.5 * h;
            while d >= 1e-6 * h {
                for t in [c - d, c + d] {
                    if t > lo && t < hi {
                        ts.push(t);
                    }
                }
                d *= 0.5;
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts
    }

    /// Points and tangents on the window grid.
    pub fn window_samples(&self, window: &CurveWindow) -> Vec<CurveSample> {
        self.window_params(window)
            .into_iter()
            .map(|t| CurveSample {
                t,
                point: self.eval(t),
                tangent: self.deriv(t),
            })
            .collect()
    }

    /// Arc length from the first grid point to every grid point.
    fn cumulative_lengths(&self, ts: &[f64]) -> Result<Vec<f64>> {
        let pieces: Vec<f64> = ts
            .par_windows(2)
            .map(|w| self.arc_length(w[0], w[1], LENGTH_TOL))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(ts.len());
        out.push(0.0);
        for p in pieces {
            out.push(out.last().unwrap() + p);
        }
        Ok(out)
    }

    /// `ℓ(t1, t2)/|γ(t1) − γ(t2)|`.
    pub fn chord_arc_ratio(&self, t1: f64, t2: f64) -> Result<f64> {
        let (a, b) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let chord = self.chord(a, b).norm();
        if a == b {
            return Ok(1.0);
        }
        if chord < 1e-14 {
            return Err(Error::InjectivityViolation { t1: a, t2: b });
        }
        Ok(self.arc_length(a, b, LENGTH_TOL)? / chord)
    }

    /// `ℓ(Γ ∩ B(γ(t_c), r))/r`, counting only the part of Γ inside `window`.
    pub fn ahlfors_ratio(&self, t_c: f64, r: f64, window: &CurveWindow) -> Result<f64> {
        let ts = self.window_params(window);
        Ok(self.ball_length(&ts, t_c, r)? / r)
    }

    fn ball_length(&self, ts: &[f64], t_c: f64, r: f64) -> Result<f64> {
        let f = |t: f64| self.chord(t_c, t).norm() - r;
        let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
        let root = |mut a: f64, mut b: f64| {
            let fa_neg = f(a) < 0.0;
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if (f(m) < 0.0) == fa_neg {
                    a = m;
                } else {
                    b = m;
                }
            }
            0.5 * (a + b)
        };
        let mut total = 0.0;
        let mut start: Option<f64> = if vals[0] < 0.0 { Some(ts[0]) } else { None };
        for i in 1..ts.len() {
            let (inside_prev, inside_now) = (vals[i - 1] < 0.0, vals[i] < 0.0);
            if inside_now && !inside_prev {
                start = Some(root(ts[i - 1], ts[i]));
            } else if !inside_now && inside_prev {
                let end = root(ts[i - 1], ts[i]);
                total += self.arc_length(start.take().unwrap(), end, LENGTH_TOL)?;
            }
        }
        if let Some(s) = start {
            total += self.arc_length(s, *ts.last().unwrap(), LENGTH_TOL)?;
        }
        Ok(total)
    }
}

/// Sup of `ℓ(t1, t2)/|γ(t1) − γ(t2)|` over grid pairs, refined by
/// golden-section search around the best pair.
pub fn chord_arc_constant(curve: &Curve, window: &CurveWindow) -> Result<Witnessed<(f64, f64)>> {
    let ts = curve.window_params(window);
    let cum = curve.cumulative_lengths(&ts)?;
    let n = ts.len();
    let best = (0..n)
        .into_par_iter()
        .map(|i| -> Result<(f64, usize, usize)> {
            let mut best = (1.0, i, i);
            for j in i + 1..n {
                let chord = curve.chord(ts[i], ts[j]).norm();
                if chord < 1e-14 {
                    return Err(Error::InjectivityViolation { t1: ts[i], t2: ts[j] });
                }
                let r = (cum[j] - cum[i]) / chord;
                if r > best.0 {
                    best = (r, i, j);
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((1.0, 0, 0), |a, b| if b.0 > a.0 { b } else { a });
    let (_, i, j) = best;
    if i == j {
        return Ok(Witnessed {
            value: 1.0,
            witness: (ts[0], ts[0]),
        });
    }
    let (lo, hi) = (ts[0], ts[n - 1]);
    let bracket = |k: usize| (ts[k.saturating_sub(1)].max(lo), ts[(k + 1).min(n - 1)].min(hi));
    let (mut t1, mut t2) = (ts[i], ts[j]);
    let mut value = curve.chord_arc_ratio(t1, t2)?;
    let (b1, b2) = (bracket(i), bracket(j));
    for _ in 0..4 {
        let (a1, c1) = (b1.0, b1.1.min(t2));
        let s1 = golden_max(|s| curve.chord_arc_ratio(s, t2).unwrap_or(0.0), a1, c1, t1, value);
        let v1 = curve.chord_arc_ratio(s1, t2)?;
        if v1 > value {
            t1 = s1;
            value = v1;
        }
        let (a2, c2) = (b2.0.max(t1), b2.1);
        let s2 = golden_max(|s| curve.chord_arc_ratio(t1, s).unwrap_or(0.0), a2, c2, t2, value);
        let v2 = curve.chord_arc_ratio(t1, s2)?;
        if v2 > value {
            t2 = s2;
            value = v2;
        }
    }
    Ok(Witnessed {
        value,
        witness: (t1, t2),
    })
}

fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, t0: f64, v0: f64) -> f64 {
    if !(b > a) {
        return t0;
    }
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if b - a <= 1e-12 * (1.0 + a.abs()) {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    let (t, v) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    if v > v0 {
        t
    } else {
        t0
    }
}

/// Default radii: 32 log-spaced values from twice the grid spacing to the
/// window width.
pub fn default_radii(window: &CurveWindow) -> Vec<f64> {
    let h = window.width() / (window.sample_count.max(2) - 1) as f64;
    log_space(2.0 * h, window.width(), 32)
}

pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Sup of `ℓ(Γ ∩ B(z, r))/r` over centres `z` on the window grid and the
/// given radii. Centres on the curve only; arbitrary centres can raise the
/// constant by at most a factor 2.
pub fn ahlfors_constant(curve: &Curve, window: &CurveWindow, radii: &[f64]) -> Result<Witnessed<(f64, f64)>> {
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::invalid("radii must be positive and finite"));
    }
    let ts = curve.window_params(window);
    let best = ts
        .par_iter()
        .map(|&tc| -> Result<(f64, f64, f64)> {
            let mut best = (0.0, tc, radii[0]);
            for &r in radii {
                let v = curve.ball_length(&ts, tc, r)? / r;
                if v > best.0 {
                    best = (v, tc, r);
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((0.0, ts[0], radii[0]), |a, b| if b.0 > a.0 { b } else { a });
    let value = curve.ball_length(&ts, best.1, best.2)? / best.2;
    Ok(Witnessed {
        value,
        witness: (best.1, best.2),
    })
}

/// Probe points `γ(t) + s·n(t)` (unit normal `n`, pointing into Ω⁺ for
/// `s > 0`) with `t` spread over the middle half of the window and signed
/// offsets `s` given in units of the curve's scale. Probes that land on the
/// curve (an offset from a corner along one side can meet the other) are
/// dropped.
pub fn probe_grid(curve: &Curve, window: &CurveWindow, t_count: usize, offsets: &[f64]) -> Vec<Complex64> {
    let (plo, phi) = curve.param_range();
    let lo = window.t_lo.max(plo);
    let hi = window.t_hi.min(phi);
    let c = 0.5 * (lo + hi);
    let q = 0.25 * (hi - lo);
    let k = curve.similarity().a.norm();
    let mut out = Vec::with_capacity(t_count * offsets.len());
    for i in 0..t_count {
        let t = if t_count == 1 {
            c
        } else {
            c - q + 2.0 * q * i as f64 / (t_count - 1) as f64
        };
        let tan = curve.deriv(t);
        let normal = Complex64::new(0.0, 1.0) * tan / tan.norm();
        for &s in offsets {
            let w = curve.eval(t) + normal * (s * k);
            if curve.distance(w).delta > 1e-6 * s.abs() * k {
                out.push(w);
            }
        }
    }
    out
}

/// Sup of the Meyer–David ratio over `probes`.
pub fn meyer_david_sup(
    curve: &Curve,
    window: &CurveWindow,
    probes: &[Complex64],
    tol: f64,
) -> Result<Witnessed<Complex64>> {
    let vals = probes
        .par_iter()
        .map(|&w| meyer_david_ratio(curve, w, window, tol).map(|m| (m.ratio, w)))
        .collect::<Result<Vec<_>>>()?;
    let (value, witness) = vals
        .into_iter()
        .fold((f64::NEG_INFINITY, Complex64::new(0.0, 0.0)), |a, b| if b.0 > a.0 { b } else { a });
    Ok(Witnessed { value, witness })
}

/// Curve regularity constants on one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub curve: String,
    pub window: CurveWindow,
    pub chord_arc_constant: f64,
    pub chord_arc_witness: (f64, f64),
    pub ahlfors_constant: f64,
    /// `(centre parameter, radius)`.
    pub ahlfors_witness: (f64, f64),
    pub meyer_david_sup: f64,
    pub meyer_david_witness: Complex64,
}

/// Default Meyer–David probe offsets.
pub const PROBE_OFFSETS: [f64; 5] = [-2.0, -0.5, 0.5, 2.0, 8.0];

/// Chord-arc, Ahlfors and Meyer–David constants of `curve` on `window`.
pub fn diagnose(curve: &Curve, window: &CurveWindow) -> Result<DiagnosticsReport> {
    let ca = chord_arc_constant(curve, window)?;
    let ah = ahlfors_constant(curve, window, &default_radii(window))?;
    let probes = probe_grid(curve, window, 5, &PROBE_OFFSETS);
    let md = meyer_david_sup(curve, window, &probes, 1e-8)?;
    Ok(DiagnosticsReport {
        curve: curve.label(),
        window: *window,
        chord_arc_constant: ca.value,
        chord_arc_witness: ca.witness,
        ahlfors_constant: ah.value,
        ahlfors_witness: ah.witness,
        meyer_david_sup: md.value,
        meyer_david_witness: md.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn uniform_grid_without_corners() {
        let w = CurveWindow::new(0.0, 1.0, 3).unwrap();
        assert_eq!(Curve::line().window_params(&w), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn grading_toward_the_vertex() {
        let s = Curve::sector(0.5).unwrap();
        let w = CurveWindow::new(-1.0, 1.0, 11).unwrap();
        let ts = s.window_params(&w);
        let pos: Vec<f64> = ts.iter().copied().filter(|&t| t > 0.0 && t < 0.1).collect();
        // consecutive points near the vertex differ by a factor 2
        for p in pos.windows(2) {
            assert!((p[1] / p[0] - 2.0).abs() < 1e-12);
        }
        assert!(pos[0] <= 1e-6 * 0.2 * 2.0);
    }

    #[test]
    fn line_constants() {
        let line = Curve::line();
        let w = CurveWindow::new(-5.0, 5.0, 101).unwrap();
        assert!((chord_arc_constant(&line, &w).unwrap().value - 1.0).abs() < 1e-12);
        let ah = ahlfors_constant(&line, &w, &[0.5, 1.0, 2.0]).unwrap();
        assert!((ah.value - 2.0).abs() < 1e-9, "{}", ah.value);
    }

    #[test]
    fn sector_chord_arc() {
        for alpha in [0.25, 0.5, 1.5] {
            let s = Curve::sector(alpha).unwrap();
            let w = CurveWindow::symmetric(10.0, 201).unwrap();
            let ca = chord_arc_constant(&s, &w).unwrap();
            let exact = 1.0 / (alpha * PI / 2.0).sin();
            assert!((ca.value / exact - 1.0).abs() < 1e-3, "{alpha} {} {exact}", ca.value);
            let again = s.chord_arc_ratio(ca.witness.0, ca.witness.1).unwrap();
            assert!((again - ca.value).abs() < 1e-12);
        }
    }

    #[test]
    fn grating_chord_arc_bound() {
        for c in [0.3, 0.6, 0.9] {
            let g = Curve::grating(c).unwrap();
            let ca = chord_arc_constant(&g, &g.default_window()).unwrap();
            assert!(ca.value >= 1.0 && ca.value <= (1.0 + c) / (1.0 - c));
        }
    }

    #[test]
    fn sector_vertex_ahlfors() {
        // centre at distance r/√2 from the vertex of a right angle sees
        // r(1 + √2) of curve
        let s = Curve::sector(0.5).unwrap();
        let w = CurveWindow::symmetric(4.0, 801).unwrap();
        let v = s.ahlfors_ratio(1.0 / 2f64.sqrt(), 1.0, &w).unwrap();
        assert!((v - (1.0 + 2f64.sqrt())).abs() < 1e-9, "{v}");
    }
}
