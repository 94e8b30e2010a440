use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::{Curve, CurveKind, CurveWindow};
use crate::{Error, Result};

/// Distance from a point to a curve and the parameter realizing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nearest {
    pub delta: f64,
    pub t: f64,
}

const MAX_SAMPLES: usize = 4096;
const MIN_SAMPLES: usize = 64;

impl Curve {
    /// `δ(w) = dist(w, Γ)` over the whole curve.
    ///
    /// Straight pieces use closed forms, the parabola solves its stationarity
    /// cubic, and the remaining kinds search a parameter window that provably
    /// contains the nearest point (each of them is a graph over the real
    /// axis), so no window can be too small.
    pub fn distance(&self, w: Complex64) -> Nearest {
        let k = self.similarity().a.norm();
        let wb = self.similarity().invert(w);
        let base = match self.kind() {
            CurveKind::Line => Nearest {
                delta: wb.im.abs(),
                t: wb.re,
            },
            CurveKind::SectorBoundary { alpha } => sector_nearest(*alpha, wb),
            CurveKind::Polyline { .. } => self.polyline_nearest(wb),
            CurveKind::Parabola { a } => parabola_nearest(*a, wb),
            CurveKind::Grating { .. } | CurveKind::Wiggle { .. } => {
                let t0 = wb.re;
                self.base_nearest_to(t0, wb - self.base_eval(t0))
            }
        };
        Nearest {
            delta: k * base.delta,
            t: base.t,
        }
    }

    /// Distance from `γ(t_anchor) + offset` to the curve, computed from the
    /// offset so that points extremely close to the curve keep full relative
    /// precision.
    pub fn distance_from_anchor(&self, t_anchor: f64, offset: Complex64) -> Nearest {
        let k = self.similarity().a.norm();
        let d = offset / self.similarity().a;
        let base = match self.kind() {
            CurveKind::Grating { .. } | CurveKind::Wiggle { .. } => self.base_nearest_to(t_anchor, d),
            _ => {
                let wb = self.base_eval(t_anchor) + d;
                return self.distance(self.similarity().apply(wb));
            }
        };
        Nearest {
            delta: k * base.delta,
            t: base.t,
        }
    }

    /// Minimizer of `|γ(t) − γ(t_a) − d|` for graph-type curves.
    fn base_nearest_to(&self, t_a: f64, d: Complex64) -> Nearest {
        let r0 = d.norm();
        if r0 == 0.0 {
            return Nearest { delta: 0.0, t: t_a };
        }
        // |Re(γ(t) − γ(t_a))| ≥ (1 − c)|t − t_a| for these curves, and the nearest
        // point is at most r0 away from the query point.
        let (floor, band) = match self.kind() {
            CurveKind::Grating { c } => (1.0 - c, *c),
            _ => (1.0, f64::INFINITY),
        };
        let mut reach = (d.re.abs() + r0) / floor;
        if band.is_finite() {
            // the curve stays within |Im| ≤ band of the axis
            let y = (self.base_eval(t_a) + d).im.abs();
            let dy = (y - band).max(0.0);
            let dx = (r0 * r0 - dy * dy).max(0.0).sqrt();
            reach = reach.min((d.re.abs() + dx + 2.0 * band) / floor);
        }
        let (lo, hi) = (t_a - reach, t_a + reach);
        let lip = self.base_speed_bound(lo, hi);
        let f = |t: f64| (self.base_chord(t_a, t) - d).norm();
        let n = (((hi - lo) / 0.25).ceil() as usize).clamp(MIN_SAMPLES, MAX_SAMPLES);
        branch_and_bound(self, t_a, d, f, lo, hi, n, lip)
    }

    fn base_speed_bound(&self, lo: f64, hi: f64) -> f64 {
        self.speed_bound(lo, hi) / self.similarity().a.norm()
    }

    /// Bound on `|γ″|` of the base curve over `[lo, hi]`; `None` where the
    /// curve is not C² there.
    fn base_accel_bound(&self, lo: f64, hi: f64) -> Option<f64> {
        if self.corners().iter().any(|&c| c > lo && c < hi) {
            return None;
        }
        match self.kind() {
            CurveKind::Grating { c } => Some(*c),
            CurveKind::Parabola { a } => Some(2.0 * a),
            CurveKind::Wiggle { depth } => {
                let d = *depth as f64;
                let m = lo.abs().min(hi.abs());
                (m > 0.0).then(|| 0.25 * (d + d * d) / m)
            }
            _ => Some(0.0),
        }
    }

    fn polyline_nearest(&self, wb: Complex64) -> Nearest {
        let CurveKind::Polyline { points } = self.kind() else {
            unreachable!()
        };
        let mut best = Nearest {
            delta: f64::INFINITY,
            t: 0.0,
        };
        let mut start = 0.0;
        for seg in points.windows(2) {
            let e = seg[1] - seg[0];
            let len = e.norm();
            let s = ((wb - seg[0]) * e.conj()).re / len;
            let s = s.clamp(0.0, len);
            let dist = (wb - seg[0] - e * (s / len)).norm();
            if dist < best.delta {
                best = Nearest {
                    delta: dist,
                    t: start + s,
                };
            }
            start += len;
        }
        best
    }

    /// The distance to the curve restricted to `window`, by dense sampling
    /// plus refinement.
    ///
    /// Fails with [`Error::WindowInsufficient`] when the minimizer sits on a
    /// window end while the curve keeps approaching `w` beyond it.
    pub fn distance_in_window(&self, w: Complex64, window: &CurveWindow) -> Result<Nearest> {
        let (plo, phi) = self.param_range();
        let lo = window.t_lo.max(plo);
        let hi = window.t_hi.min(phi);
        if !(lo < hi) {
            return Err(Error::invalid("window does not meet the curve's parameter range"));
        }
        let k = self.similarity().a.norm();
        let wb = self.similarity().invert(w);
        let t_a = 0.5 * (lo + hi);
        let d = wb - self.base_eval(t_a);
        let f = |t: f64| (self.base_eval(t) - wb).norm();
        let lip = self.base_speed_bound(lo, hi);
        let mut best = branch_and_bound(self, t_a, d, f, lo, hi, window.sample_count.max(MIN_SAMPLES), lip);
        // The graded window samples also count as candidates.
        for s in self.window_params(window) {
            let v = f(s);
            if v < best.delta {
                best = Nearest { delta: v, t: s };
            }
        }
        let tol = 1e-12 * (1.0 + best.t.abs());
        let outward = |t: f64, dir: f64| {
            let g = self.base_eval(t) - wb;
            (g.conj() * self.base_deriv(t)).re * dir < 0.0
        };
        let at_lo = best.t - lo <= tol && lo > plo && outward(lo, -1.0);
        let at_hi = hi - best.t <= tol && hi < phi && outward(hi, 1.0);
        if at_lo || at_hi {
            return Err(Error::WindowInsufficient {
                t_lo: window.t_lo,
                t_hi: window.t_hi,
            });
        }
        Ok(Nearest {
            delta: k * best.delta,
            t: best.t,
        })
    }
}

/// Global minimization of `f(t) = |γ(t) − γ(t_a) − d|` on `[lo, hi]`.
///
/// `f` is Lipschitz with constant `lip` (a speed bound), so a cell whose
/// end values are `f0, f1` cannot go below `(f0 + f1 − lip·h)/2`. Cells that
/// could still beat the incumbent are bisected; local minima of the samples
/// are polished by safeguarded Newton steps. Cells on which `f²` is provably
/// monotone (its derivative cannot vanish given a bound on `|γ″|`) are
/// dropped, which keeps the neighbourhood of a minimizer from being bisected
/// down to rounding level.
#[allow(clippy::too_many_arguments)]
fn branch_and_bound<F: Fn(f64) -> f64>(
    curve: &Curve,
    t_a: f64,
    d: Complex64,
    f: F,
    lo: f64,
    hi: f64,
    n: usize,
    lip: f64,
) -> Nearest {
    let n = n.max(2);
    let h = (hi - lo) / (n - 1) as f64;
    let ts: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + h * i as f64 })
        .collect();
    let vs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut best = Nearest {
        delta: f64::INFINITY,
        t: lo,
    };
    for (&t, &v) in ts.iter().zip(&vs) {
        if v < best.delta {
            best = Nearest { delta: v, t };
        }
    }
    let polish = |t0: f64, a: f64, b: f64, best: &mut Nearest| {
        let t = newton_polish(curve, t_a, d, t0, a, b);
        let v = f(t);
        if v < best.delta {
            *best = Nearest { delta: v, t };
        }
    };
    for i in 0..n {
        let left = if i > 0 { vs[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < n { vs[i + 1] } else { f64::INFINITY };
        if vs[i] <= left && vs[i] <= right {
            let a = ts[i.saturating_sub(1)];
            let b = ts[(i + 1).min(n - 1)];
            polish(ts[i], a, b, &mut best);
        }
    }

    let mut stack: Vec<(f64, f64, f64, f64)> = (0..n - 1)
        .map(|i| (ts[i], ts[i + 1], vs[i], vs[i + 1]))
        .collect();
    let mut budget = 20_000usize;
    while let Some((a, b, fa, fb)) = stack.pop() {
        let lower = 0.5 * (fa + fb - lip * (b - a));
        if lower >= best.delta * (1.0 - 1e-12) || budget == 0 {
            continue;
        }
        budget -= 1;
        let h = b - a;
        if let Some(acc) = curve.base_accel_bound(a, b) {
            let slope = |t: f64| 2.0 * ((curve.base_chord(t_a, t) - d).conj() * curve.base_deriv(t)).re;
            let speed = curve.base_speed_bound(a, b);
            let reach = fa.min(fb) + speed * h;
            let l2 = 2.0 * (speed * speed + reach * acc);
            if slope(a) > l2 * h || slope(b) < -l2 * h {
                continue;
            }
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm < best.delta {
            best = Nearest { delta: fm, t: m };
            polish(m, a, b, &mut best);
        }
        if b - a <= 1e-12 * (1.0 + m.abs()) {
            continue;
        }
        stack.push((a, m, fa, fm));
        stack.push((m, b, fm, fb));
    }
    best
}

/// Safeguarded Newton on `½|γ(t) − γ(t_a) − d|²` inside `[a, b]`, with
/// golden-section fallback.
fn newton_polish(curve: &Curve, t_a: f64, d: Complex64, t0: f64, a: f64, b: f64) -> f64 {
    let g = |t: f64| (curve.base_chord(t_a, t) - d).norm_sqr();
    let mut t = t0;
    let mut gt = g(t);
    for _ in 0..60 {
        let r = curve.base_chord(t_a, t) - d;
        let d1 = curve.base_deriv(t);
        let grad = (r.conj() * d1).re;
        let hess = d1.norm_sqr() + (r.conj() * curve.base_deriv2(t)).re;
        let step = if hess > 0.0 { -grad / hess } else { -grad.signum() * 0.1 * (b - a) };
        let mut tn = (t + step).clamp(a, b);
        let mut gn = g(tn);
        let mut tries = 0;
        while gn > gt && tries < 30 {
            tn = 0.5 * (t + tn);
            gn = g(tn);
            tries += 1;
        }
        if gn > gt {
            break;
        }
        let moved = (tn - t).abs();
        t = tn;
        gt = gn;
        if moved <= 1e-12 * (1.0 + t.abs()) {
            return t;
        }
    }
    golden(&g, a, b, t, gt)
}

fn golden<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64, t_best: f64, g_best: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..200 {
        if b - a <= 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = g(x2);
        }
    }
    let (t, v) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if v < g_best {
        t
    } else {
        t_best
    }
}

fn sector_nearest(alpha: f64, w: Complex64) -> Nearest {
    let on_ray0 = if w.re >= 0.0 {
        Nearest {
            delta: w.im.abs(),
            t: w.re,
        }
    } else {
        Nearest {
            delta: w.norm(),
            t: 0.0,
        }
    };
    let r = w * Complex64::from_polar(1.0, -alpha * PI);
    let on_ray1 = if r.re >= 0.0 {
        Nearest {
            delta: r.im.abs(),
            t: -r.re,
        }
    } else {
        Nearest {
            delta: w.norm(),
            t: 0.0,
        }
    };
    if on_ray1.delta < on_ray0.delta {
        on_ray1
    } else {
        on_ray0
    }
}

/// Stationary points of `|w − (t + i a t²)|²` solve
/// `2a²t³ + (1 − 2aY)t − X = 0`.
fn parabola_nearest(a: f64, w: Complex64) -> Nearest {
    let (x, y) = (w.re, w.im);
    let p = (1.0 - 2.0 * a * y) / (2.0 * a * a);
    let q = -x / (2.0 * a * a);
    let disc = (0.5 * q).powi(2) + (p / 3.0).powi(3);
    let mut roots = Vec::with_capacity(3);
    if disc > 0.0 {
        let s = disc.sqrt();
        roots.push((-0.5 * q + s).cbrt() + (-0.5 * q - s).cbrt());
        roots.push(-q / p.max(f64::MIN_POSITIVE));
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = if m > 0.0 {
            ((3.0 * q) / (p * m)).clamp(-1.0, 1.0).acos() / 3.0
        } else {
            0.0
        };
        for k in 0..3 {
            roots.push(m * (arg - 2.0 * PI * k as f64 / 3.0).cos());
        }
    }
    let g = |t: f64| 2.0 * (t - x) + 4.0 * a * t * (a * t * t - y);
    let dg = |t: f64| 2.0 + 12.0 * a * a * t * t - 4.0 * a * y;
    let dist = |t: f64| Complex64::new(t - x, a * t * t - y).norm();
    let mut best = Nearest {
        delta: dist(x),
        t: x,
    };
    for mut t in roots.into_iter().filter(|t| t.is_finite()) {
        for _ in 0..50 {
            let d = dg(t);
            if d == 0.0 {
                break;
            }
            let step = g(t) / d;
            t -= step;
            if step.abs() <= 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        let v = dist(t);
        if v < best.delta {
            best = Nearest { delta: v, t };
        }
    }
    best
}
