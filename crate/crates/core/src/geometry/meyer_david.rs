use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::{grating_period_length, Curve, CurveKind, CurveWindow};
use crate::quadrature::{integrate_1d, Interval, QuadratureSpec};
use crate::{Error, Result};

/// `δ(w)·∫_Γ |dz|/|z − w|²`, split into the window part and the two ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeyerDavid {
    pub ratio: f64,
    pub delta: f64,
    pub window_part: f64,
    pub tail_part: f64,
    /// Certified upper bound for `δ(w)·∫` over the parts of Γ outside the
    /// window (0 for finite curves).
    pub tail_bound: f64,
    pub error_estimate: f64,
    /// The curve is a finite polyline, so the integral only covers the arc.
    pub finite_curve_only: bool,
}

/// The Meyer–David ratio at `w`.
///
/// The window part is integrated adaptively with the nearest point as a
/// feature. Non-oscillating ends are integrated to ∞ by compactification.
/// The grating's ends are integrated period by period out to a radius where
/// the averaged asymptotic remainder is below tolerance; the wiggle's ends
/// are integrated in `ln t`, where they decay exponentially.
pub fn meyer_david_ratio(curve: &Curve, w: Complex64, window: &CurveWindow, tol: f64) -> Result<MeyerDavid> {
    if !(tol > 0.0) {
        return Err(Error::invalid("meyer_david_ratio tolerance must be positive"));
    }
    // The ratio is similarity invariant; work on the base curve.
    let base = curve.base();
    let wb = curve.similarity().invert(w);
    let near = base.distance(wb);
    let delta = near.delta;
    if !(delta > 1e-14 * (1.0 + wb.norm())) {
        return Err(Error::Domain {
            z: w,
            reason: "point lies on the curve".into(),
        });
    }
    let (plo, phi) = base.param_range();
    let lo = window.t_lo.max(plo);
    let hi = window.t_hi.min(phi);
    if !(lo < hi) {
        return Err(Error::invalid("window does not meet the curve"));
    }
    let integrand = |t: f64| base.base_deriv(t).norm() / (base.base_eval(t) - wb).norm_sqr();
    let speed = base.speed_bound(lo, hi).max(1.0);
    let mut spec = QuadratureSpec::default()
        .with_rel_tol(1e-12)
        .with_abs_tol(0.1 * tol / delta);

    let mut iv = Interval::new(lo, hi)
        .with_breakpoints(base.corners())
        .with_cluster(near.t, delta / speed);
    if let CurveKind::Grating { .. } = base.kind() {
        iv = iv.with_breakpoints(period_marks(lo, hi));
    }
    spec.max_subdivisions += 4 * iv.breakpoints.len();
    let inside = integrate_1d(integrand, &iv, &spec);
    if !inside.converged {
        return Err(Error::Quadrature(format!("Meyer–David window integral at {w}")));
    }

    if !base.is_unbounded() {
        let value = delta * inside.value;
        return Ok(MeyerDavid {
            ratio: value,
            delta,
            window_part: value,
            tail_part: 0.0,
            tail_bound: 0.0,
            error_estimate: delta * inside.error_estimate,
            finite_curve_only: true,
        });
    }

    let tail_tol = 0.25 * tol / delta;
    let (tail, tail_err) = match base.kind() {
        CurveKind::Grating { c } => {
            let r = grating_tail(*c, wb, hi, 1.0, tail_tol)?;
            let l = grating_tail(*c, wb, lo, -1.0, tail_tol)?;
            (r.0 + l.0, r.1 + l.1)
        }
        CurveKind::Wiggle { .. } => {
            let r = log_tail(&base, wb, hi, 1.0, tail_tol)?;
            let l = log_tail(&base, wb, lo, -1.0, tail_tol)?;
            (r.0 + l.0, r.1 + l.1)
        }
        _ => {
            let s = QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(0.5 * tail_tol);
            let scale = |t: f64| (t - wb.re).abs().max(1.0);
            let right = integrate_1d(integrand, &Interval::new(hi, f64::INFINITY).with_scale(scale(hi)), &s);
            let left = integrate_1d(integrand, &Interval::new(f64::NEG_INFINITY, lo).with_scale(scale(lo)), &s);
            if !(right.converged && left.converged) {
                return Err(Error::Quadrature(format!("Meyer–David tails at {w}")));
            }
            (right.value + left.value, right.error_estimate + left.error_estimate)
        }
    };
    let bound = tail_upper_bound(&base, wb, lo, hi);
    let window_part = delta * inside.value;
    let tail_part = delta * tail;
    Ok(MeyerDavid {
        ratio: window_part + tail_part,
        delta,
        window_part,
        tail_part,
        tail_bound: delta * bound,
        error_estimate: delta * (inside.error_estimate + tail_err),
        finite_curve_only: false,
    })
}

fn period_marks(lo: f64, hi: f64) -> Vec<f64> {
    let k0 = (lo / PI).ceil() as i64;
    let k1 = (hi / PI).floor() as i64;
    if k1 - k0 > 200_000 {
        return Vec::new();
    }
    (k0..=k1).map(|k| k as f64 * PI).collect()
}

/// Upper bound of `∫ |γ′|/|γ − w|²` outside `[lo, hi]` from a speed bound
/// and a lower bound for `|γ(t) − w|` on each end.
fn tail_upper_bound(curve: &Curve, w: Complex64, lo: f64, hi: f64) -> f64 {
    let inv = |gap: f64, speed: f64| if gap > 0.0 { speed / gap } else { f64::INFINITY };
    match curve.kind() {
        // |Re(γ(t) − w)| ≥ |t − Re w| − c
        CurveKind::Line => inv(hi - w.re, 1.0) + inv(w.re - lo, 1.0),
        CurveKind::Grating { c } => inv(hi - w.re - c, 1.0 + c) + inv(w.re - lo - c, 1.0 + c),
        CurveKind::Parabola { a } => {
            // |γ − w| ≥ a t² − |w| ≥ a t²/2 once a t² ≥ 2|w|, and |γ′| ≤ 1 + 2a|t|
            let end = |t: f64| {
                if t <= 0.0 || a * t * t < 2.0 * w.norm() {
                    f64::INFINITY
                } else {
                    4.0 / (3.0 * a * a * t.powi(3)) + 4.0 / (a * t * t)
                }
            };
            end(hi) + end(-lo)
        }
        // |γ(t)| ≥ |t|, so |γ(t) − w| ≥ |t| − |w|
        _ => {
            let speed = curve.speed_bound(0.0, 0.0);
            inv(hi - w.norm(), speed) + inv(-lo - w.norm(), speed)
        }
    }
}

/// `∫` over `t ≥ edge` (dir = 1) or `t ≤ edge` (dir = −1) for the grating.
fn grating_tail(c: f64, w: Complex64, edge: f64, dir: f64, tol: f64) -> Result<(f64, f64)> {
    let curve = Curve::grating(c)?;
    let f = |t: f64| curve.base_deriv(t).norm() / (curve.base_eval(t) - w).norm_sqr();
    let mean_speed = grating_period_length(c) / TAU;
    // Remainder beyond radius T after replacing the speed by its mean and
    // |γ − w| by |t − Re w|: both corrections are O(T^{-2}).
    let remainder_err = |tp: f64| {
        (4.0 * PI * c + 4.0 * c * mean_speed + mean_speed * (c + w.im.abs()).powi(2) / tp) / (tp * tp)
    };
    let dist0 = dir * (edge - w.re) - c;
    let mut far = dist0.max(1.0);
    while remainder_err(far) > 0.5 * tol && far < 1e6 {
        far *= 2.0;
    }
    let mut stop = edge + dir * (far - dist0.min(far)).max(0.0);
    // align the numeric stretch to whole periods
    let periods = ((stop - edge).abs() / TAU).ceil();
    stop = edge + dir * periods * TAU;
    let (a, b) = if dir > 0.0 { (edge, stop) } else { (stop, edge) };
    let marks = period_marks(a, b);
    let spec = QuadratureSpec {
        max_subdivisions: 2000 + 4 * marks.len(),
        ..QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(0.25 * tol)
    };
    let mid = if b > a {
        let r = integrate_1d(f, &Interval::new(a, b).with_breakpoints(marks), &spec);
        if !r.converged {
            return Err(Error::Quadrature("grating Meyer–David tail".into()));
        }
        (r.value, r.error_estimate)
    } else {
        (0.0, 0.0)
    };
    let tp = dir * (stop - w.re);
    if tp <= c {
        return Err(Error::TruncationInsufficient {
            radius: stop.abs(),
            target: tol,
            bound: f64::INFINITY,
        });
    }
    let rest = mean_speed / tp;
    let rest_err = remainder_err(tp - c);
    Ok((mid.0 + rest, mid.1 + rest_err))
}

/// Wiggle ends integrated in `u = ln|t|`, where the integrand decays like `e^{-u}`.
fn log_tail(curve: &Curve, w: Complex64, edge: f64, dir: f64, tol: f64) -> Result<(f64, f64)> {
    let start = edge.abs().max(2.0 * w.norm() + 1.0);
    let f = |u: f64| {
        let t = dir * u.exp();
        let g = curve.base_deriv(t).norm() / (curve.base_eval(t) - w).norm_sqr();
        g * u.exp()
    };
    let spec = QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(0.25 * tol);
    let u0 = start.ln();
    // e^{-u}·(speed/(1 − |w|/|t|)²) is below tol/4 past u1
    let speed = curve.speed_bound(0.0, 0.0);
    let u1 = u0 + (4.0 * speed * 4.0 / (tol * start)).ln().max(1.0);
    let CurveKind::Wiggle { depth } = curve.kind() else {
        unreachable!()
    };
    let step = PI / *depth as f64;
    let marks: Vec<f64> = (1..)
        .map(|k| u0 + k as f64 * step)
        .take_while(|&u| u < u1)
        .collect();
    let r = integrate_1d(f, &Interval::new(u0, u1).with_breakpoints(marks), &spec);
    if !r.converged {
        return Err(Error::Quadrature("wiggle Meyer–David tail".into()));
    }
    let beyond = 4.0 * speed * (-u1).exp();
    // the stretch between the window edge and `start`, if any
    let (a, b) = if dir > 0.0 { (edge, start) } else { (-start, edge) };
    let gap = if b > a {
        let g = |t: f64| curve.base_deriv(t).norm() / (curve.base_eval(t) - w).norm_sqr();
        let r2 = integrate_1d(g, &Interval::new(a, b), &spec);
        if !r2.converged {
            return Err(Error::Quadrature("wiggle Meyer–David tail".into()));
        }
        (r2.value, r2.error_estimate)
    } else {
        (0.0, 0.0)
    };
    Ok((r.value + gap.0, r.error_estimate + beyond + gap.1))
}
