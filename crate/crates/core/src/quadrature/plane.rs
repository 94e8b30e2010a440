use super::adaptive::{integrate_1d, integrate_generic};
use super::{Carry, IntegralValue, Interval, QuadratureSpec};
use crate::{Error, Result};

/// Product domain `x × y` for [`integrate_2d_graded`].
#[derive(Debug, Clone, PartialEq)]
pub struct Rectangle {
    pub x: Interval,
    pub y: Interval,
}

impl Rectangle {
    pub fn new(x: Interval, y: Interval) -> Self {
        Self { x, y }
    }
}

/// Iterated integral `∫_outer ∫_{inner(a)} f(a, b) db da`.
///
/// The outer quadrature runs with parallel node evaluation; each inner
/// integral is sequential. Inner error estimates are integrated alongside
/// the values and added to the outer estimate, so the reported error covers
/// both levels, and convergence is judged on that total.
pub fn integrate_iterated<I, F>(
    outer: &Interval,
    inner: I,
    f: F,
    spec: &QuadratureSpec,
) -> IntegralValue
where
    I: Fn(f64) -> Interval + Sync,
    F: Fn(f64, f64) -> f64 + Sync,
{
    let ospec = QuadratureSpec {
        rel_tol: 0.5 * spec.rel_tol,
        abs_tol: 0.5 * spec.abs_tol,
        ..*spec
    };
    // The inner absolute floor is spread over the outer range by a density of
    // unit mass, so the integrated floor stays below a quarter of `abs_tol`
    // even on unbounded ranges.
    let density = |a: f64| -> f64 {
        if outer.lo.is_finite() && outer.hi.is_finite() {
            1.0 / (outer.hi - outer.lo)
        } else {
            let l = outer.scale.max(f64::MIN_POSITIVE);
            let d = (a - outer.center) / l;
            let half = if outer.lo.is_finite() || outer.hi.is_finite() { 2.0 } else { 1.0 };
            half / (std::f64::consts::PI * l * (1.0 + d * d))
        }
    };
    let g = |a: f64| -> Carry {
        let iv = inner(a);
        let ispec = QuadratureSpec {
            abs_tol: (0.25 * spec.abs_tol * density(a)).max(f64::MIN_POSITIVE),
            ..spec.inner()
        };
        let r = integrate_1d(|b| f(a, b), &iv, &ispec);
        // An inner integral that ran out of subdivisions still carries its
        // error estimate into the total; only non-finite results fail.
        Carry {
            value: r.value,
            err: r.error_estimate,
            failed: if r.value.is_finite() && r.error_estimate.is_finite() { 0.0 } else { 1.0 },
        }
    };
    let r = integrate_generic(&g, outer, &ospec, true);
    let value = r.value.value;
    let error_estimate = r.error_estimate + r.value.err.abs();
    let converged = r.converged
        && r.value.failed == 0.0
        && value.is_finite()
        && error_estimate <= spec.target(value);
    IntegralValue {
        value,
        error_estimate,
        subdivisions_used: r.subdivisions_used,
        converged,
    }
}

/// `∫∫_rect f(x, y) dx dy`, outer variable `y`. Grading and improper ends
/// are taken from the two intervals.
pub fn integrate_2d_graded<F>(f: F, rect: &Rectangle, spec: &QuadratureSpec) -> IntegralValue
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    integrate_iterated(&rect.y, |_| rect.x.clone(), |y, x| f(x, y), spec)
}

/// `∫∫_{square²} g(x, y) dx dy` for symmetric `g` with an integrable
/// `|x − y|^{p−2}` diagonal singularity.
///
/// Computed as twice the upper triangle in `(x, v = y − x)` coordinates, with
/// the inner integral graded at `v = 0`. Breakpoints and the centre of
/// `square` mark where `g` has structure; the inner `v`-range is split at the
/// corresponding offsets.
pub fn integrate_pair_singular<G>(
    g: G,
    square: &Interval,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralValue>
where
    G: Fn(f64, f64) -> f64 + Sync,
{
    integrate_pair_offset(|x, v| g(x, x + v), square, p, spec)
}

/// [`integrate_pair_singular`] with the integrand given in offset form
/// `h(x, v) = g(x, x + v)`, `v > 0`, so callers can evaluate differences
/// without cancellation.
pub fn integrate_pair_offset<H>(
    h: H,
    square: &Interval,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralValue>
where
    H: Fn(f64, f64) -> f64 + Sync,
{
    if !(p > 1.0) {
        return Err(Error::invalid(format!(
            "pair integral needs p > 1, got {p}"
        )));
    }
    let mut features = square.breakpoints.clone();
    features.push(square.center);
    let hi = square.hi;
    let scale = square.scale;
    let inner = |x: f64| {
        features.iter().fold(
            Interval::new(0.0, hi - x).graded_lo().with_scale(scale),
            |iv, &c| iv.with_cluster(c - x, scale),
        )
    };
    let r = integrate_iterated(square, inner, h, spec);
    Ok(IntegralValue {
        value: 2.0 * r.value,
        error_estimate: 2.0 * r.error_estimate,
        ..r
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn unit_square() {
        let r = integrate_2d_graded(
            |_, _| 1.0,
            &Rectangle::new(Interval::new(0.0, 1.0), Interval::new(0.0, 1.0)),
            &spec(),
        );
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn graded_edge_singularity() {
        let rect = Rectangle::new(Interval::new(-1.0, 1.0), Interval::new(0.0, 1.0).graded_lo());
        let r = integrate_2d_graded(|_, y| y.powf(-0.5), &rect, &spec());
        assert!(r.converged);
        assert!((r.value - 4.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn upper_half_plane_power() {
        let rect = Rectangle::new(
            Interval::real_line(),
            Interval::new(0.0, f64::INFINITY),
        );
        let r = integrate_2d_graded(
            |x, y| Complex64::new(x, y + 1.0).norm_sqr().powi(-2),
            &rect,
            &spec(),
        );
        assert!(r.converged);
        assert!((r.value - PI / 4.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn pair_integrals() {
        let sq = Interval::new(0.0, 1.0);
        let r = integrate_pair_singular(|x, y| (x - y).abs().powf(0.0), &sq, 2.0, &spec()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_pair_singular(
            |x, y| if x == y { 1.0 } else { (x - y).powi(2) / (x - y).powi(2) },
            &sq,
            2.0,
            &spec(),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(integrate_pair_singular(|_, _| 1.0, &sq, 1.0, &spec()).is_err());
    }

    #[test]
    fn pair_integral_of_pole_trace() {
        let f = |x: f64| Complex64::new(x, 1.0).inv();
        let g = |x: f64, y: f64| {
            let d = y - x;
            if d == 0.0 {
                f(x).norm_sqr().powi(2)
            } else {
                (f(x) - f(y)).norm_sqr() / (d * d)
            }
        };
        let r = integrate_pair_singular(g, &Interval::real_line(), 2.0, &spec()).unwrap();
        assert!(r.converged);
        assert!((r.value - PI * PI).abs() < 1e-5, "{:?}", r);
    }

    #[test]
    fn pair_matches_naive_square() {
        let sq = Interval::new(-1.0, 2.0);
        let g = |x: f64, y: f64| (x * y).cos() + x * x + y * y;
        let a = integrate_pair_singular(g, &sq, 3.0, &spec()).unwrap();
        let b = integrate_2d_graded(g, &Rectangle::new(sq.clone(), sq.clone()), &spec());
        assert!((a.value - b.value).abs() <= a.error_estimate + b.error_estimate + 1e-12);
    }
}
