use std::f64::consts::FRAC_PI_2;

/// A (possibly unbounded) integration interval together with hints about
/// where the integrand is singular or kinked.
///
/// Graded points carry an integrable algebraic singularity (`|x - s|^β`,
/// `β > -1`); the pieces adjacent to them use a power-law substitution.
/// Infinite endpoints are compactified by a tangent substitution whose
/// outer end is itself power-graded, which absorbs slow algebraic decay.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub graded: Vec<f64>,
    pub breakpoints: Vec<f64>,
    /// Length scale for the tangent substitution.
    pub scale: f64,
    /// Split point of a doubly infinite interval with no interior hints.
    pub center: f64,
    /// Use a logarithmic map on long positive pieces (power-law decay).
    pub logarithmic: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            graded: Vec::new(),
            breakpoints: Vec::new(),
            scale: 1.0,
            center: 0.0,
            logarithmic: false,
        }
    }

    pub fn real_line() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn graded_at(mut self, x: f64) -> Self {
        if x.is_finite() {
            self.graded.push(x);
        }
        self
    }

    pub fn graded_lo(self) -> Self {
        let lo = self.lo;
        self.graded_at(lo)
    }

    pub fn graded_hi(self) -> Self {
        let hi = self.hi;
        self.graded_at(hi)
    }

    pub fn with_breakpoint(mut self, x: f64) -> Self {
        if x.is_finite() {
            self.breakpoints.push(x);
        }
        self
    }

    pub fn with_breakpoints(mut self, xs: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(xs.into_iter().filter(|x| x.is_finite()));
        self
    }

    /// Mark a bump of width `w` at `c`: breakpoints at `c` and `c ± w·4^k`
    /// out to the size of the interval, so long pieces on either side are
    /// resolved geometrically toward the bump.
    pub fn with_cluster(mut self, c: f64, w: f64) -> Self {
        if !(c.is_finite() && w.is_finite() && w > 0.0) {
            return self;
        }
        let mut reach = w.max(c.abs());
        for end in [self.lo, self.hi] {
            if end.is_finite() {
                reach = reach.max((end - c).abs());
            }
        }
        self.breakpoints.push(c);
        let mut d = w;
        while d <= 2.0 * reach {
            self.breakpoints.push(c - d);
            self.breakpoints.push(c + d);
            d *= 4.0;
        }
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        if scale.is_finite() && scale > 0.0 {
            self.scale = scale;
        }
        self
    }

    pub fn with_center(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    pub fn logarithmic(mut self) -> Self {
        self.logarithmic = true;
        self
    }

    pub fn is_empty(&self) -> bool {
        !(self.hi > self.lo)
    }

    fn is_graded(&self, x: f64) -> bool {
        self.graded.iter().any(|&g| g == x)
    }

    /// Split into pieces, each mapped from `u ∈ [0, 1]`.
    pub(crate) fn pieces(&self, q: f64) -> Vec<PieceMap> {
        if self.is_empty() {
            return Vec::new();
        }
        let inside = |x: f64| x > self.lo && x < self.hi;
        let mut pts: Vec<f64> = Vec::new();
        if self.lo.is_finite() {
            pts.push(self.lo);
        }
        if self.hi.is_finite() {
            pts.push(self.hi);
        }
        pts.extend(self.breakpoints.iter().copied().filter(|&x| inside(x)));
        pts.extend(
            self.graded
                .iter()
                .copied()
                .filter(|&x| inside(x) || x == self.lo || x == self.hi),
        );
        if pts.is_empty() {
            pts.push(self.center);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();

        // Graded points next to an infinite end get a finite buffer piece.
        let l = self.scale;
        if !self.lo.is_finite() && self.is_graded(pts[0]) {
            pts.insert(0, pts[0] - l);
        }
        if !self.hi.is_finite() && self.is_graded(*pts.last().unwrap()) {
            let last = *pts.last().unwrap();
            pts.push(last + l);
        }

        let mut out = Vec::with_capacity(pts.len() + 2);
        if !self.lo.is_finite() {
            let b = pts[0];
            out.push(PieceMap::TanDown {
                b,
                l: l.max(b.abs()),
                q,
            });
        }
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (ga, gb) = (self.is_graded(a), self.is_graded(b));
            match (ga, gb) {
                (true, true) => {
                    let m = 0.5 * (a + b);
                    out.push(PieceMap::PowerLo { a, b: m, q });
                    out.push(PieceMap::PowerHi { a: m, b, q });
                }
                (true, false) => out.push(PieceMap::PowerLo { a, b, q }),
                (false, true) => out.push(PieceMap::PowerHi { a, b, q }),
                (false, false) => {
                    if self.logarithmic && a * b > 0.0 && (b / a).max(a / b) > 4.0 {
                        out.push(PieceMap::Log { a, b });
                    } else {
                        out.push(PieceMap::Linear { a, b });
                    }
                }
            }
        }
        if !self.hi.is_finite() {
            let a = *pts.last().unwrap();
            out.push(PieceMap::TanUp {
                a,
                l: l.max(a.abs()),
                q,
            });
        }
        out
    }
}

/// Change of variables from `u ∈ [0, 1]` onto one piece of an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum PieceMap {
    Linear { a: f64, b: f64 },
    PowerLo { a: f64, b: f64, q: f64 },
    PowerHi { a: f64, b: f64, q: f64 },
    Log { a: f64, b: f64 },
    TanUp { a: f64, l: f64, q: f64 },
    TanDown { b: f64, l: f64, q: f64 },
}

impl PieceMap {
    /// Returns `(x(u), |dx/du|)`.
    #[inline]
    pub(crate) fn map(&self, u: f64) -> (f64, f64) {
        match *self {
            PieceMap::Linear { a, b } => (a + (b - a) * u, b - a),
            PieceMap::PowerLo { a, b, q } => {
                let w = b - a;
                (a + w * u.powf(q), w * q * u.powf(q - 1.0))
            }
            PieceMap::PowerHi { a, b, q } => {
                let w = b - a;
                let s = 1.0 - u;
                (b - w * s.powf(q), w * q * s.powf(q - 1.0))
            }
            PieceMap::Log { a, b } => {
                let r = (b / a).ln();
                let x = a * (r * u).exp();
                (x, (x * r).abs())
            }
            PieceMap::TanUp { a, l, q } => {
                let (t, j) = tan_map(u, l, q);
                (a + t, j)
            }
            PieceMap::TanDown { b, l, q } => {
                let (t, j) = tan_map(u, l, q);
                (b - t, j)
            }
        }
    }
}

#[inline]
fn tan_map(u: f64, l: f64, q: f64) -> (f64, f64) {
    // θ = π/2 − φ with φ = (π/2) s^q, so tan θ = cot φ; working with φ keeps
    // full relative precision as θ → π/2.
    let s = 1.0 - u;
    let phi = FRAC_PI_2 * s.powf(q);
    let (sin, cos) = phi.sin_cos();
    let t = cos / sin;
    let dtheta = FRAC_PI_2 * q * s.powf(q - 1.0);
    (l * t, l * dtheta / (sin * sin))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_line_splits_at_center() {
        let p = Interval::real_line().with_center(2.0).pieces(4.0);
        assert_eq!(p.len(), 2);
        assert!(matches!(p[0], PieceMap::TanDown { b, .. } if b == 2.0));
        assert!(matches!(p[1], PieceMap::TanUp { a, .. } if a == 2.0));
    }

    #[test]
    fn graded_interior_point_grades_both_sides() {
        let p = Interval::new(-1.0, 1.0).graded_at(0.0).pieces(4.0);
        assert_eq!(p.len(), 2);
        assert!(matches!(p[0], PieceMap::PowerHi { .. }));
        assert!(matches!(p[1], PieceMap::PowerLo { .. }));
    }

    #[test]
    fn maps_hit_piece_endpoints() {
        for piece in Interval::new(0.0, 3.0).graded_lo().graded_hi().pieces(4.0) {
            let (x0, _) = piece.map(0.0);
            let (x1, _) = piece.map(1.0);
            assert!(x0 < x1);
        }
        let (x, _) = PieceMap::Log { a: 1.0, b: 100.0 }.map(0.5);
        assert!((x - 10.0).abs() < 1e-12);
    }
}
