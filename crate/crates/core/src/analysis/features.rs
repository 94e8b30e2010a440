use num_complex::Complex64;

use super::harmonic::HarmonicTestFunction;
use crate::conformal::{Domain, Side};
use crate::geometry::Curve;
use crate::Result;

/// Where an integrand built from a test function is concentrated: a centre
/// and a width in some real coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Feature {
    pub center: f64,
    pub width: f64,
}

fn sorted(mut fs: Vec<Feature>) -> Vec<Feature> {
    fs.sort_by(|a, b| a.width.total_cmp(&b.width).then(a.center.total_cmp(&b.center)));
    fs.dedup_by(|a, b| (a.center - b.center).abs() <= 1e-12 * (1.0 + b.center.abs()) && a.width == b.width);
    fs
}

/// Nearest curve parameters of the poles, with width `δ(w_j)`, narrowest
/// first.
pub(crate) fn curve_features(curve: &Curve, u: &HarmonicTestFunction) -> Vec<Feature> {
    sorted(
        u.poles()
            .map(|t| {
                let n = curve.distance(t.w);
                Feature {
                    center: n.t,
                    width: n.delta.max(1e-6),
                }
            })
            .collect(),
    )
}

/// Pole features in the source half-plane of `side`'s map: each pole is
/// reflected through its nearest boundary point and pulled back; the
/// preimage gives centre `Re` and width `|Im|`.
pub(crate) fn pullback_features(domain: &Domain, side: Side, u: &HarmonicTestFunction) -> Result<Vec<Feature>> {
    let m = domain.map(side)?;
    let curve = domain.curve();
    let mut out = Vec::new();
    for t in u.poles() {
        let n = curve.distance(t.w);
        let p = curve.eval(n.t);
        let mirror = p * 2.0 - t.w;
        let x = domain.boundary_preimage(side, n.t);
        let from_mirror = if domain.side_of(mirror) == side {
            m.inverse(mirror, 1e-10 * (1.0 + mirror.norm())).ok()
        } else {
            None
        };
        let f = match from_mirror {
            Some(z) => Feature {
                center: z.re,
                width: z.im.abs().max(1e-6),
            },
            None => Feature {
                center: x,
                width: 0.1 * (1.0 + x.abs()),
            },
        };
        out.push(f);
    }
    Ok(sorted(out))
}

/// `z = x + i·s·t` in the source half-plane of `side` (`s = ±1`).
#[inline]
pub(crate) fn source_point(side: Side, x: f64, t: f64) -> Complex64 {
    match side {
        Side::Interior => Complex64::new(x, t),
        Side::Exterior => Complex64::new(x, -t),
    }
}
