use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::{Domain, Side, MAX_DERIVATIVE};
use crate::{Error, Result};

/// Evaluation closer than this to a pole is rejected.
pub const POLE_EXCLUSION: f64 = 1e-12;

/// Smallest admissible distance from a pole to Γ.
pub const MIN_POLE_DISTANCE: f64 = 0.1;

/// `coef·(z − w)^{−k}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleTerm {
    pub w: Complex64,
    pub k: u32,
    pub coef: Complex64,
}

impl PoleTerm {
    pub fn new(w: Complex64, k: u32, coef: Complex64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("pole order must be at least 1"));
        }
        if !(w.re.is_finite() && w.im.is_finite() && coef.re.is_finite() && coef.im.is_finite()) {
            return Err(Error::invalid("pole location and coefficient must be finite"));
        }
        Ok(Self { w, k, coef })
    }

    /// `d^n/dz^n` at `z`; `z − w` must be nonzero.
    #[inline]
    pub fn derivative(&self, z: Complex64, n: usize) -> Complex64 {
        let d = z - self.w;
        let k = self.k as i32;
        let mut rising = 1.0;
        for j in 0..n {
            rising *= (self.k as usize + j) as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        self.coef * (sign * rising) * d.powi(-(k + n as i32))
    }

    /// The term of `z ↦ term(a·z + b)`.
    pub fn precompose_affine(&self, a: Complex64, b: Complex64) -> Self {
        Self {
            w: (self.w - b) / a,
            k: self.k,
            coef: self.coef * a.powi(-(self.k as i32)),
        }
    }
}

impl fmt::Display for PoleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pole(w={},k={},coef={})", fmt_complex(self.w), self.k, fmt_complex(self.coef))
    }
}

/// `u = u₁ + conj(u₂)` with `u₁`, `u₂` finite sums of pole terms, harmonic
/// off the poles and vanishing at ∞ with all derivatives.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HarmonicTestFunction {
    pub holo: Vec<PoleTerm>,
    pub anti: Vec<PoleTerm>,
}

impl HarmonicTestFunction {
    pub fn new(holo: Vec<PoleTerm>, anti: Vec<PoleTerm>) -> Self {
        Self { holo, anti }
    }

    /// `coef·(z − w)^{−k}`.
    pub fn pole(w: Complex64, k: u32, coef: Complex64) -> Result<Self> {
        Ok(Self::new(vec![PoleTerm::new(w, k, coef)?], Vec::new()))
    }

    /// `F_w(z) = (w − z)^{−1}`.
    pub fn f_w(w: Complex64) -> Self {
        Self::new(
            vec![PoleTerm {
                w,
                k: 1,
                coef: Complex64::new(-1.0, 0.0),
            }],
            Vec::new(),
        )
    }

    /// The zero function.
    pub fn zero() -> Self {
        Self::default()
    }

    /// `conj(self)`: swaps the two parts.
    pub fn conjugate(&self) -> Self {
        Self::new(self.anti.clone(), self.holo.clone())
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.holo.extend(other.holo.iter().copied());
        out.anti.extend(other.anti.iter().copied());
        out
    }

    /// `z ↦ u(a·z + b)`.
    pub fn precompose_affine(&self, a: Complex64, b: Complex64) -> Result<Self> {
        if a.norm() == 0.0 || !(a.norm().is_finite() && b.norm().is_finite()) {
            return Err(Error::invalid("affine map needs finite a ≠ 0 and finite b"));
        }
        let map = |ts: &[PoleTerm]| ts.iter().map(|t| t.precompose_affine(a, b)).collect();
        Ok(Self::new(map(&self.holo), map(&self.anti)))
    }

    pub fn is_zero(&self) -> bool {
        self.holo.iter().chain(&self.anti).all(|t| t.coef == Complex64::new(0.0, 0.0))
    }

    /// All poles of both parts.
    pub fn poles(&self) -> impl Iterator<Item = &PoleTerm> {
        self.holo.iter().chain(self.anti.iter())
    }

    /// Lowest pole order; `|u(z)| = O(|z|^{−min_order})`.
    pub fn min_order(&self) -> u32 {
        self.poles().map(|t| t.k).min().unwrap_or(u32::MAX)
    }

    fn check_point(&self, z: Complex64) -> Result<()> {
        for t in self.poles() {
            if (z - t.w).norm() < POLE_EXCLUSION {
                return Err(Error::Singularity { z, pole: t.w });
            }
        }
        Ok(())
    }

    /// `u(z)`.
    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        self.check_point(z)?;
        Ok(self.value_unchecked(z))
    }

    #[inline]
    pub(crate) fn value_unchecked(&self, z: Complex64) -> Complex64 {
        let (a, b) = self.part_derivative(z, 0);
        a + b.conj()
    }

    /// `(∂ⁿu₁/∂zⁿ, ∂ⁿu₂/∂zⁿ)` at `z`; the antiholomorphic derivative of `u`
    /// is the conjugate of the second entry.
    #[inline]
    pub(crate) fn part_derivative(&self, z: Complex64, n: usize) -> (Complex64, Complex64) {
        let s = |ts: &[PoleTerm]| ts.iter().fold(Complex64::new(0.0, 0.0), |acc, t| acc + t.derivative(z, n));
        (s(&self.holo), s(&self.anti))
    }

    /// `|∇ⁿu(z)| = √(|∂ⁿu/∂zⁿ|² + |∂ⁿu/∂z̄ⁿ|²)`.
    pub fn grad_norm(&self, z: Complex64, n: usize) -> Result<f64> {
        check_order(n)?;
        self.check_point(z)?;
        Ok(self.grad_norm_unchecked(z, n))
    }

    #[inline]
    pub(crate) fn grad_norm_unchecked(&self, z: Complex64, n: usize) -> f64 {
        let (a, b) = self.part_derivative(z, n);
        a.norm().hypot(b.norm())
    }

    /// `|∇ⁿ(u∘φ)(z)|` from `u`'s derivatives at `ζ = φ(z)` and
    /// `phi_derivs = (φ(z), φ′(z), …, φ^{(n)}(z))`, by Faà di Bruno.
    #[inline]
    pub(crate) fn composed_grad_norm_at(&self, zeta: Complex64, phi_derivs: &[Complex64], n: usize) -> f64 {
        let bell = bell_table(phi_derivs, n);
        let mut a = Complex64::new(0.0, 0.0);
        let mut b = Complex64::new(0.0, 0.0);
        for (k, row) in bell.iter().enumerate().skip(1) {
            let (da, db) = self.part_derivative(zeta, k);
            a += da * row;
            b += db * row;
        }
        a.norm().hypot(b.norm())
    }

    /// `|∇ⁿ(u∘φ)(z)|` for a map with closed-form derivatives.
    pub fn composed_grad_norm(&self, map: &crate::conformal::ConformalMap, z: Complex64, n: usize) -> Result<f64> {
        check_order(n)?;
        let d = map.eval_derivs(z, n)?;
        self.check_point(d[0])?;
        Ok(self.composed_grad_norm_at(d[0], &d, n))
    }

    /// Reject poles on the closure of `side` or closer than
    /// [`MIN_POLE_DISTANCE`] to Γ.
    pub fn check_admissible(&self, domain: &Domain, side: Side) -> Result<()> {
        for t in self.poles() {
            let d = domain.delta(t.w);
            if domain.side_of(t.w) == side {
                return Err(Error::Domain {
                    z: t.w,
                    reason: format!("pole lies on the integration side of {}", domain.label()),
                });
            }
            if !(d >= MIN_POLE_DISTANCE) {
                return Err(Error::Domain {
                    z: t.w,
                    reason: format!("pole is {d:.3e} from Γ, closer than {MIN_POLE_DISTANCE}"),
                });
            }
        }
        Ok(())
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DERIVATIVE {
        return Err(Error::invalid(format!("derivative order must be in 1..={MAX_DERIVATIVE}, got {n}")));
    }
    Ok(())
}

/// Row `n` of the partial Bell polynomials: `out[k] = B_{n,k}(g₁, …)` with
/// `g_i = derivs[i]`.
fn bell_table(derivs: &[Complex64], n: usize) -> [Complex64; MAX_DERIVATIVE + 1] {
    let zero = Complex64::new(0.0, 0.0);
    let mut b = [[zero; MAX_DERIVATIVE + 1]; MAX_DERIVATIVE + 1];
    b[0][0] = Complex64::new(1.0, 0.0);
    for m in 1..=n {
        for k in 1..=m {
            let mut s = zero;
            for i in 1..=(m - k + 1) {
                s += derivs[i] * binomial(m - 1, i - 1) * b[m - i][k - 1];
            }
            b[m][k] = s;
        }
    }
    b[n]
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

impl fmt::Display for HarmonicTestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.holo.iter().map(|t| t.to_string()).collect();
        parts.extend(self.anti.iter().map(|t| format!("conj({t})")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FromStr for HarmonicTestFunction {
    type Err = Error;

    /// Parses sums such as `pole(w=-1i,k=1,coef=1) + conj(pole(w=-2i,k=2,coef=0.5))`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for term in split_top_level(s, '+')? {
            let term = term.trim();
            if let Some(inner) = strip_call(term, "conj") {
                let u: Self = inner.parse()?;
                out = out.sum(&u.conjugate());
            } else if let Some(args) = strip_call(term, "pole") {
                out.holo.push(parse_pole_args(args)?);
            } else {
                return Err(Error::Parse(format!("expected pole(...) or conj(...), got `{term}`")));
            }
        }
        Ok(out)
    }
}

fn strip_call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    let rest = s.strip_prefix(name)?.trim_start();
    rest.strip_prefix('(')?.strip_suffix(')')
}

fn split_top_level(s: &str, sep: char) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
                }
            }
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
    }
    out.push(&s[start..]);
    if out.iter().any(|t| t.trim().is_empty()) {
        return Err(Error::Parse(format!("empty term in `{s}`")));
    }
    Ok(out)
}

fn parse_pole_args(args: &str) -> Result<PoleTerm> {
    let (mut w, mut k, mut coef) = (None, None, None);
    for kv in split_top_level(args, ',')? {
        let (key, val) = kv
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))?;
        let val = val.trim();
        match key.trim() {
            "w" => w = Some(parse_complex(val)?),
            "k" => k = Some(val.parse::<u32>().map_err(|e| Error::Parse(format!("pole order `{val}`: {e}")))?),
            "coef" => coef = Some(parse_complex(val)?),
            other => return Err(Error::Parse(format!("unknown pole argument `{other}`"))),
        }
    }
    let w = w.ok_or_else(|| Error::Parse("pole needs w=".into()))?;
    PoleTerm::new(w, k.unwrap_or(1), coef.unwrap_or(Complex64::new(1.0, 0.0)))
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`, exponents in numbers).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("invalid complex number `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    let num = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    match split {
        Some(i) => Ok(Complex64::new(num(&body[..i])?, num(&body[i..])?)),
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 || z.im.is_sign_negative() {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
