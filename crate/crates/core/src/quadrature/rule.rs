//! 7-point Gauss / 15-point Kronrod nested pair on [-1, 1].

use super::QuadValue;

/// Kronrod abscissae, descending; index 7 is the midpoint.
pub(crate) const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

pub(crate) const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the abscissae XGK[1], XGK[3], XGK[5], XGK[7].
pub(crate) const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// The 15 abscissae of the rule mapped to `[u0, u1]`, in a fixed order:
/// centre first, then the symmetric pairs `(c - h x_j, c + h x_j)` for j = 0..7.
pub(crate) fn nodes(u0: f64, u1: f64) -> [f64; 15] {
    let c = 0.5 * (u0 + u1);
    let h = 0.5 * (u1 - u0);
    let mut out = [c; 15];
    for j in 0..7 {
        out[1 + 2 * j] = c - h * XGK[j];
        out[2 + 2 * j] = c + h * XGK[j];
    }
    out
}

/// Combine the 15 function values (ordered as in [`nodes`]) into the Kronrod
/// estimate and a QUADPACK-style error estimate.
pub(crate) fn combine<T: QuadValue>(u0: f64, u1: f64, f: &[T; 15]) -> (T, f64) {
    let half = 0.5 * (u1 - u0);
    let fc = f[0];
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.magnitude() * WGK[7];
    for j in 0..7 {
        let (a, b) = (f[1 + 2 * j], f[2 + 2 * j]);
        res_k = res_k + (a + b) * WGK[j];
        res_abs += WGK[j] * (a.magnitude() + b.magnitude());
        if j % 2 == 1 {
            res_g = res_g + (a + b) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).magnitude();
    for j in 0..7 {
        res_asc += WGK[j] * ((f[1 + 2 * j] - mean).magnitude() + (f[2 + 2 * j] - mean).magnitude());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_degree_21_polynomial() {
        let xs = nodes(0.0, 1.0);
        let vals: [f64; 15] = xs.map(|x| x.powi(21));
        let (v, _) = combine(0.0, 1.0, &vals);
        assert!((v - 1.0 / 22.0).abs() < 1e-15);
    }
}
