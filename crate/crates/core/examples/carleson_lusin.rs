//! The Carleson measure |∇F|²y dm of F = 1/(z + i) on dyadic boxes and the
//! averaged Lusin area inequality.
//!
//! Run with `cargo run --release --example carleson_lusin`.

use chordarc::analysis::{carleson_norm, dyadic_boxes, lusin_area, lusin_average, BoxInterval, HarmonicTestFunction};
use chordarc::quadrature::QuadratureSpec;
use num_complex::Complex64;

fn main() -> chordarc::Result<()> {
    let quad = QuadratureSpec::default().with_rel_tol(1e-6);
    let f = HarmonicTestFunction::pole(Complex64::new(0.0, -1.0), 1, Complex64::new(1.0, 0.0))?;
    for refine in 0..=2 {
        let boxes = dyadic_boxes(0.0, -4, 4, refine)?;
        let r = carleson_norm(&f, &boxes, &quad)?;
        println!(
            "refine {refine}: {:>4} boxes, sup ν(Q)/|I| = {:.6} at [{:.3}, {:.3}]",
            r.boxes, r.value, r.witness.a, r.witness.b
        );
    }
    for x0 in [0.0, 1.0, 4.0] {
        println!("S_1({x0})² = {:.6}", lusin_area(&f, x0, 1.0, &quad)?);
    }
    for (a, b) in [(-0.5, 0.5), (0.0, 1.0), (-2.0, 2.0)] {
        let l = lusin_average(&f, BoxInterval::new(a, b)?, &quad)?;
        println!("I = [{a}, {b}]: ∫_I S_I² = {:.6} ≤ 2ν(3I × (0, |I|)) = {:.6}: {}", l.lhs, l.rhs, l.holds());
    }
    Ok(())
}
