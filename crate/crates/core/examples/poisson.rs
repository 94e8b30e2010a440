//! Poisson extension of boundary data to the upper half-plane.
//!
//! Run with `cargo run --release --example poisson`.

use chordarc::analysis::{poisson_extend, BoundaryFunction, HarmonicTestFunction};
use chordarc::quadrature::QuadratureSpec;
use num_complex::Complex64;

fn main() -> chordarc::Result<()> {
    let quad = QuadratureSpec::default().with_rel_tol(1e-10);
    let u = HarmonicTestFunction::pole(Complex64::new(0.0, -1.0), 1, Complex64::new(1.0, 0.0))?;
    let trace = BoundaryFunction::trace(u.clone());
    // a formula for Re 1/(x + i) extends to Re 1/(z + i)
    let re = BoundaryFunction::formula("x/(x² + 1)", |z: Complex64| Complex64::new(z.re / (z.re * z.re + 1.0), 0.0));
    for z in [Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.5), Complex64::new(-1.0, 3.0)] {
        let p = poisson_extend(&trace, z, &quad)?;
        let q = poisson_extend(&re, z, &quad)?;
        println!("z = {z}: P[f](z) = {p:.10}, u(z) = {:.10}, P[Re f](z) = {:.10}", u.value(z)?, q.re);
    }
    Ok(())
}
