//! Boundary Besov norms: the line norm of a pole trace, the Douglas
//! identity against the half-plane energy, affine invariance and a norm on
//! a grating.
//!
//! Run with `cargo run --release --example boundary_norms`.

use chordarc::analysis::{
    boundary_norm_curve, boundary_norm_line, bp_phi_norm, halfplane_energy, BoundaryFunction, HarmonicTestFunction,
};
use chordarc::conformal::{Domain, Side};
use chordarc::quadrature::QuadratureSpec;
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> chordarc::Result<()> {
    let quad = QuadratureSpec::default().with_rel_tol(1e-6);
    let one = Complex64::new(1.0, 0.0);
    let u = HarmonicTestFunction::pole(Complex64::new(0.0, -1.0), 1, one)?;
    let f = BoundaryFunction::trace(u.clone());

    let b = boundary_norm_line(&f, 2.0, &quad)?;
    let e = halfplane_energy(&u, 2.0, 1, &quad)?;
    println!("‖1/(x + i)‖²_B₂ = {:.8}  (π² = {:.8})", b.value, PI * PI);
    println!("4π·I¹₂          = {:.8}", 4.0 * PI * e.value);

    // f(ax + b) is the trace of u(az + b)
    for (a, s) in [(2.0, 0.0), (1.0, 3.0), (0.5, -1.0)] {
        let g = BoundaryFunction::trace(u.precompose_affine(Complex64::new(a, 0.0), Complex64::new(s, 0.0))?);
        let r = boundary_norm_line(&g, 1.5, &quad)?;
        println!("a = {a:<4} b = {s:<4} ‖f(ax + b)‖^1.5 = {:.8}", r.value);
    }

    let quad = QuadratureSpec::default().with_rel_tol(1e-3);
    let d = Domain::grating(0.6)?;
    let f = BoundaryFunction::trace(HarmonicTestFunction::pole(Complex64::new(0.5, -2.0), 1, one)?);
    let on_curve = boundary_norm_curve(&f, d.curve(), 2.0, None, &quad)?;
    let pulled = bp_phi_norm(&f, &d, Side::Interior, 2.0, &quad)?;
    println!("{}: B₂(Γ) = {:.5}, B₂^φ = {:.5}", d.label(), on_curve.value, pulled.value);
    Ok(())
}
