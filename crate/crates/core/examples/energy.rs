//! Besov energies of a pole on the half-plane, a sector and a grating.
//!
//! Run with `cargo run --release --example energy`.

use chordarc::analysis::{energy, halfplane_energy, EnergyForm, HarmonicTestFunction, Weight};
use chordarc::conformal::{Domain, Side};
use chordarc::quadrature::QuadratureSpec;
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> chordarc::Result<()> {
    let quad = QuadratureSpec::default().with_rel_tol(1e-8);
    let u = HarmonicTestFunction::pole(Complex64::new(0.0, -1.0), 1, Complex64::new(1.0, 0.0))?;

    // I¹₂(1/(z + i), ℍ) = π/4
    let e = halfplane_energy(&u, 2.0, 1, &quad)?;
    println!("halfplane  I¹₂ = {:.12}  (π/4 = {:.12})", e.value, PI / 4.0);

    let domains = [Domain::halfplane(), Domain::sector(0.75)?, Domain::grating(0.6)?];
    let quad = QuadratureSpec::default().with_rel_tol(1e-6);
    let u = HarmonicTestFunction::pole(Complex64::new(0.5, -2.0), 1, Complex64::new(1.0, 0.0))?;
    for d in &domains {
        for (name, form) in [
            ("delta", EnergyForm::Domain { weight: Weight::Delta }),
            ("pullback", EnergyForm::Domain { weight: Weight::Pullback }),
            ("composed", EnergyForm::Composed),
        ] {
            let r = energy(&u, d, Side::Interior, 2.0, 1, form, &quad)?;
            println!(
                "{:<18} {:<9} I¹₂ = {:.8}  ± {:.1e}",
                d.label(),
                name,
                r.value,
                r.total_error()
            );
        }
    }
    Ok(())
}
