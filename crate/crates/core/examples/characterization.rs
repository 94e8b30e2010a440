//! The test functions F_w = 1/(w − z) against the energy bound
//! 2π(n!)^p p⁻¹δ(w)^{−p}, and the arc-length quantities around w.
//!
//! Run with `cargo run --release --example characterization`.

use chordarc::analysis::{energy, test_function_bound, EnergyForm, HarmonicTestFunction, Weight};
use chordarc::conformal::{Domain, Side};
use chordarc::harness::exterior_probe;
use chordarc::quadrature::QuadratureSpec;

fn main() -> chordarc::Result<()> {
    let quad = QuadratureSpec::default().with_rel_tol(1e-5);
    let form = EnergyForm::Domain { weight: Weight::Delta };
    for d in [Domain::halfplane(), Domain::grating(0.6)?] {
        for (x, y) in [(0.0, 0.5), (1.0, 2.0), (-1.0, 5.0)] {
            let w = exterior_probe(&d, x, y);
            let delta = d.delta(w);
            let u = HarmonicTestFunction::f_w(w);
            let c = d.curve();
            println!(
                "{:<14} w = {w:.3}  δ = {delta:.4}  ℓ(Γ∩B(w,2δ))/2δ = {:.3}  ℓ(Γ∩{{5δ≤|z−w|≤6δ}})/2δ = {:.3}",
                d.label(),
                c.disk_length(w, 2.0 * delta)? / (2.0 * delta),
                c.annulus_length(w, 5.0 * delta, 6.0 * delta)? / (2.0 * delta)
            );
            for p in [1.5, 2.0, 3.0] {
                let e = energy(&u, &d, Side::Interior, p, 2, form, &quad)?;
                let b = test_function_bound(delta, p, 2);
                println!("    p = {p:<3} I²_p(F_w) / bound = {:.5}", e.value / b);
            }
        }
    }
    Ok(())
}
