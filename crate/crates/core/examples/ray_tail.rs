//! Integrals of δ^{−1−ε} along conformal vertical rays, scaled by δ(w)^ε.
//!
//! Run with `cargo run --release --example ray_tail`.

use chordarc::analysis::tail_integral;
use chordarc::conformal::Domain;
use chordarc::geometry::log_space;
use chordarc::quadrature::QuadratureSpec;
use num_complex::Complex64;

fn main() -> chordarc::Result<()> {
    let quad = QuadratureSpec::default().with_rel_tol(1e-8);
    for d in [Domain::halfplane(), Domain::sector(1.5)?, Domain::grating(0.6)?] {
        for eps in [0.25, 0.5, 1.0] {
            let ratios = log_space(0.05, 20.0, 5)
                .into_iter()
                .map(|y| {
                    let w = d.interior_map().eval(Complex64::new(1.0, y));
                    tail_integral(&d, w, eps, &quad).map(|t| t.ratio)
                })
                .collect::<chordarc::Result<Vec<_>>>()?;
            let s: Vec<String> = ratios.iter().map(|r| format!("{r:.5}")).collect();
            println!("{:<16} ε = {eps:<4} ratios {}", d.label(), s.join(" "));
        }
    }
    Ok(())
}
