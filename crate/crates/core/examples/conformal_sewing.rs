//! Catalog conformal maps, the Koebe ratio δ/(y|φ′|) and the conformal
//! sewing of sectors.
//!
//! Run with `cargo run --release --example conformal_sewing`.

use chordarc::conformal::{fit_power_exponent, quasisymmetric_constant, sewing_eval, Domain};
use chordarc::geometry::{log_space, CurveWindow};
use num_complex::Complex64;

fn main() -> chordarc::Result<()> {
    for d in [Domain::sector(0.5)?, Domain::sector(1.5)?, Domain::grating(0.9)?] {
        let (lo, hi) = [0.05, 0.5, 5.0, 50.0]
            .iter()
            .flat_map(|&y| [-3.0, 0.0, 2.0].map(|x| Complex64::new(x, y)))
            .map(|z| d.poincare_ratio(z))
            .collect::<chordarc::Result<Vec<_>>>()?
            .into_iter()
            .fold((f64::INFINITY, 0.0f64), |a, r| (a.0.min(r), a.1.max(r)));
        println!("{:<16} δ/(y|φ′|) in [{lo:.4}, {hi:.4}]", d.label());
    }

    let window = CurveWindow::symmetric(4.0, 9)?;
    let scales = log_space(1e-2, 1e2, 17);
    for alpha in [0.5, 1.0, 1.5] {
        let d = Domain::sector(alpha)?;
        let h = |x: f64| sewing_eval(&d, x, 1e-10);
        let beta = fit_power_exponent(h, 1e-2, 1e2, 17)?;
        let qs = quasisymmetric_constant(|x| h(x).unwrap_or(f64::NAN), &window, &scales)?;
        println!(
            "sector α = {alpha}: exponent {beta:.6} (α/(2 − α) = {:.6}), QS constant {:.4}",
            alpha / (2.0 - alpha),
            qs.value
        );
    }
    Ok(())
}
