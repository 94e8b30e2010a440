//! Chord-arc, Ahlfors-regularity and Meyer–David constants of catalog
//! curves on growing windows.
//!
//! Run with `cargo run --release --example curve_diagnostics`.

use chordarc::geometry::{diagnose, meyer_david_ratio, Curve, CurveWindow};
use num_complex::Complex64;

fn main() -> chordarc::Result<()> {
    let curves = [Curve::sector(0.5)?, Curve::grating(0.6)?, Curve::parabola(1.0)?, Curve::wiggle(3)?];
    for c in &curves {
        for half in [10.0, 100.0] {
            let r = diagnose(c, &CurveWindow::symmetric(half, 401)?)?;
            println!(
                "{:<22} T = {half:<5} chord-arc {:>8.4}  Ahlfors {:>7.4}  Meyer–David sup {:>7.4}",
                r.curve, r.chord_arc_constant, r.ahlfors_constant, r.meyer_david_sup
            );
        }
    }
    // on a line the ratio is π at every point off the curve
    let w = CurveWindow::symmetric(10.0, 201)?;
    for z in [Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0), Complex64::new(0.0, 2.0)] {
        let m = meyer_david_ratio(&Curve::line(), z, &w, 1e-10)?;
        println!("line, w = {z}: ratio {:.10}", m.ratio);
    }
    Ok(())
}
