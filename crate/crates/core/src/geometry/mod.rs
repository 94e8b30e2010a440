//! Curves, distances and curve regularity constants.

mod annulus;
mod constants;
mod curve;
mod distance;
mod meyer_david;

pub use constants::{
    ahlfors_constant, chord_arc_constant, default_radii, diagnose, meyer_david_sup, probe_grid, CurveSample,
    DiagnosticsReport, Witnessed, PROBE_OFFSETS,
};
pub use constants::log_space;
pub use curve::{Curve, CurveKind, CurveWindow, Similarity};
pub use distance::Nearest;
pub use meyer_david::{meyer_david_ratio, MeyerDavid};
