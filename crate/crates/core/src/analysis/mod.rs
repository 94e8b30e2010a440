//! Harmonic test functions, Besov energies, boundary norms, Poisson
//! extension, Carleson and Lusin functionals and ray tail integrals.

mod boundary;
mod carleson;
mod energy;
mod features;
mod harmonic;
mod poisson;
mod tail;

pub use boundary::{
    boundary_norm_curve, boundary_norm_line, bp_phi_norm, BoundaryFunction, Normalization, NormResult,
};
pub use carleson::{
    carleson_measure, carleson_norm, dyadic_boxes, lusin_area, lusin_average, BoxInterval, CarlesonResult,
    LusinAverage,
};
pub use energy::{
    composed_energy, energy, halfplane_energy, interior_energy, test_function_bound, EnergyForm, EnergyResult,
    Truncation, Weight,
};
pub use harmonic::{parse_complex, HarmonicTestFunction, PoleTerm, MIN_POLE_DISTANCE, POLE_EXCLUSION};
pub use poisson::poisson_extend;
pub use tail::{tail_integral, TailResult, DEFAULT_EPS};
