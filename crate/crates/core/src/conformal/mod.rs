//! Explicit conformal maps onto the catalog domains, the sewing map and
//! quasisymmetry diagnostics.

mod domain;
mod map;
mod sewing;

pub use domain::{Domain, DomainKind, Side};
pub use map::{cauchy_derivatives, ConformalMap, HalfPlane, MapKind, MAX_DERIVATIVE};
pub use sewing::{fit_power_exponent, quasisymmetric_constant, sewing_eval, Limit, SewingMap, LIMIT_HEIGHTS};
