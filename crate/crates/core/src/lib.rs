pub mod analysis;
pub mod conformal;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod quadrature;

pub use error::{Error, Result};
