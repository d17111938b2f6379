pub mod scalar;
pub mod navier_stokes;
pub mod prandtl;
pub mod pvi;
pub mod residual;
pub mod series;

pub use scalar::{Backend, Rational, Scalar};
pub use series::{Series1, SeriesError, SeriesK, ValidOrder};
