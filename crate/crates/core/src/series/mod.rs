//! Dense truncated power series over a [`Scalar`](crate::Scalar) field.
//!
//! Truncation is explicit: every series carries the highest index whose
//! coefficient is meaningful, and reading past it is an error rather than an
//! implicit zero.

mod multivariate;
mod univariate;
mod valid_order;

pub use multivariate::{MultiIndexIter, SeriesK};
pub use univariate::Series1;
pub use valid_order::ValidOrder;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("empty coefficient list")]
    Empty,
    #[error("index {index:?} lies beyond the valid order {order:?}")]
    BeyondOrder { index: Vec<usize>, order: Vec<usize> },
    #[error("derivative of order {m} along axis {axis} needs order >= {m}, series has {order}")]
    OrderTooSmall { axis: usize, m: usize, order: usize },
    #[error("axis mismatch: {left:?} vs {right:?}")]
    AxisMismatch { left: Vec<String>, right: Vec<String> },
    #[error("expected {expected} coefficients for caps {caps:?}, got {got}")]
    ShapeMismatch {
        caps: Vec<usize>,
        expected: usize,
        got: usize,
    },
    #[error("unknown axis `{0}`")]
    UnknownAxis(String),
}

/// `(s + m)! / s!`, the falling-factorial factor of an `m`-th derivative.
pub(crate) fn rising_factor(s: usize, m: usize) -> i64 {
    ((s + 1)..=(s + m)).map(|v| v as i64).product()
}
