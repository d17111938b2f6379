//! Maclaurin-series solution of the shifted sixth Painleve equation.
//!
//! Coordinates are shifted so that the expansion point `x = 0` is `x = -1`
//! in the original variable, which keeps the fixed singularities 0 and 1 of
//! the original equation away from the origin.
//!
//! The coefficients are produced by the 65-member recurrence in
//! [`members`]; [`verify`] substitutes the result back into the equation with
//! the generic residual engine, and [`oracle`] integrates the same equation
//! numerically.

mod crosscheck;
pub mod members;
pub mod oracle;
mod recurrence;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::residual::builtins::{ALPHA, BETA, DELTA, GAMMA};
use crate::residual::{self, EngineError, ResidualReport};
use crate::scalar::Scalar;
use crate::series::Series1;

pub use crosscheck::{compare_with_engine, members_vs_engine, CrossCheck, Disagreement};
pub use members::{member_value, MemberTable};
pub use recurrence::{next_coefficient, solve, solve_with_table};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PviError {
    #[error("singular seed: a0 = {a0} makes 8 a0 (a0^2 - 1) vanish (a0 must not be 0, 1 or -1)")]
    SingularSeed { a0: String },
    #[error("coefficient prefix too short: index {needed} required, {have} coefficients supplied")]
    InsufficientPrefix { needed: usize, have: usize },
    #[error("unknown member id {0} (valid ids are 1..=65)")]
    UnknownMember(u8),
    #[error("order must be at least 1, got {0}")]
    OrderTooSmall(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// The four constants of the equation.
#[derive(Debug, Clone, PartialEq)]
pub struct PviParams<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
}

impl<T: Scalar> PviParams<T> {
    pub fn new(alpha: T, beta: T, gamma: T, delta: T) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    pub fn all(value: T) -> Self {
        Self::new(value.clone(), value.clone(), value.clone(), value)
    }

    pub fn bindings(&self) -> BTreeMap<String, T> {
        [
            (ALPHA, &self.alpha),
            (BETA, &self.beta),
            (GAMMA, &self.gamma),
            (DELTA, &self.delta),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
    }

    pub fn to_f64(&self) -> PviParams<f64> {
        PviParams::new(
            self.alpha.to_f64(),
            self.beta.to_f64(),
            self.gamma.to_f64(),
            self.delta.to_f64(),
        )
    }
}

/// Initial data `y(0) = a0`, `y'(0) = a1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PviSeed<T> {
    a0: T,
    a1: T,
}

impl<T: Scalar> PviSeed<T> {
    pub fn new(a0: T, a1: T) -> Result<Self, PviError> {
        check_seed(&a0)?;
        Ok(Self { a0, a1 })
    }

    pub fn a0(&self) -> &T {
        &self.a0
    }

    pub fn a1(&self) -> &T {
        &self.a1
    }
}

pub(crate) fn check_seed<T: Scalar>(a0: &T) -> Result<(), PviError> {
    let one = T::one();
    if a0.is_zero() || *a0 == one || *a0 == -one {
        return Err(PviError::SingularSeed { a0: a0.to_text() });
    }
    Ok(())
}

/// Substitutes `series` into the shifted equation.
pub fn verify<T: Scalar>(series: &Series1<T>, params: &PviParams<T>) -> Result<ResidualReport<T>, PviError> {
    let mut bindings = BTreeMap::new();
    bindings.insert("y".to_string(), series.to_multi("x"));
    Ok(residual::evaluate(
        &residual::builtins::pvi_shifted(),
        &params.bindings(),
        &bindings,
    )?)
}
