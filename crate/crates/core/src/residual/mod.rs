//! Generic residual engine: substitute truncated series into a polynomial
//! differential expression and collect the coefficients that must vanish.

pub mod builtins;
mod engine;
mod expression;

pub use engine::{evaluate, term_valid_order, EngineError, ResidualReport, Verdict};
pub use expression::{Factor, ParamPoly, PolyDiffExpression, Term};
