//! Agreement between the hand-derived member table and the generic engine.
//!
//! For any coefficient vector (a solution or not) the engine's residual
//! coefficient `i` must equal `sum(M_1..M_16) - sum(M_17..M_65)` with members
//! 5 and 16 in full form. A transcription slip in a single member shows up
//! as a disagreement at the first `i` where that member is active.

use super::members::{Form, MemberTable};
use super::{solve, verify, PviError, PviParams, PviSeed};
use crate::scalar::Scalar;
use crate::series::Series1;

#[derive(Debug, Clone, PartialEq)]
pub struct Disagreement<T> {
    pub i: usize,
    pub engine: T,
    pub members: T,
    /// Members with a nonempty summation range at `i`.
    pub active_members: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheck<T> {
    /// Highest index compared.
    pub checked_through: usize,
    pub disagreement: Option<Disagreement<T>>,
}

impl<T> CrossCheck<T> {
    pub fn agrees(&self) -> bool {
        self.disagreement.is_none()
    }
}

/// Compares coefficient `i` of the engine residual of `series` with the
/// member sums for `i = 0..=i_max`. The series must have order at least
/// `i_max + 2`.
pub fn compare_with_engine<T: Scalar>(
    table: &MemberTable,
    series: &Series1<T>,
    params: &PviParams<T>,
    i_max: usize,
) -> Result<CrossCheck<T>, PviError> {
    if series.order() < i_max + 2 {
        return Err(PviError::InsufficientPrefix {
            needed: i_max + 2,
            have: series.order() + 1,
        });
    }
    let report = verify(series, params)?;
    let residual = report.residual.expect("order >= 2 gives a trusted residual");
    let scale = report.input_scale;
    for i in 0..=i_max {
        let engine = residual.at(&[i]).clone();
        let members = table.signed_sum(i, series.coeffs(), params, Form::Full)?;
        let diff = engine.difference(&members);
        let tol_scale = scale.max(members.to_f64().abs()).max(engine.to_f64().abs());
        if !diff.is_negligible(tol_scale) {
            return Ok(CrossCheck {
                checked_through: i,
                disagreement: Some(Disagreement {
                    i,
                    engine,
                    members,
                    active_members: table.active_at(i),
                }),
            });
        }
    }
    Ok(CrossCheck {
        checked_through: i_max,
        disagreement: None,
    })
}

/// Solves through order `i_max + 2` and cross-checks the result.
pub fn members_vs_engine<T: Scalar>(
    i_max: usize,
    params: &PviParams<T>,
    seed: &PviSeed<T>,
) -> Result<CrossCheck<T>, PviError> {
    let series = solve(params, seed, i_max + 2)?;
    compare_with_engine(&MemberTable::standard(), &series, params, i_max)
}
