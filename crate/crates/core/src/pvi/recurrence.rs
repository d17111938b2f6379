use super::members::{Form, MemberTable};
use super::{check_seed, PviError, PviParams, PviSeed};
use crate::scalar::Scalar;
use crate::series::Series1;

/// `a_{i+2}` from the prefix `a_0..=a_{i+1}`:
///
/// `a_{i+2} = (-sum M*_1..16 + sum M_17..65) / (8 a0 (i+2)(i+1)(a0^2 - 1))`,
/// where the starred members 5 and 16 omit their `a_{i+2}` term.
pub fn next_coefficient<T: Scalar>(i: usize, coeffs: &[T], params: &PviParams<T>) -> Result<T, PviError> {
    next_with_table(&MemberTable::standard(), i, coeffs, params)
}

fn next_with_table<T: Scalar>(
    table: &MemberTable,
    i: usize,
    coeffs: &[T],
    params: &PviParams<T>,
) -> Result<T, PviError> {
    if coeffs.len() < i + 2 {
        return Err(PviError::InsufficientPrefix {
            needed: i + 1,
            have: coeffs.len(),
        });
    }
    let a0 = &coeffs[0];
    check_seed(a0)?;
    let prefix = &coeffs[..i + 2];
    let mut numerator = table.signed_sum(i, prefix, params, Form::Starred)?;
    numerator = -numerator;
    let mut denom = a0.product(a0);
    denom -= &T::one();
    denom *= a0;
    denom *= &T::from_i64(8 * ((i + 2) * (i + 1)) as i64);
    numerator /= &denom;
    Ok(numerator)
}

/// Coefficients `a_0..=a_order` of the Maclaurin series.
pub fn solve<T: Scalar>(params: &PviParams<T>, seed: &PviSeed<T>, order: usize) -> Result<Series1<T>, PviError> {
    solve_with_table(&MemberTable::standard(), params, seed, order)
}

/// [`solve`] with an explicit member table (used to check that perturbing a
/// single member is detected).
pub fn solve_with_table<T: Scalar>(
    table: &MemberTable,
    params: &PviParams<T>,
    seed: &PviSeed<T>,
    order: usize,
) -> Result<Series1<T>, PviError> {
    if order < 1 {
        return Err(PviError::OrderTooSmall(order));
    }
    let mut a = vec![seed.a0().clone(), seed.a1().clone()];
    for i in 0..order - 1 {
        let next = next_with_table(table, i, &a, params)?;
        a.push(next);
    }
    Ok(Series1::new(a).expect("non-empty"))
}
