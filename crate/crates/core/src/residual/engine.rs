use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use super::expression::{PolyDiffExpression, Term};
use crate::scalar::Scalar;
use crate::series::{SeriesError, SeriesK, ValidOrder};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("unknown `{0}` is not bound")]
    UnboundUnknown(String),
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
    #[error("binding `{name}` has axes {found:?}, expression expects {expected:?}")]
    AxisMismatch {
        name: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every residual coefficient within the trustworthy order vanishes.
    Pass,
    /// Some residual coefficient within the trustworthy order is nonzero.
    Fail,
    /// The inputs are too short for any residual coefficient to be trusted.
    Inconclusive,
}

/// Outcome of substituting truncated series into an expression.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport<T> {
    /// Residual coefficients inside the trustworthy box; `None` when that box is empty.
    pub residual: Option<SeriesK<T>>,
    pub trustworthy_order: ValidOrder,
    pub max_abs_within_trustworthy: T,
    pub exact_zero: bool,
    /// Largest input coefficient magnitude; scales the float zero tolerance.
    pub input_scale: f64,
}

impl<T: Scalar> ResidualReport<T> {
    pub fn from_residual(residual: SeriesK<T>, input_scale: f64) -> Self {
        let exact_zero = residual.data().iter().all(|v| v.is_negligible(input_scale));
        Self {
            trustworthy_order: residual.valid_order(),
            max_abs_within_trustworthy: residual.max_abs(),
            residual: Some(residual),
            exact_zero,
            input_scale,
        }
    }

    pub fn untrustworthy(order: ValidOrder, input_scale: f64) -> Self {
        Self {
            residual: None,
            trustworthy_order: order,
            max_abs_within_trustworthy: T::zero(),
            exact_zero: true,
            input_scale,
        }
    }

    pub fn verdict(&self) -> Verdict {
        match (&self.residual, self.exact_zero) {
            (None, _) => Verdict::Inconclusive,
            (Some(_), true) => Verdict::Pass,
            (Some(_), false) => Verdict::Fail,
        }
    }

    /// First (row-major) residual index that fails the zero test.
    pub fn first_nonzero(&self) -> Option<Vec<usize>> {
        let r = self.residual.as_ref()?;
        r.indices().find(|i| !r.at(i).is_negligible(self.input_scale))
    }
}

/// Trustworthy order of a single term given the orders of its bindings.
pub fn term_valid_order<T: Scalar>(
    term: &Term,
    rank: usize,
    bindings: &BTreeMap<String, SeriesK<T>>,
) -> Result<ValidOrder, EngineError> {
    let Some(min_degree) = term.min_degree() else {
        return Ok(ValidOrder::unbounded(rank));
    };
    let mut order = ValidOrder::unbounded(rank);
    for f in &term.factors {
        if f.power == 0 {
            continue;
        }
        let s = bindings
            .get(&f.unknown)
            .ok_or_else(|| EngineError::UnboundUnknown(f.unknown.clone()))?;
        let mut fo = s.valid_order();
        for (axis, &m) in f.derivative.iter().enumerate() {
            fo = fo.derivative(axis, m);
        }
        order = order.product(&fo);
    }
    Ok(order.shift(&min_degree))
}

/// Substitutes `bindings` into `expr` and returns the residual through the
/// order where every coefficient is exact.
///
/// Per term the trusted order is the binding order reduced by derivative
/// orders, min-composed through products and raised by the polynomial's
/// minimum degree; the expression's order is the minimum over terms.
pub fn evaluate<T: Scalar>(
    expr: &PolyDiffExpression,
    params: &BTreeMap<String, T>,
    bindings: &BTreeMap<String, SeriesK<T>>,
) -> Result<ResidualReport<T>, EngineError> {
    let rank = expr.axes.len();
    for name in expr.unknowns() {
        let s = bindings
            .get(name)
            .ok_or_else(|| EngineError::UnboundUnknown(name.to_string()))?;
        if s.axes() != expr.axes.as_slice() {
            return Err(EngineError::AxisMismatch {
                name: name.to_string(),
                expected: expr.axes.clone(),
                found: s.axes().to_vec(),
            });
        }
    }
    let input_scale = expr
        .unknowns()
        .iter()
        .map(|n| bindings[*n].max_abs_f64())
        .fold(0.0, f64::max);

    let mut order = ValidOrder::unbounded(rank);
    let mut widest = vec![0usize; rank];
    for term in &expr.terms {
        order = order.product(&term_valid_order(term, rank, bindings)?);
        for (w, d) in widest.iter_mut().zip(term.max_degree()) {
            *w = (*w).max(d);
        }
    }
    let order = order.bounded_by(&widest);
    let Some(caps) = order.as_caps() else {
        return Ok(ResidualReport::untrustworthy(order, input_scale));
    };

    let contributions: Vec<SeriesK<T>> = expr
        .terms
        .par_iter()
        .map(|term| term_series(term, &expr.axes, &caps, params, bindings))
        .collect::<Result<_, _>>()?;
    let mut residual = SeriesK::zeros(expr.axes.clone(), caps);
    for c in &contributions {
        residual = residual.add(c)?;
    }
    Ok(ResidualReport::from_residual(residual, input_scale))
}

fn term_series<T: Scalar>(
    term: &Term,
    axes: &[String],
    caps: &[usize],
    params: &BTreeMap<String, T>,
    bindings: &BTreeMap<String, SeriesK<T>>,
) -> Result<SeriesK<T>, EngineError> {
    let mut out = SeriesK::zeros(axes.to_vec(), caps.to_vec());
    let Some(min_degree) = term.min_degree() else {
        return Ok(out);
    };
    if caps.iter().zip(&min_degree).any(|(c, d)| d > c) {
        return Ok(out);
    }
    // Only coefficients up to caps - min_degree of the factor product can land inside the box.
    let inner: Vec<usize> = caps.iter().zip(&min_degree).map(|(c, d)| c - d).collect();
    let mut product = SeriesK::zeros(axes.to_vec(), inner.clone());
    product.set(&vec![0; axes.len()], T::one())?;
    for f in &term.factors {
        if f.power == 0 {
            continue;
        }
        let mut s = bindings[&f.unknown].clone();
        for (axis, &m) in f.derivative.iter().enumerate() {
            if m > 0 {
                s = s.diff(axis, m)?;
            }
        }
        let s = s.truncate(&inner)?;
        for _ in 0..f.power {
            product = product.mul(&s)?;
        }
    }
    for (degree, coeff) in &term.poly {
        let c = coeff.eval(params).map_err(EngineError::UnboundParameter)?;
        if c.is_zero() {
            continue;
        }
        for idx in out.indices() {
            if idx.iter().zip(degree).any(|(i, d)| i < d) {
                continue;
            }
            let src: Vec<usize> = idx.iter().zip(degree).map(|(i, d)| i - d).collect();
            let mut v = product.at(&src).clone();
            v *= &c;
            let mut cur = out.at(&idx).clone();
            cur += &v;
            out.set(&idx, cur)?;
        }
    }
    Ok(out)
}
