//! Fixed-step RK4 integration of the equation, used as a numerical oracle
//! for the series.
//!
//! The right-hand side is the original (unshifted) polynomial form divided
//! through by the `y''` multiplier `2 X^2 y (X-1)^2 (y-1)(y-X)`, with
//! `X = x - 1`. It shares no code with the recurrence or the shifted
//! expression.

use thiserror::Error;

use super::PviParams;
use crate::scalar::Scalar;
use crate::series::Series1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("the y'' multiplier vanishes at x = {x} (y = {y}); the path crosses a singularity")]
    Singular { x: f64, y: f64 },
    #[error("integration produced a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("step must be positive and finite and the interval end finite and non-negative")]
    InvalidGrid,
}

/// `y''` at shifted coordinate `x`.
pub fn normal_form(x: f64, y: f64, p: f64, params: &PviParams<f64>) -> Result<f64, OracleError> {
    let t = x - 1.0;
    let PviParams {
        alpha,
        beta,
        gamma,
        delta,
    } = *params;
    let den = 2.0 * t * t * y * (t - 1.0) * (t - 1.0) * (y - 1.0) * (y - t);
    let p2 = t * t * (t - 1.0) * (t - 1.0) * (3.0 * y * y - 2.0 * y * (1.0 + t) + t) * p * p;
    let p1 = -2.0 * t * y * (t - 1.0) * (y - 1.0) * ((2.0 * t - 1.0) * y + t * t) * p;
    let par = 2.0
        * (alpha * y * y * (y - 1.0).powi(2) * (y - t).powi(2)
            + beta * t * (y - 1.0).powi(2) * (y - t).powi(2)
            + gamma * y * y * (t - 1.0) * (y - t).powi(2)
            + delta * t * y * y * (t - 1.0) * (y - 1.0).powi(2));
    let num = p2 + p1 + par;
    let scale = p2.abs() + p1.abs() + par.abs();
    if den == 0.0 || den.abs() <= f64::EPSILON * f64::EPSILON * scale {
        return Err(OracleError::Singular { x, y });
    }
    let q = num / den;
    if !q.is_finite() {
        return Err(OracleError::NonFinite { x });
    }
    Ok(q)
}

/// One sample of an RK4 trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub p: f64,
}

/// Integrates from `x = 0` to `x_end` with `ceil(x_end / step)` equal steps.
pub fn rk4(params: &PviParams<f64>, y0: f64, p0: f64, x_end: f64, step: f64) -> Result<Vec<Sample>, OracleError> {
    if !(step > 0.0 && step.is_finite() && x_end >= 0.0 && x_end.is_finite()) {
        return Err(OracleError::InvalidGrid);
    }
    let n = (x_end / step - 1e-9).ceil().max(0.0) as usize;
    let h = if n == 0 { 0.0 } else { x_end / n as f64 };
    let f = |x: f64, y: f64, p: f64| normal_form(x, y, p, params).map(|q| (p, q));
    let mut out = Vec::with_capacity(n + 1);
    let (mut y, mut p) = (y0, p0);
    out.push(Sample { x: 0.0, y, p });
    for s in 0..n {
        let x = s as f64 * h;
        let (k1y, k1p) = f(x, y, p)?;
        let (k2y, k2p) = f(x + h / 2.0, y + h / 2.0 * k1y, p + h / 2.0 * k1p)?;
        let (k3y, k3p) = f(x + h / 2.0, y + h / 2.0 * k2y, p + h / 2.0 * k2p)?;
        let (k4y, k4p) = f(x + h, y + h * k3y, p + h * k3p)?;
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        let xn = (s + 1) as f64 * h;
        if !(y.is_finite() && p.is_finite()) {
            return Err(OracleError::NonFinite { x: xn });
        }
        out.push(Sample { x: xn, y, p });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub x: f64,
    pub series: f64,
    pub numeric: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub rows: Vec<OracleRow>,
    pub max_abs_error: f64,
}

impl OracleComparison {
    /// Least-squares slope of `log10 |error|` against `log10 x` over the rows
    /// with `lo <= x <= hi` and nonzero error.
    pub fn convergence_slope(&self, lo: f64, hi: f64) -> Option<f64> {
        convergence_slope(&self.rows, lo, hi)
    }
}

pub fn convergence_slope(rows: &[OracleRow], lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.x >= lo && r.x <= hi && r.x > 0.0 && r.abs_error > 0.0)
        .map(|r| (r.x.log10(), r.abs_error.log10()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Evaluates `series` on the RK4 grid of `[0, x_end]` seeded with its first
/// two coefficients and records the pointwise differences.
pub fn oracle_compare<T: Scalar>(
    series: &Series1<T>,
    params: &PviParams<T>,
    x_end: f64,
    step: f64,
) -> Result<OracleComparison, OracleError> {
    let s = series.to_f64();
    let a0 = s.coeffs()[0];
    let a1 = s.coeffs().get(1).copied().unwrap_or(0.0);
    let samples = rk4(&params.to_f64(), a0, a1, x_end, step)?;
    let rows: Vec<OracleRow> = samples
        .iter()
        .map(|smp| {
            let v = s.eval(&smp.x);
            OracleRow {
                x: smp.x,
                series: v,
                numeric: smp.y,
                abs_error: (v - smp.y).abs(),
            }
        })
        .collect();
    let max_abs_error = rows.iter().map(|r| r.abs_error).fold(0.0, f64::max);
    Ok(OracleComparison { rows, max_abs_error })
}
