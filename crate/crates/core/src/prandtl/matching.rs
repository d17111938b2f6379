//! Best-effort fit of the wall slope to the external stream.
//!
//! The construction leaves `A_{i,1,k}` free; here it is chosen so that
//! `u(x, y_match, t)` is as close as possible to `U(x, t)` on a sample grid,
//! by Gauss-Newton with a finite-difference Jacobian. This is a heuristic:
//! it can stall or converge to a poor fit, and it is not used by
//! [`construct`](super::construct) or [`verify`](super::verify).

use nalgebra::{DMatrix, DVector};

use super::{construct, level_demand, ExternalFlow, PrandtlError, WallSlope, SURFACE_AXES};
use crate::series::SeriesK;

#[derive(Debug, Clone, PartialEq)]
pub struct MatchOptions {
    /// Distance from the wall at which `u` is matched to `U`. No default.
    pub y_match: f64,
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub max_iterations: usize,
    /// Stop once the update's largest component falls below this.
    pub step_tolerance: f64,
    pub fd_step: f64,
}

impl MatchOptions {
    pub fn new(y_match: f64, xs: Vec<f64>, ts: Vec<f64>) -> Self {
        Self {
            y_match,
            xs,
            ts,
            max_iterations: 30,
            step_tolerance: 1e-12,
            fd_step: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub wall: WallSlope<f64>,
    /// Root-mean-square mismatch `u(x, y_match, t) - U(x, t)` on the grid.
    pub rms_mismatch: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn mismatch(
    external: &ExternalFlow<f64>,
    wall: &WallSlope<f64>,
    nu: f64,
    caps: [usize; 3],
    opts: &MatchOptions,
) -> Result<DVector<f64>, PrandtlError> {
    let bl = construct(external, wall, nu, 1.0, caps)?;
    let mut r = Vec::with_capacity(opts.xs.len() * opts.ts.len());
    for &x in &opts.xs {
        for &t in &opts.ts {
            r.push(bl.a.eval(&[x, opts.y_match, t]) - external.series().eval(&[x, t]));
        }
    }
    Ok(DVector::from_vec(r))
}

/// Fits the wall slope entries (caps as required by `caps`) starting from
/// `initial`, which is padded or cropped to the required caps.
pub fn match_wall_slope(
    external: &ExternalFlow<f64>,
    initial: &WallSlope<f64>,
    nu: f64,
    caps: [usize; 3],
    opts: &MatchOptions,
) -> Result<MatchResult, PrandtlError> {
    let need = level_demand(caps)?.wall;
    let start = initial.series().zero_extend(&need);
    let mut params: Vec<f64> = start.data().to_vec();
    let axes = SeriesK::<f64>::axis_labels(&SURFACE_AXES);
    let build = |p: &[f64]| -> Result<WallSlope<f64>, PrandtlError> {
        WallSlope::new(SeriesK::from_vec(axes.clone(), need.to_vec(), p.to_vec())?)
    };

    let mut r = mismatch(external, &build(&params)?, nu, caps, opts)?;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let mut jac = DMatrix::zeros(r.len(), params.len());
        for c in 0..params.len() {
            let mut p = params.clone();
            let h = opts.fd_step * params[c].abs().max(1.0);
            p[c] += h;
            let rp = mismatch(external, &build(&p)?, nu, caps, opts)?;
            jac.set_column(c, &((rp - &r) / h));
        }
        let Ok(step) = jac.svd(true, true).solve(&(-&r), 1e-12) else {
            break;
        };
        for (p, s) in params.iter_mut().zip(step.iter()) {
            *p += s;
        }
        r = mismatch(external, &build(&params)?, nu, caps, opts)?;
        if step.amax() < opts.step_tolerance {
            converged = true;
            break;
        }
    }
    let rms = if r.is_empty() { 0.0 } else { (r.norm_squared() / r.len() as f64).sqrt() };
    Ok(MatchResult {
        wall: build(&params)?,
        rms_mismatch: rms,
        iterations,
        converged,
    })
}
