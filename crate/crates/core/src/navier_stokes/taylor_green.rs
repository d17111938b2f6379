//! Taylor expansions of the decaying Taylor-Green vortex
//!
//! `u = -cos x sin y e^{-2 nu t}`, `v = sin x cos y e^{-2 nu t}`, `w = 0`,
//! `P = -(rho/4)(cos 2x + cos 2y) e^{-4 nu t}`,
//!
//! an exact solution used as an oracle for the coefficient identities.

use num_bigint::BigInt;
use num_traits::One;

use super::{FlowSeries, NsError, AXES};
use crate::scalar::{Rational, Scalar};
use crate::series::SeriesK;

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Coefficient of `x^n` in `cos(w x)` (`odd = false`) or `sin(w x)`.
fn trig(n: usize, w: i64, odd: bool) -> Rational {
    if n % 2 != usize::from(odd) {
        return Rational::from_i64(0);
    }
    let sign = if (n / 2).is_multiple_of(2) { 1 } else { -1 };
    Rational::new(BigInt::from(sign) * BigInt::from(w).pow(n as u32), factorial(n))
}

fn cos(n: usize, w: i64) -> Rational {
    trig(n, w, false)
}

fn sin(n: usize, w: i64) -> Rational {
    trig(n, w, true)
}

/// Coefficients of `e^{rate t}` through `cap`.
fn exponential<T: Scalar>(rate: &T, cap: usize) -> Vec<T> {
    let mut out = vec![T::one()];
    for l in 1..=cap {
        let mut next = out[l - 1].product(rate);
        next /= &T::from_i64(l as i64);
        out.push(next);
    }
    out
}

/// Spatial factor of `u`, `v`, `w` at `(i, j, k)`.
fn velocity_space(component: usize, idx: &[usize]) -> Rational {
    if idx[2] != 0 {
        return Rational::from_i64(0);
    }
    match component {
        0 => -(cos(idx[0], 1) * sin(idx[1], 1)),
        1 => sin(idx[0], 1) * cos(idx[1], 1),
        _ => Rational::from_i64(0),
    }
}

/// `cos 2x + cos 2y` at `(i, j, k)`.
fn pressure_space(idx: &[usize]) -> Rational {
    if idx[2] != 0 {
        return Rational::from_i64(0);
    }
    let mut v = Rational::from_i64(0);
    if idx[1] == 0 {
        v += cos(idx[0], 2);
    }
    if idx[0] == 0 {
        v += cos(idx[1], 2);
    }
    v
}

/// Velocity, pressure and parameters of the vortex, truncated to `caps`
/// (over `x, y, z, t`).
pub fn taylor_green<T: Scalar>(caps: [usize; 4], rho: T, nu: T) -> Result<FlowSeries<T>, NsError> {
    let axes = SeriesK::<T>::axis_labels(&AXES);
    let decay2 = exponential(&nu.scaled_by(-2), caps[3]);
    let decay4 = exponential(&nu.scaled_by(-4), caps[3]);
    let field = |component: usize| {
        SeriesK::from_fn(axes.clone(), caps.to_vec(), |idx| {
            let mut v = T::from_rational(&velocity_space(component, idx));
            v *= &decay2[idx[3]];
            v
        })
    };
    let mut amplitude = rho.clone();
    amplitude /= &T::from_i64(-4);
    let pressure = SeriesK::from_fn(axes.clone(), caps.to_vec(), |idx| {
        let mut v = T::from_rational(&pressure_space(idx));
        v *= &decay4[idx[3]];
        v *= &amplitude;
        v
    });
    FlowSeries::new(field(0), field(1), field(2), pressure, rho, nu)
}

/// Initial velocity coefficients (over `x, y, z`) of the vortex.
pub fn taylor_green_initial<T: Scalar>(caps: [usize; 3]) -> [SeriesK<T>; 3] {
    let axes = SeriesK::<T>::axis_labels(&AXES[..3]);
    [0, 1, 2].map(|c| SeriesK::from_fn(axes.clone(), caps.to_vec(), |idx| T::from_rational(&velocity_space(c, idx))))
}
