use super::{BoundaryLayerSeries, SURFACE_AXES};
use crate::scalar::Scalar;
use crate::series::SeriesK;

/// `du/dy` at the wall as a series over `(x, t)`: the `y`-linear
/// coefficients `A_{i,1,k}`. Separation occurs where it vanishes.
pub fn wall_shear_profile<T: Scalar>(bl: &BoundaryLayerSeries<T>) -> SeriesK<T> {
    let [ci, cj, ck] = bl.caps();
    SeriesK::from_fn(SeriesK::<T>::axis_labels(&SURFACE_AXES), vec![ci, ck], |idx| {
        if cj == 0 {
            T::zero()
        } else {
            bl.a.at(&[idx[0], 1, idx[1]]).clone()
        }
    })
}

/// An interval `[lo, hi]` in `x` over which the evaluated shear changes sign,
/// with the zero located by bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearBracket {
    pub lo: f64,
    pub hi: f64,
    pub root: f64,
}

/// Scans consecutive points of `xs` at time `t` for sign changes of the
/// shear polynomial and refines each by bisection. Exact zeros at grid
/// points are reported as degenerate brackets.
pub fn shear_sign_changes<T: Scalar>(shear: &SeriesK<T>, t: f64, xs: &[f64]) -> Vec<ShearBracket> {
    let s = shear.to_f64();
    let f = |x: f64| s.eval(&[x, t]);
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            out.push(ShearBracket { lo: a, hi: a, root: a });
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        let (mut lo, mut hi, mut flo) = (a, b, fa);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            let fm = f(mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        out.push(ShearBracket {
            lo: a,
            hi: b,
            root: 0.5 * (lo + hi),
        });
    }
    if let Some(&last) = xs.last() {
        if xs.len() > 1 && f(last) == 0.0 {
            out.push(ShearBracket {
                lo: last,
                hi: last,
                root: last,
            });
        }
    }
    out
}
