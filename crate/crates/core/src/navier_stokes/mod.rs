//! Four-index coefficient identities of the incompressible Navier-Stokes
//! equations without body force, with `u, v, w, P` expanded as
//! `sum A_{ijkl} x^i y^j z^k t^l` (and `B`, `C`, `D`).
//!
//! Each momentum identity contains exactly one coefficient at time level
//! `l + 1`, which [`time_march`] solves for. Pressure is input data; the
//! continuity identity is reported, not enforced.

mod taylor_green;

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::residual::builtins::{self, INV_RHO, NU};
use crate::residual::{self, EngineError, ResidualReport, Verdict};
use crate::scalar::Scalar;
use crate::series::{MultiIndexIter, SeriesError, SeriesK, ValidOrder};

pub use taylor_green::{taylor_green, taylor_green_initial};

pub const AXES: [&str; 4] = ["x", "y", "z", "t"];
pub const FIELDS: [&str; 4] = ["u", "v", "w", "P"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NsError {
    #[error("density must be nonzero")]
    ZeroDensity,
    #[error("field `{name}` does not match: {detail}")]
    Incompatible { name: &'static str, detail: String },
    #[error("index {index:?} is outside the trustworthy range {trust}")]
    OutOfRange { index: Vec<usize>, trust: ValidOrder },
    #[error("caps insufficient: {0}")]
    CapsInsufficient(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Velocity components `A, B, C`, pressure `D`, over axes `(x, y, z, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSeries<T> {
    velocity: [SeriesK<T>; 3],
    pressure: SeriesK<T>,
    rho: T,
    nu: T,
}

impl<T: Scalar> FlowSeries<T> {
    pub fn new(a: SeriesK<T>, b: SeriesK<T>, c: SeriesK<T>, d: SeriesK<T>, rho: T, nu: T) -> Result<Self, NsError> {
        if rho.is_zero() {
            return Err(NsError::ZeroDensity);
        }
        let axes = SeriesK::<T>::axis_labels(&AXES);
        for (s, name) in [&a, &b, &c, &d].into_iter().zip(FIELDS) {
            if s.axes() != axes.as_slice() {
                return Err(NsError::Incompatible {
                    name,
                    detail: format!("axes {:?}, expected {:?}", s.axes(), AXES),
                });
            }
            if s.caps() != a.caps() {
                return Err(NsError::Incompatible {
                    name,
                    detail: format!("caps {:?}, expected {:?}", s.caps(), a.caps()),
                });
            }
        }
        Ok(Self {
            velocity: [a, b, c],
            pressure: d,
            rho,
            nu,
        })
    }

    /// All-zero velocity and pressure with the given caps.
    pub fn zeros(caps: [usize; 4], rho: T, nu: T) -> Result<Self, NsError> {
        let z = SeriesK::zeros(SeriesK::<T>::axis_labels(&AXES), caps.to_vec());
        Self::new(z.clone(), z.clone(), z.clone(), z, rho, nu)
    }

    pub fn a(&self) -> &SeriesK<T> {
        &self.velocity[0]
    }

    pub fn b(&self) -> &SeriesK<T> {
        &self.velocity[1]
    }

    pub fn c(&self) -> &SeriesK<T> {
        &self.velocity[2]
    }

    pub fn d(&self) -> &SeriesK<T> {
        &self.pressure
    }

    pub fn velocity(&self, component: usize) -> &SeriesK<T> {
        &self.velocity[component]
    }

    pub fn rho(&self) -> &T {
        &self.rho
    }

    pub fn nu(&self) -> &T {
        &self.nu
    }

    pub fn caps(&self) -> &[usize] {
        self.velocity[0].caps()
    }

    /// Fields in `u, v, w, P` order.
    pub fn fields(&self) -> [&SeriesK<T>; 4] {
        [&self.velocity[0], &self.velocity[1], &self.velocity[2], &self.pressure]
    }

    pub fn to_f64(&self) -> FlowSeries<f64> {
        FlowSeries {
            velocity: [0, 1, 2].map(|n| self.velocity[n].to_f64()),
            pressure: self.pressure.to_f64(),
            rho: self.rho.to_f64(),
            nu: self.nu.to_f64(),
        }
    }

    /// Indices at which all three momentum identities can be evaluated.
    pub fn momentum_trust(&self) -> ValidOrder {
        let c = self.caps();
        ValidOrder::from_bounds(vec![
            c[0] as i64 - 2,
            c[1] as i64 - 2,
            c[2] as i64 - 2,
            c[3] as i64 - 1,
        ])
    }

    pub fn continuity_trust(&self) -> ValidOrder {
        let c = self.caps();
        ValidOrder::from_bounds(vec![c[0] as i64 - 1, c[1] as i64 - 1, c[2] as i64 - 1, c[3] as i64])
    }

    fn input_scale(&self) -> f64 {
        self.fields().iter().map(|s| s.max_abs_f64()).fold(0.0, f64::max)
    }
}

fn int<T: Scalar>(v: usize) -> T {
    T::from_i64(v as i64)
}

/// `sum_{p,q,r,s} (i-p+1) A_{pqrs} X_{i-p+1,...} + (j-q+1) B_{pqrs} X_{..,j-q+1,..}
/// + (k-r+1) C_{pqrs} X_{..,k-r+1,..}` for `X` the velocity component `component`.
fn convective<T: Scalar>(velocity: &[SeriesK<T>; 3], component: usize, idx: &[usize; 4]) -> T {
    let x = &velocity[component];
    let [i, j, k, l] = *idx;
    let mut acc = T::zero();
    for pqrs in MultiIndexIter::new(idx) {
        let [p, q, r, s] = [pqrs[0], pqrs[1], pqrs[2], pqrs[3]];
        let rem = [i - p, j - q, k - r, l - s];
        for (carrier_axis, carrier) in velocity.iter().enumerate() {
            let coef = carrier.at(&pqrs);
            if coef.is_zero() {
                continue;
            }
            let mut shifted = rem;
            shifted[carrier_axis] += 1;
            let mut t = int::<T>(shifted[carrier_axis]);
            t *= coef;
            t *= x.at(&shifted);
            acc += &t;
        }
    }
    acc
}

/// `(i+2)(i+1) X_{i+2,j,k,l} + (j+2)(j+1) X_{i,j+2,k,l} + (k+2)(k+1) X_{i,j,k+2,l}`.
fn viscous<T: Scalar>(x: &SeriesK<T>, idx: &[usize; 4]) -> T {
    let mut acc = T::zero();
    for axis in 0..3 {
        let mut s = *idx;
        s[axis] += 2;
        let mut t = int::<T>((idx[axis] + 2) * (idx[axis] + 1));
        t *= x.at(&s);
        acc += &t;
    }
    acc
}

/// `(m+1) D` shifted by one along spatial axis `axis`.
fn pressure_gradient<T: Scalar>(d: &SeriesK<T>, axis: usize, idx: &[usize; 4]) -> T {
    let mut s = *idx;
    s[axis] += 1;
    let mut t = int::<T>(idx[axis] + 1);
    t *= d.at(&s);
    t
}

/// LHS minus RHS of the momentum coefficient identity for component `axis`
/// (0 = x, 1 = y, 2 = z) at `index = (i, j, k, l)`:
///
/// `conv + (l+1) X_{i,j,k,l+1} - [-(1/rho)(m+1) D_{..m+1..} + nu * visc]`.
pub fn momentum_identity<T: Scalar>(axis: usize, flow: &FlowSeries<T>, index: &[usize; 4]) -> Result<T, NsError> {
    let trust = flow.momentum_trust();
    if axis > 2 || !trust.contains(index) {
        return Err(NsError::OutOfRange {
            index: index.to_vec(),
            trust,
        });
    }
    Ok(momentum_identity_unchecked(axis, flow, index))
}

fn momentum_identity_unchecked<T: Scalar>(axis: usize, flow: &FlowSeries<T>, index: &[usize; 4]) -> T {
    let x = &flow.velocity[axis];
    let mut acc = convective(&flow.velocity, axis, index);
    let mut next = *index;
    next[3] += 1;
    let mut dt = int::<T>(next[3]);
    dt *= x.at(&next);
    acc += &dt;
    let mut grad = pressure_gradient(&flow.pressure, axis, index);
    grad /= &flow.rho;
    acc += &grad;
    let mut visc = viscous(x, index);
    visc *= &flow.nu;
    acc -= &visc;
    acc
}

/// Per-equation residual reports.
#[derive(Debug, Clone, PartialEq)]
pub struct NsReport<T> {
    pub momentum: [ResidualReport<T>; 3],
    pub continuity: ResidualReport<T>,
}

impl<T: Scalar> NsReport<T> {
    pub fn reports(&self) -> impl Iterator<Item = (&'static str, &ResidualReport<T>)> {
        ["momentum-x", "momentum-y", "momentum-z"]
            .into_iter()
            .zip(self.momentum.iter())
            .chain(std::iter::once(("continuity", &self.continuity)))
    }

    /// Pass only if every equation passes; inconclusive if any is.
    pub fn verdict(&self) -> Verdict {
        let vs: Vec<Verdict> = self.reports().map(|(_, r)| r.verdict()).collect();
        if vs.contains(&Verdict::Fail) {
            Verdict::Fail
        } else if vs.contains(&Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}

fn sweep<T: Scalar>(trust: ValidOrder, scale: f64, f: impl Fn(&[usize; 4]) -> T + Sync) -> ResidualReport<T> {
    let Some(caps) = trust.as_caps() else {
        return ResidualReport::untrustworthy(trust, scale);
    };
    let values: Vec<T> = MultiIndexIter::new(&caps)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|idx| f(&[idx[0], idx[1], idx[2], idx[3]]))
        .collect();
    let residual = SeriesK::from_vec(SeriesK::<T>::axis_labels(&AXES), caps, values).expect("sized by caps");
    ResidualReport::from_residual(residual, scale)
}

/// `(i+1) A_{i+1,j,k,l} + (j+1) B_{i,j+1,k,l} + (k+1) C_{i,j,k+1,l}` over
/// every index where it is defined.
pub fn continuity_residual<T: Scalar>(flow: &FlowSeries<T>) -> ResidualReport<T> {
    sweep(flow.continuity_trust(), flow.input_scale(), |idx| {
        let mut acc = T::zero();
        for axis in 0..3 {
            acc += &pressure_gradient(&flow.velocity[axis], axis, idx);
        }
        acc
    })
}

/// Evaluates the three momentum identities and continuity over their
/// trustworthy indices.
pub fn verify<T: Scalar>(flow: &FlowSeries<T>) -> NsReport<T> {
    let scale = flow.input_scale();
    let momentum = [0, 1, 2].map(|axis| sweep(flow.momentum_trust(), scale, |idx| momentum_identity_unchecked(axis, flow, idx)));
    NsReport {
        momentum,
        continuity: continuity_residual(flow),
    }
}

/// Same check through the generic residual engine and the built-in
/// expressions, independent of the hand-written identities above.
pub fn verify_with_engine<T: Scalar>(flow: &FlowSeries<T>) -> Result<NsReport<T>, NsError> {
    let mut params = BTreeMap::new();
    let mut inv_rho = T::one();
    inv_rho /= &flow.rho;
    params.insert(INV_RHO.to_string(), inv_rho);
    params.insert(NU.to_string(), flow.nu.clone());
    let bindings: BTreeMap<String, SeriesK<T>> = FIELDS
        .iter()
        .zip(flow.fields())
        .map(|(n, s)| (n.to_string(), s.clone()))
        .collect();
    let [mx, my, mz] = builtins::navier_stokes();
    let momentum = [
        residual::evaluate(&mx, &params, &bindings)?,
        residual::evaluate(&my, &params, &bindings)?,
        residual::evaluate(&mz, &params, &bindings)?,
    ];
    let continuity = residual::evaluate(&builtins::continuity(), &params, &bindings)?;
    Ok(NsReport { momentum, continuity })
}

/// Builds time levels `1..=levels` from velocity data at `t = 0` (series
/// over `(x, y, z)`) and a pressure series over `(x, y, z, t)`:
///
/// `X_{i,j,k,l+1} = [-(1/rho)(m+1) D_{..m+1..,l} + nu * visc - conv] / (l+1)`.
///
/// Level `l` is exact for spatial indices up to `cap - 2l`, since the viscous
/// term reads two orders ahead; the result is cropped to spatial caps
/// `cap - 2 * levels` and time cap `levels`.
pub fn time_march<T: Scalar>(
    initial: [&SeriesK<T>; 3],
    pressure: &SeriesK<T>,
    rho: T,
    nu: T,
    levels: usize,
) -> Result<FlowSeries<T>, NsError> {
    if rho.is_zero() {
        return Err(NsError::ZeroDensity);
    }
    let spatial = SeriesK::<T>::axis_labels(&AXES[..3]);
    for (s, name) in initial.iter().zip(FIELDS) {
        if s.axes() != spatial.as_slice() || s.caps() != initial[0].caps() {
            return Err(NsError::Incompatible {
                name,
                detail: format!("initial data must share axes (x, y, z) and caps, got {:?} {:?}", s.axes(), s.caps()),
            });
        }
    }
    let c0 = initial[0].caps().to_vec();
    if let Some(axis) = (0..3).find(|&a| c0[a] < 2 * levels) {
        return Err(NsError::CapsInsufficient(format!(
            "spatial cap {} on axis {} cannot support {} time levels (needs at least {})",
            c0[axis],
            AXES[axis],
            levels,
            2 * levels
        )));
    }
    if pressure.axes() != SeriesK::<T>::axis_labels(&AXES).as_slice() {
        return Err(NsError::Incompatible {
            name: "P",
            detail: format!("axes {:?}, expected {:?}", pressure.axes(), AXES),
        });
    }
    let need = [c0[0], c0[1], c0[2], levels];
    if pressure.caps().iter().zip(&need).any(|(have, n)| have < n) {
        return Err(NsError::CapsInsufficient(format!(
            "pressure caps {:?} must cover {:?}",
            pressure.caps(),
            need
        )));
    }

    let axes = SeriesK::<T>::axis_labels(&AXES);
    let full = vec![c0[0], c0[1], c0[2], levels];
    let mut velocity: [SeriesK<T>; 3] = [0, 1, 2].map(|n| {
        let src = initial[n];
        SeriesK::from_fn(axes.clone(), full.clone(), |idx| {
            if idx[3] == 0 {
                src.at(&idx[..3]).clone()
            } else {
                T::zero()
            }
        })
    });
    let mut inv_rho = T::one();
    inv_rho /= &rho;

    for l in 0..levels {
        let cap: Vec<usize> = c0.iter().map(|c| c - 2 * (l + 1)).collect();
        let points: Vec<[usize; 4]> = MultiIndexIter::new(&cap).map(|s| [s[0], s[1], s[2], l]).collect();
        let current = &velocity;
        let updates: Vec<[T; 3]> = points
            .par_iter()
            .map(|idx| {
                [0, 1, 2].map(|comp| {
                    let mut v = pressure_gradient(pressure, comp, idx);
                    v *= &inv_rho;
                    v = -v;
                    let mut visc = viscous(&current[comp], idx);
                    visc *= &nu;
                    v += &visc;
                    v -= &convective(current, comp, idx);
                    v /= &int::<T>(l + 1);
                    v
                })
            })
            .collect();
        for (idx, vals) in points.iter().zip(updates) {
            let target = [idx[0], idx[1], idx[2], l + 1];
            for (comp, v) in vals.into_iter().enumerate() {
                velocity[comp].set(&target, v)?;
            }
        }
    }

    let out_caps: Vec<usize> = c0.iter().map(|c| c - 2 * levels).chain(std::iter::once(levels)).collect();
    let [a, b, c] = velocity;
    FlowSeries::new(
        a.truncate(&out_caps)?,
        b.truncate(&out_caps)?,
        c.truncate(&out_caps)?,
        pressure.truncate(&out_caps)?,
        rho,
        nu,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn trivial_flows_have_zero_residuals() {
        let mut flow = FlowSeries::zeros([3, 3, 3, 3], q(1, 1), q(1, 10)).unwrap();
        for (name, dirty) in [("zero", false), ("uniform", true)] {
            if dirty {
                let mut a = flow.a().clone();
                a.set(&[0, 0, 0, 0], q(5, 2)).unwrap();
                let mut d = flow.d().clone();
                d.set(&[0, 0, 0, 0], q(7, 1)).unwrap();
                flow = FlowSeries::new(a, flow.b().clone(), flow.c().clone(), d, q(1, 1), q(1, 10)).unwrap();
            }
            let report = verify(&flow);
            assert_eq!(report.verdict(), Verdict::Pass, "{name}");
            for (_, r) in report.reports() {
                assert!(r.residual.as_ref().unwrap().is_zero());
            }
            for idx in [[0, 0, 0, 0], [1, 1, 1, 2]] {
                assert_eq!(momentum_identity(0, &flow, &idx).unwrap(), q(0, 1));
            }
        }
    }

    #[test]
    fn linear_u_has_unit_divergence() {
        let flow = FlowSeries::zeros([2, 2, 2, 1], q(1, 1), q(0, 1)).unwrap();
        let mut a = flow.a().clone();
        a.set(&[1, 0, 0, 0], q(1, 1)).unwrap();
        let flow = FlowSeries::new(a, flow.b().clone(), flow.c().clone(), flow.d().clone(), q(1, 1), q(0, 1)).unwrap();
        let r = continuity_residual(&flow);
        let res = r.residual.as_ref().unwrap();
        assert_eq!(res.at(&[0, 0, 0, 0]), &q(1, 1));
        assert_eq!(res.data().iter().filter(|v| **v != q(0, 1)).count(), 1);
        assert_eq!(r.verdict(), Verdict::Fail);
    }

    #[test]
    fn out_of_range_and_bad_inputs() {
        let flow = FlowSeries::zeros([3, 3, 3, 2], q(1, 1), q(1, 1)).unwrap();
        assert!(momentum_identity(0, &flow, &[1, 1, 1, 1]).is_ok());
        assert!(matches!(momentum_identity(0, &flow, &[2, 0, 0, 0]), Err(NsError::OutOfRange { .. })));
        assert!(matches!(momentum_identity(0, &flow, &[0, 0, 0, 2]), Err(NsError::OutOfRange { .. })));
        assert!(matches!(momentum_identity(3, &flow, &[0, 0, 0, 0]), Err(NsError::OutOfRange { .. })));
        assert_eq!(FlowSeries::zeros([1, 1, 1, 1], q(0, 1), q(1, 1)), Err(NsError::ZeroDensity));
        let small = FlowSeries::zeros([1, 1, 1, 0], q(1, 1), q(1, 1)).unwrap();
        assert_eq!(verify(&small).verdict(), Verdict::Inconclusive);
    }

    #[test]
    fn march_of_nothing_is_nothing() {
        let flow = FlowSeries::<Rational>::zeros([4, 4, 4, 2], q(1, 1), q(1, 3)).unwrap();
        let init = flow.a().truncate(&[4, 4, 4, 0]).unwrap();
        let init = SeriesK::from_vec(SeriesK::<Rational>::axis_labels(&AXES[..3]), vec![4, 4, 4], init.data().to_vec()).unwrap();
        let out = time_march([&init, &init, &init], flow.d(), q(1, 1), q(1, 3), 2).unwrap();
        assert_eq!(out.caps(), &[0, 0, 0, 2]);
        assert!(out.fields().iter().all(|s| s.is_zero()));
        let same = time_march([&init, &init, &init], flow.d(), q(1, 1), q(1, 3), 0).unwrap();
        assert_eq!(same.caps(), &[4, 4, 4, 0]);
        assert!(matches!(
            time_march([&init, &init, &init], flow.d(), q(1, 1), q(1, 3), 3),
            Err(NsError::CapsInsufficient(_))
        ));
    }

    #[test]
    fn identities_agree_with_the_engine_on_arbitrary_fields() {
        let axes = SeriesK::<Rational>::axis_labels(&AXES);
        let caps = vec![3, 3, 2, 2];
        let field = |seed: i64| {
            SeriesK::from_fn(axes.clone(), caps.clone(), |idx| {
                let h: i64 = idx.iter().enumerate().map(|(n, &v)| (n as i64 + seed) * v as i64).sum();
                q((h * 7 + seed) % 5 - 2, 1 + (h % 3))
            })
        };
        let flow = FlowSeries::new(field(1), field(2), field(3), field(4), q(3, 2), q(2, 7)).unwrap();
        let hand = verify(&flow);
        let engine = verify_with_engine(&flow).unwrap();
        for ((name, h), (_, e)) in hand.reports().zip(engine.reports()) {
            assert_eq!(h.trustworthy_order, e.trustworthy_order, "{name}");
            assert_eq!(h.residual, e.residual, "{name}");
        }
        assert_eq!(hand.verdict(), Verdict::Fail);
    }
}
