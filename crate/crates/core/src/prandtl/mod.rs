//! Series solution of the two-dimensional unsteady boundary-layer equations
//!
//! `u_t + u u_x + v u_y = U_t + U U_x + nu u_yy`, `u_x + v_y = 0`,
//!
//! with no-slip at `y = 0` and the pressure gradient eliminated through the
//! external stream `U(x, t)`. Writing `u = sum A_{ijk} x^i y^j t^k` and
//! `v = sum B_{ijk} x^i y^j t^k` (both starting at `j = 1`), every `A` with
//! `j >= 2` follows from `U` and the wall slope `A_{i,1,k}`, and `B` follows
//! from `A` through continuity.

mod matching;
mod shear;

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::residual::builtins::{self, NU};
use crate::residual::{self, EngineError, ResidualReport, Verdict};
use crate::scalar::Scalar;
use crate::series::{MultiIndexIter, SeriesError, SeriesK};

pub use matching::{match_wall_slope, MatchOptions, MatchResult};
pub use shear::{shear_sign_changes, wall_shear_profile, ShearBracket};

pub const AXES: [&str; 3] = ["x", "y", "t"];
pub const SURFACE_AXES: [&str; 2] = ["x", "t"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrandtlError {
    #[error("viscosity must be nonzero")]
    ZeroViscosity,
    #[error("`{name}` must be a series over {expected:?}, got {found:?}")]
    Axes {
        name: &'static str,
        expected: Vec<&'static str>,
        found: Vec<String>,
    },
    #[error(
        "input caps insufficient for output caps {output:?}: wall slope needs {required_wall:?} (has {wall:?}), \
         external flow needs {required_external:?} (has {external:?})"
    )]
    CapsInsufficient {
        output: [usize; 3],
        required_wall: [usize; 2],
        wall: Vec<usize>,
        required_external: [usize; 2],
        external: Vec<usize>,
    },
    #[error("output y-cap must be at least 1")]
    EmptyProfile,
    #[error("coefficient A[{i}, {j}, {k}] is required but not available")]
    MissingCoefficient { i: usize, j: usize, k: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn check_axes<T: Scalar>(name: &'static str, s: &SeriesK<T>, expected: &[&'static str]) -> Result<(), PrandtlError> {
    if s.axes() != SeriesK::<T>::axis_labels(expected).as_slice() {
        return Err(PrandtlError::Axes {
            name,
            expected: expected.to_vec(),
            found: s.axes().to_vec(),
        });
    }
    Ok(())
}

fn check_nu<T: Scalar>(nu: &T) -> Result<(), PrandtlError> {
    if nu.is_zero() {
        return Err(PrandtlError::ZeroViscosity);
    }
    Ok(())
}

fn int<T: Scalar>(v: usize) -> T {
    T::from_i64(v as i64)
}

/// External stream `U(x, t) = sum U_{ik} x^i t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalFlow<T> {
    u: SeriesK<T>,
}

impl<T: Scalar> ExternalFlow<T> {
    pub fn new(u: SeriesK<T>) -> Result<Self, PrandtlError> {
        check_axes("U", &u, &SURFACE_AXES)?;
        Ok(Self { u })
    }

    /// Builds `U` from a dense table of coefficients `rows[i][k]`.
    pub fn from_table(rows: &[Vec<T>]) -> Result<Self, PrandtlError> {
        Self::new(surface_from_table(rows)?)
    }

    pub fn series(&self) -> &SeriesK<T> {
        &self.u
    }

    pub fn caps(&self) -> [usize; 2] {
        [self.u.caps()[0], self.u.caps()[1]]
    }
}

/// Wall slope `A_{i,1,k}`, i.e. `du/dy` at `y = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct WallSlope<T> {
    a1: SeriesK<T>,
}

impl<T: Scalar> WallSlope<T> {
    pub fn new(a1: SeriesK<T>) -> Result<Self, PrandtlError> {
        check_axes("A1", &a1, &SURFACE_AXES)?;
        Ok(Self { a1 })
    }

    pub fn from_table(rows: &[Vec<T>]) -> Result<Self, PrandtlError> {
        Self::new(surface_from_table(rows)?)
    }

    pub fn series(&self) -> &SeriesK<T> {
        &self.a1
    }

    pub fn caps(&self) -> [usize; 2] {
        [self.a1.caps()[0], self.a1.caps()[1]]
    }
}

fn surface_from_table<T: Scalar>(rows: &[Vec<T>]) -> Result<SeriesK<T>, PrandtlError> {
    let ni = rows.len();
    let nk = rows.first().map_or(0, Vec::len);
    if ni == 0 || nk == 0 || rows.iter().any(|r| r.len() != nk) {
        return Err(SeriesError::Empty.into());
    }
    let data = rows.iter().flatten().cloned().collect();
    Ok(SeriesK::from_vec(SeriesK::<T>::axis_labels(&SURFACE_AXES), vec![ni - 1, nk - 1], data)?)
}

/// Constructed `u`, `v` coefficients over `(x, y, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLayerSeries<T> {
    pub a: SeriesK<T>,
    pub b: SeriesK<T>,
    pub nu: T,
    pub rho: T,
}

impl<T: Scalar> BoundaryLayerSeries<T> {
    pub fn caps(&self) -> [usize; 3] {
        let c = self.a.caps();
        [c[0], c[1], c[2]]
    }

    pub fn to_f64(&self) -> BoundaryLayerSeries<f64> {
        BoundaryLayerSeries {
            a: self.a.to_f64(),
            b: self.b.to_f64(),
            nu: self.nu.to_f64(),
            rho: self.rho.to_f64(),
        }
    }
}

/// `A_{i,2,k} = -[U_{i,k+1}(k+1) + sum_p sum_q U_{pq} U_{i-p+1,k-q}(i-p+1)] / (2 nu)`,
/// from the `y^0` coefficient of the momentum equation. The result covers
/// `i < cap_x(U)`, `k < cap_t(U)`.
pub fn a2_from_external<T: Scalar>(external: &ExternalFlow<T>, nu: &T) -> Result<SeriesK<T>, PrandtlError> {
    check_nu(nu)?;
    let [cx, ct] = external.caps();
    if cx == 0 || ct == 0 {
        return Err(PrandtlError::CapsInsufficient {
            output: [0, 2, 0],
            required_wall: [0, 0],
            wall: vec![],
            required_external: [1, 1],
            external: vec![cx, ct],
        });
    }
    Ok(a2_table(external.series(), nu, [cx - 1, ct - 1]))
}

fn a2_table<T: Scalar>(u: &SeriesK<T>, nu: &T, extent: [usize; 2]) -> SeriesK<T> {
    let denom = nu.scaled_by(-2);
    par_table(extent, |i, k| {
        let mut acc = int::<T>(k + 1);
        acc *= u.at(&[i, k + 1]);
        for p in 0..=i {
            for q in 0..=k {
                let mut t = int::<T>(i - p + 1);
                t *= u.at(&[p, q]);
                t *= u.at(&[i - p + 1, k - q]);
                acc += &t;
            }
        }
        acc /= &denom;
        acc
    })
}

/// `A_{i,3,k} = (k+1) A_{i,1,k+1} / (6 nu)`; the `B_{i,1,k}` products of the
/// `y^1` coefficient vanish because `B_{i,1,k} = 0`. Covers `k < cap_t(A1)`.
pub fn a3_from_wall<T: Scalar>(wall: &WallSlope<T>, nu: &T) -> Result<SeriesK<T>, PrandtlError> {
    check_nu(nu)?;
    let [cx, ct] = wall.caps();
    if ct == 0 {
        return Err(PrandtlError::MissingCoefficient { i: 0, j: 1, k: 1 });
    }
    Ok(a3_table(wall.series(), nu, [cx, ct - 1]))
}

fn a3_table<T: Scalar>(a1: &SeriesK<T>, nu: &T, extent: [usize; 2]) -> SeriesK<T> {
    let denom = nu.scaled_by(6);
    par_table(extent, |i, k| {
        let mut v = int::<T>(k + 1);
        v *= a1.at(&[i, k + 1]);
        v /= &denom;
        v
    })
}

fn par_table<T: Scalar>(extent: [usize; 2], f: impl Fn(usize, usize) -> T + Sync) -> SeriesK<T> {
    let cells: Vec<Vec<usize>> = MultiIndexIter::new(&extent).collect();
    let data: Vec<T> = cells.par_iter().map(|c| f(c[0], c[1])).collect();
    SeriesK::from_vec(SeriesK::<T>::axis_labels(&SURFACE_AXES), extent.to_vec(), data).expect("sized by extent")
}

/// Per-level tables of `A_{i,j,k}` (level `j` holds a series over `(x, t)`);
/// `A_{i,0,k}` is identically zero by the no-slip condition.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTable<T> {
    levels: Vec<SeriesK<T>>,
}

impl<T: Scalar> LevelTable<T> {
    /// Starts from the wall slope as level 1.
    pub fn new(wall: &WallSlope<T>) -> Self {
        Self {
            levels: vec![wall.series().clone()],
        }
    }

    pub fn from_levels(levels: Vec<SeriesK<T>>) -> Self {
        Self { levels }
    }

    /// Highest level present.
    pub fn top(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, j: usize) -> Option<&SeriesK<T>> {
        j.checked_sub(1).and_then(|n| self.levels.get(n))
    }

    pub fn push(&mut self, level: SeriesK<T>) {
        self.levels.push(level);
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Result<T, PrandtlError> {
        if j == 0 {
            return Ok(T::zero());
        }
        self.level(j)
            .and_then(|s| s.get(&[i, k]).ok())
            .cloned()
            .ok_or(PrandtlError::MissingCoefficient { i, j, k })
    }
}

/// `A_{i,j,k}` for `j >= 4`:
///
/// `[A_{i,j-2,k+1}(k+1) + sum_{p,q=1..j-3,r} (i-p+1) A_{pqr} A_{i-p+1,j-2-q,k-r}
///   - sum_{p,q=2..j-2,r} ((p+1)(j-1-q)/q) A_{p+1,q-1,r} A_{i-p,j-1-q,k-r}] / (nu (j-1) j)`.
pub fn a_general<T: Scalar>(i: usize, j: usize, k: usize, built: &LevelTable<T>, nu: &T) -> Result<T, PrandtlError> {
    check_nu(nu)?;
    assert!(j >= 4, "the general recurrence starts at j = 4");
    let mut acc = int::<T>(k + 1);
    acc *= &built.get(i, j - 2, k + 1)?;
    for p in 0..=i {
        for q in 1..=(j - 3) {
            for r in 0..=k {
                let mut t = int::<T>(i - p + 1);
                t *= &built.get(p, q, r)?;
                t *= &built.get(i - p + 1, j - 2 - q, k - r)?;
                acc += &t;
            }
        }
        for q in 2..=(j - 2) {
            for r in 0..=k {
                let mut t = T::ratio(((p + 1) * (j - 1 - q)) as i64, q as i64);
                t *= &built.get(p + 1, q - 1, r)?;
                t *= &built.get(i - p, j - 1 - q, k - r)?;
                acc -= &t;
            }
        }
    }
    acc /= &nu.product(&int::<T>((j - 1) * j));
    Ok(acc)
}

/// `B_{i,j,k} = -((i+1)/j) A_{i+1,j-1,k}` for `j >= 2`, `B_{i,0,k} = B_{i,1,k} = 0`.
/// With `A` over `(x, y, t)` with caps `(I, J, K)` the result has caps `(I-1, J+1, K)`.
pub fn b_from_a<T: Scalar>(a: &SeriesK<T>) -> Result<SeriesK<T>, PrandtlError> {
    check_axes("A", a, &AXES)?;
    let c = a.caps();
    if c[0] == 0 {
        return Err(PrandtlError::MissingCoefficient { i: 1, j: 0, k: 0 });
    }
    let caps = vec![c[0] - 1, c[1] + 1, c[2]];
    Ok(SeriesK::from_fn(a.axes().to_vec(), caps, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        if j < 2 {
            return T::zero();
        }
        let mut v = T::ratio(-((i + 1) as i64), j as i64);
        v *= a.at(&[i + 1, j - 1, k]);
        v
    }))
}

/// Input caps that determine every coefficient of an output with caps `(I, J, K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequiredCaps {
    pub wall: [usize; 2],
    pub external: [usize; 2],
    /// Extent `(x, t)` needed at each level `j = 1..=J` (index `j - 1`).
    pub levels: Vec<[usize; 2]>,
}

/// Extents `(x, t)` each level must reach so that levels `1..=J` cover
/// `(I, K)` and `B` at levels `2..=J` can be formed, plus the resulting
/// input caps.
///
/// Level `j >= 4` reads level `j-2` one step higher in `t` and levels
/// `1..=j-3` one step higher in `x`; level 3 reads the wall slope one step
/// higher in `t`; level 2 reads `U` one step higher in both.
pub fn level_demand(caps: [usize; 3]) -> Result<RequiredCaps, PrandtlError> {
    let [ci, cj, ck] = caps;
    if cj == 0 {
        return Err(PrandtlError::EmptyProfile);
    }
    let mut demand = vec![[ci, ck]; cj + 1];
    for d in demand.iter_mut().take(cj).skip(1) {
        d[0] = d[0].max(ci + 1);
    }
    let raise = |d: &mut [usize; 2], x: usize, t: usize| {
        d[0] = d[0].max(x);
        d[1] = d[1].max(t);
    };
    for j in (4..=cj).rev() {
        let [x, t] = demand[j];
        raise(&mut demand[j - 2], x, t + 1);
        for d in &mut demand[1..=j - 3] {
            raise(d, x + 1, t);
        }
    }
    let mut wall = demand[1];
    if cj >= 3 {
        let [x, t] = demand[3];
        raise(&mut wall, x, t + 1);
    }
    let external = if cj >= 2 {
        let [x, t] = demand[2];
        [x + 1, t + 1]
    } else {
        [0, 0]
    };
    demand.remove(0);
    Ok(RequiredCaps {
        wall,
        external,
        levels: demand,
    })
}

/// Largest `(x, t)` extent every level reaches given input caps, the
/// forward counterpart of [`level_demand`]. Negative entries mean the level
/// is empty.
pub fn level_extents(wall: [usize; 2], external: [usize; 2], levels: usize) -> Vec<[i64; 2]> {
    let mut ext: Vec<[i64; 2]> = Vec::with_capacity(levels);
    for j in 1..=levels {
        let e = match j {
            1 => [wall[0] as i64, wall[1] as i64],
            2 => [external[0] as i64 - 1, external[1] as i64 - 1],
            3 => [wall[0] as i64, wall[1] as i64 - 1],
            _ => {
                let below = ext[j - 3];
                let mut e = [below[0], below[1] - 1];
                for q in 1..=(j - 3) {
                    e[0] = e[0].min(ext[q - 1][0] - 1);
                    e[1] = e[1].min(ext[q - 1][1]);
                }
                e
            }
        };
        ext.push(e);
    }
    ext
}

/// Builds `u` and `v` with caps `(I, J, K)` from the external stream and the
/// wall slope. Fails with the required input caps when either input is too
/// short to determine every requested coefficient.
pub fn construct<T: Scalar>(
    external: &ExternalFlow<T>,
    wall: &WallSlope<T>,
    nu: T,
    rho: T,
    caps: [usize; 3],
) -> Result<BoundaryLayerSeries<T>, PrandtlError> {
    check_nu(&nu)?;
    let RequiredCaps {
        wall: required_wall,
        external: required_external,
        levels: demand,
    } = level_demand(caps)?;
    let have_wall = wall.caps();
    let have_ext = external.caps();
    let short = |have: [usize; 2], need: [usize; 2]| have[0] < need[0] || have[1] < need[1];
    if short(have_wall, required_wall) || (caps[1] >= 2 && short(have_ext, required_external)) {
        return Err(PrandtlError::CapsInsufficient {
            output: caps,
            required_wall,
            wall: have_wall.to_vec(),
            required_external,
            external: have_ext.to_vec(),
        });
    }

    let mut table = LevelTable::from_levels(vec![wall.series().truncate(&demand[0])?]);
    for (n, extent) in demand.iter().enumerate().skip(1) {
        let j = n + 1;
        let level = match j {
            2 => a2_table(external.series(), &nu, *extent),
            3 => a3_table(wall.series(), &nu, *extent),
            _ => {
                let cells: Vec<Vec<usize>> = MultiIndexIter::new(extent).collect();
                let data = cells
                    .par_iter()
                    .map(|c| a_general(c[0], j, c[1], &table, &nu))
                    .collect::<Result<Vec<T>, _>>()?;
                SeriesK::from_vec(SeriesK::<T>::axis_labels(&SURFACE_AXES), extent.to_vec(), data)?
            }
        };
        table.push(level);
    }

    let [ci, cj, ck] = caps;
    let axes = SeriesK::<T>::axis_labels(&AXES);
    let lookup = |idx: &[usize]| table.get(idx[0], idx[1], idx[2]).expect("demand covers the output");
    let a = SeriesK::from_fn(axes.clone(), vec![ci, cj, ck], lookup);
    let b = if cj >= 2 {
        let wide = SeriesK::from_fn(axes, vec![ci + 1, cj - 1, ck], lookup);
        b_from_a(&wide)?
    } else {
        SeriesK::zeros(axes, vec![ci, cj, ck])
    };
    Ok(BoundaryLayerSeries { a, b, nu, rho })
}

/// Momentum (with the pressure gradient given by the external stream) and
/// continuity residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct PrandtlReport<T> {
    pub momentum: ResidualReport<T>,
    pub continuity: ResidualReport<T>,
}

impl<T: Scalar> PrandtlReport<T> {
    pub fn verdict(&self) -> Verdict {
        match (self.momentum.verdict(), self.continuity.verdict()) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Pass, Verdict::Pass) => Verdict::Pass,
            _ => Verdict::Inconclusive,
        }
    }
}

fn bindings<T: Scalar>(bl: &BoundaryLayerSeries<T>, external: &ExternalFlow<T>) -> BTreeMap<String, SeriesK<T>> {
    let mut b = BTreeMap::new();
    b.insert("u".to_string(), bl.a.clone());
    b.insert("v".to_string(), bl.b.clone());
    b.insert("U".to_string(), external.series().insert_axis(1, "y", bl.a.caps()[1]));
    b
}

/// Substitutes `u`, `v` and `U` into the momentum and continuity equations.
pub fn verify<T: Scalar>(bl: &BoundaryLayerSeries<T>, external: &ExternalFlow<T>) -> Result<PrandtlReport<T>, PrandtlError> {
    let mut params = BTreeMap::new();
    params.insert(NU.to_string(), bl.nu.clone());
    let b = bindings(bl, external);
    Ok(PrandtlReport {
        momentum: residual::evaluate(&builtins::prandtl(), &params, &b)?,
        continuity: residual::evaluate(&builtins::prandtl_continuity(), &params, &b)?,
    })
}

/// Pointwise size of the truncation residual of the polynomials `u`, `v`,
/// `U`: the momentum residual is formed without truncation, restricted to
/// powers `x^i t^k` with `i < I`, `k < K`, and its largest magnitude over a
/// grid of `(x, y, t)` in `[0, extent]^3` is returned.
///
/// Every `y^j` coefficient with `j <= J - 2` vanishes by construction, so
/// this measures the leftover from the omitted `y^{J+1}, ...` terms.
pub fn truncation_residual_sup(
    bl: &BoundaryLayerSeries<f64>,
    external: &ExternalFlow<f64>,
    extent: [f64; 3],
    samples: usize,
) -> Result<f64, PrandtlError> {
    let [ci, cj, ck] = bl.caps();
    let [ui, uk] = external.caps();
    let wide = [2 * ci.max(ui) + 1, 2 * cj + 1, 2 * ck.max(uk) + 1];
    let padded = BoundaryLayerSeries {
        a: bl.a.zero_extend(&wide),
        b: bl.b.zero_extend(&wide),
        nu: bl.nu,
        rho: bl.rho,
    };
    let ext = ExternalFlow::new(external.series().zero_extend(&[wide[0], wide[2]]))?;
    let mut params = BTreeMap::new();
    params.insert(NU.to_string(), bl.nu);
    let r = residual::evaluate(&builtins::prandtl(), &params, &bindings(&padded, &ext))?;
    let Some(res) = r.residual else {
        return Ok(0.0);
    };
    let kept = SeriesK::from_fn(res.axes().to_vec(), res.caps().to_vec(), |idx| {
        if idx[0] < ci && idx[2] < ck {
            *res.at(idx)
        } else {
            0.0
        }
    });
    let n = samples.max(2);
    let mut sup = 0.0f64;
    for g in MultiIndexIter::new(&[n - 1, n - 1, n - 1]) {
        let point: Vec<f64> = g.iter().zip(extent).map(|(&s, e)| e * s as f64 / (n - 1) as f64).collect();
        sup = sup.max(kept.eval(&point).abs());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests;
