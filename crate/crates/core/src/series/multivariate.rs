use rayon::prelude::*;

use super::{rising_factor, SeriesError, ValidOrder};
use crate::scalar::Scalar;

/// Below this many output coefficients a convolution runs on one thread.
const PARALLEL_THRESHOLD: usize = 256;

/// Dense multi-index truncated series with rectangular per-axis caps.
///
/// Coefficients are stored row-major (last axis fastest). The extent along
/// axis `a` is `caps[a] + 1`; every entry inside the box is defined.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesK<T> {
    axes: Vec<String>,
    caps: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<T>,
}

fn strides_for(caps: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; caps.len()];
    for a in (0..caps.len().saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * (caps[a + 1] + 1);
    }
    strides
}

fn volume(caps: &[usize]) -> usize {
    caps.iter().map(|c| c + 1).product()
}

/// Row-major iterator over all multi-indices of a box `[0, caps]`.
#[derive(Debug, Clone)]
pub struct MultiIndexIter {
    caps: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MultiIndexIter {
    pub fn new(caps: &[usize]) -> Self {
        Self {
            caps: caps.to_vec(),
            next: Some(vec![0; caps.len()]),
        }
    }
}

impl Iterator for MultiIndexIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut axis = succ.len();
        while axis > 0 {
            axis -= 1;
            if succ[axis] < self.caps[axis] {
                succ[axis] += 1;
                self.next = Some(succ);
                return Some(current);
            }
            succ[axis] = 0;
        }
        Some(current)
    }
}

impl<T: Scalar> SeriesK<T> {
    pub fn zeros(axes: Vec<String>, caps: Vec<usize>) -> Self {
        assert_eq!(axes.len(), caps.len(), "one cap per axis");
        let strides = strides_for(&caps);
        let data = vec![T::zero(); volume(&caps)];
        Self {
            axes,
            caps,
            strides,
            data,
        }
    }

    pub fn from_vec(axes: Vec<String>, caps: Vec<usize>, data: Vec<T>) -> Result<Self, SeriesError> {
        assert_eq!(axes.len(), caps.len(), "one cap per axis");
        let expected = volume(&caps);
        if data.len() != expected {
            return Err(SeriesError::ShapeMismatch {
                caps,
                expected,
                got: data.len(),
            });
        }
        let strides = strides_for(&caps);
        Ok(Self {
            axes,
            caps,
            strides,
            data,
        })
    }

    pub fn from_fn(axes: Vec<String>, caps: Vec<usize>, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let data = MultiIndexIter::new(&caps).map(|idx| f(&idx)).collect();
        Self::from_vec(axes, caps, data).expect("generated shape is consistent")
    }

    pub fn axis_labels(labels: &[&str]) -> Vec<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    pub fn rank(&self) -> usize {
        self.caps.len()
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn axis_position(&self, label: &str) -> Result<usize, SeriesError> {
        self.axes
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| SeriesError::UnknownAxis(label.to_string()))
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn valid_order(&self) -> ValidOrder {
        ValidOrder::from_caps(&self.caps)
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn indices(&self) -> MultiIndexIter {
        MultiIndexIter::new(&self.caps)
    }

    pub fn contains(&self, index: &[usize]) -> bool {
        index.len() == self.rank() && index.iter().zip(&self.caps).all(|(i, c)| i <= c)
    }

    fn flat(&self, index: &[usize]) -> usize {
        index.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    fn beyond(&self, index: &[usize]) -> SeriesError {
        SeriesError::BeyondOrder {
            index: index.to_vec(),
            order: self.caps.clone(),
        }
    }

    pub fn get(&self, index: &[usize]) -> Result<&T, SeriesError> {
        if !self.contains(index) {
            return Err(self.beyond(index));
        }
        Ok(&self.data[self.flat(index)])
    }

    /// Like [`get`](Self::get) but panics outside the caps. For hot loops whose
    /// bounds were checked up front.
    pub fn at(&self, index: &[usize]) -> &T {
        debug_assert!(self.contains(index), "{index:?} outside {:?}", self.caps);
        &self.data[self.flat(index)]
    }

    pub fn set(&mut self, index: &[usize], value: T) -> Result<(), SeriesError> {
        if !self.contains(index) {
            return Err(self.beyond(index));
        }
        let flat = self.flat(index);
        self.data[flat] = value;
        Ok(())
    }

    fn check_axes(&self, other: &Self) -> Result<(), SeriesError> {
        if self.axes != other.axes {
            return Err(SeriesError::AxisMismatch {
                left: self.axes.clone(),
                right: other.axes.clone(),
            });
        }
        Ok(())
    }

    /// Multi-index Cauchy product. The result caps are the per-axis minimum
    /// of the operand caps.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_axes(other)?;
        let caps: Vec<usize> = self.caps.iter().zip(&other.caps).map(|(a, b)| *a.min(b)).collect();
        let out_strides = strides_for(&caps);
        let n_out = volume(&caps);
        let coefficient = |flat: usize| -> T {
            let mut n = vec![0usize; caps.len()];
            let mut rem = flat;
            for a in 0..caps.len() {
                n[a] = rem / out_strides[a];
                rem %= out_strides[a];
            }
            let mut acc = T::zero();
            for p in MultiIndexIter::new(&n) {
                let fa = self.flat(&p);
                let fb: usize = n
                    .iter()
                    .zip(&p)
                    .zip(&other.strides)
                    .map(|((ni, pi), s)| (ni - pi) * s)
                    .sum();
                acc += &self.data[fa].product(&other.data[fb]);
            }
            acc
        };
        let data: Vec<T> = if n_out >= PARALLEL_THRESHOLD {
            (0..n_out).into_par_iter().map(coefficient).collect()
        } else {
            (0..n_out).map(coefficient).collect()
        };
        Self::from_vec(self.axes.clone(), caps, data)
    }

    /// `m`-th partial derivative along `axis`; that cap drops by `m`.
    pub fn diff(&self, axis: usize, m: usize) -> Result<Self, SeriesError> {
        if self.caps[axis] < m {
            return Err(SeriesError::OrderTooSmall {
                axis,
                m,
                order: self.caps[axis],
            });
        }
        let mut caps = self.caps.clone();
        caps[axis] -= m;
        Ok(Self::from_fn(self.axes.clone(), caps, |idx| {
            let mut src = idx.to_vec();
            src[axis] += m;
            self.at(&src).scaled_by(rising_factor(idx[axis], m))
        }))
    }

    /// Multiplication by the monomial with multi-degree `degrees`.
    pub fn shift_monomial(&self, degrees: &[usize]) -> Self {
        assert_eq!(degrees.len(), self.rank());
        let caps: Vec<usize> = self.caps.iter().zip(degrees).map(|(c, d)| c + d).collect();
        Self::from_fn(self.axes.clone(), caps, |idx| {
            if idx.iter().zip(degrees).any(|(i, d)| i < d) {
                return T::zero();
            }
            let src: Vec<usize> = idx.iter().zip(degrees).map(|(i, d)| i - d).collect();
            self.at(&src).clone()
        })
    }

    pub fn truncate(&self, caps: &[usize]) -> Result<Self, SeriesError> {
        if caps.len() != self.rank() || caps.iter().zip(&self.caps).any(|(c, own)| c > own) {
            return Err(self.beyond(caps));
        }
        if caps == self.caps.as_slice() {
            return Ok(self.clone());
        }
        Ok(Self::from_fn(self.axes.clone(), caps.to_vec(), |idx| self.at(idx).clone()))
    }

    /// Treats the stored coefficients as an exact polynomial and pads with
    /// zeros out to `caps`. Only sound when the caller knows the tail is zero.
    pub fn zero_extend(&self, caps: &[usize]) -> Self {
        assert_eq!(caps.len(), self.rank());
        let caps: Vec<usize> = caps.iter().zip(&self.caps).map(|(a, b)| *a.max(b)).collect();
        Self::from_fn(self.axes.clone(), caps, |idx| {
            if self.contains(idx) {
                self.at(idx).clone()
            } else {
                T::zero()
            }
        })
    }

    /// Inserts a new axis at `position` on which the series is constant,
    /// i.e. every coefficient with a nonzero index on that axis is zero.
    pub fn insert_axis(&self, position: usize, label: &str, cap: usize) -> Self {
        let mut axes = self.axes.clone();
        axes.insert(position, label.to_string());
        let mut caps = self.caps.clone();
        caps.insert(position, cap);
        Self::from_fn(axes, caps, |idx| {
            if idx[position] != 0 {
                return T::zero();
            }
            let mut src = idx.to_vec();
            src.remove(position);
            self.at(&src).clone()
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self, SeriesError> {
        self.check_axes(other)?;
        let caps: Vec<usize> = self.caps.iter().zip(&other.caps).map(|(a, b)| *a.min(b)).collect();
        Ok(Self::from_fn(self.axes.clone(), caps, |idx| f(self.at(idx), other.at(idx))))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, |a, b| a.sum(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, |a, b| a.difference(b))
    }

    pub fn scale(&self, k: &T) -> Self {
        Self {
            axes: self.axes.clone(),
            caps: self.caps.clone(),
            strides: self.strides.clone(),
            data: self.data.iter().map(|v| v.product(k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::zeros(self.axes.clone(), self.caps.clone());
        out.data[0] = T::one();
        for _ in 0..n {
            out = out.mul(self).expect("same axes");
        }
        out
    }

    /// Nested Horner evaluation at `point` (one coordinate per axis).
    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.rank(), "one coordinate per axis");
        self.eval_from(0, 0, point)
    }

    fn eval_from(&self, axis: usize, offset: usize, point: &[T]) -> T {
        if axis == self.rank() {
            return self.data[offset].clone();
        }
        let mut acc = T::zero();
        for i in (0..=self.caps[axis]).rev() {
            acc *= &point[axis];
            acc += &self.eval_from(axis + 1, offset + i * self.strides[axis], point);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn max_abs(&self) -> T {
        let mut best = T::zero();
        for v in &self.data {
            let a = v.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SeriesK<U> {
        SeriesK {
            axes: self.axes.clone(),
            caps: self.caps.clone(),
            strides: self.strides.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> SeriesK<f64> {
        self.map(Scalar::to_f64)
    }
}
