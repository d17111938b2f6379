use super::{rising_factor, SeriesError, SeriesK};
use crate::scalar::Scalar;

/// Dense univariate truncated series `a_0 + a_1 x + ... + a_N x^N`.
///
/// `order()` is `N`; coefficients past `N` are unknown, not zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Series1<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Series1<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn constant(value: T, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = value;
        s
    }

    /// The multiplicative identity, known through `order`.
    pub fn one(order: usize) -> Self {
        Self::constant(T::one(), order)
    }

    pub fn from_i64s(values: &[i64]) -> Result<Self, SeriesError> {
        Self::new(values.iter().map(|&v| T::from_i64(v)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Result<&T, SeriesError> {
        self.coeffs.get(i).ok_or_else(|| SeriesError::BeyondOrder {
            index: vec![i],
            order: vec![self.order()],
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Cauchy product; the result is valid through the smaller operand order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|j| {
                let mut acc = T::zero();
                for i in 0..=j {
                    acc += &self.coeffs[i].product(&other.coeffs[j - i]);
                }
                acc
            })
            .collect();
        Self { coeffs }
    }

    /// Iterated Cauchy product. `pow(0)` is the identity series.
    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.order());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `m`-th derivative: `b_s = (s+m)!/s! * a_{s+m}`, valid through `N - m`.
    pub fn diff(&self, m: usize) -> Result<Self, SeriesError> {
        if self.order() < m {
            return Err(SeriesError::OrderTooSmall {
                axis: 0,
                m,
                order: self.order(),
            });
        }
        let coeffs = (0..=self.order() - m)
            .map(|s| self.coeffs[s + m].scaled_by(rising_factor(s, m)))
            .collect();
        Ok(Self { coeffs })
    }

    /// Multiplication by `x^d`; the low `d` coefficients are exact zeros.
    pub fn shift_monomial(&self, d: usize) -> Self {
        let mut coeffs = vec![T::zero(); d];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn truncate(&self, order: usize) -> Result<Self, SeriesError> {
        if order > self.order() {
            return Err(SeriesError::BeyondOrder {
                index: vec![order],
                order: vec![self.order()],
            });
        }
        Ok(Self {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.sum(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.difference(b))
    }

    pub fn scale(&self, k: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.product(k)).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order)
                .map(|i| f(&self.coeffs[i], &other.coeffs[i]))
                .collect(),
        }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn to_f64(&self) -> Series1<f64> {
        Series1 {
            coeffs: self.coeffs.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// View as a rank-1 [`SeriesK`] along `axis`.
    pub fn to_multi(&self, axis: &str) -> SeriesK<T> {
        SeriesK::from_vec(vec![axis.to_string()], vec![self.order()], self.coeffs.clone())
            .expect("rank-1 shape is consistent")
    }

    pub fn from_multi(series: &SeriesK<T>) -> Result<Self, SeriesError> {
        if series.rank() != 1 {
            return Err(SeriesError::ShapeMismatch {
                caps: series.caps().to_vec(),
                expected: 1,
                got: series.rank(),
            });
        }
        Self::new(series.data().to_vec())
    }
}
