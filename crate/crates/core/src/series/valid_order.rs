/// Per-axis bound through which a derived series is exact.
///
/// A negative bound means nothing along that axis can be trusted; an
/// unbounded axis comes from factors that are exact polynomials (constants,
/// polynomial coefficients) and carry no truncation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValidOrder {
    bounds: Vec<i64>,
}

const UNBOUNDED: i64 = i64::MAX;

impl ValidOrder {
    pub fn from_caps(caps: &[usize]) -> Self {
        Self {
            bounds: caps.iter().map(|&c| c as i64).collect(),
        }
    }

    pub fn unbounded(rank: usize) -> Self {
        Self {
            bounds: vec![UNBOUNDED; rank],
        }
    }

    pub fn from_bounds(bounds: Vec<i64>) -> Self {
        Self { bounds }
    }

    pub fn rank(&self) -> usize {
        self.bounds.len()
    }

    /// `None` marks an unbounded axis.
    pub fn bound(&self, axis: usize) -> Option<i64> {
        let b = self.bounds[axis];
        (b != UNBOUNDED).then_some(b)
    }

    pub fn bounds(&self) -> Vec<Option<i64>> {
        (0..self.rank()).map(|a| self.bound(a)).collect()
    }

    /// Product rule: the minimum of the operands, per axis.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank(), "valid-order rank mismatch");
        Self {
            bounds: self
                .bounds
                .iter()
                .zip(&other.bounds)
                .map(|(a, b)| *a.min(b))
                .collect(),
        }
    }

    /// Derivative of order `m` along `axis` lowers that bound by `m`.
    pub fn derivative(&self, axis: usize, m: usize) -> Self {
        let mut bounds = self.bounds.clone();
        if bounds[axis] != UNBOUNDED {
            bounds[axis] -= m as i64;
        }
        Self { bounds }
    }

    /// Multiplication by a monomial of multi-degree `degrees` raises each bound.
    pub fn shift(&self, degrees: &[usize]) -> Self {
        assert_eq!(self.rank(), degrees.len(), "valid-order rank mismatch");
        Self {
            bounds: self
                .bounds
                .iter()
                .zip(degrees)
                .map(|(&b, &d)| if b == UNBOUNDED { b } else { b + d as i64 })
                .collect(),
        }
    }

    /// True when at least one axis has no trustworthy index.
    pub fn is_empty(&self) -> bool {
        self.bounds.iter().any(|&b| b < 0)
    }

    pub fn is_bounded(&self) -> bool {
        self.bounds.iter().all(|&b| b != UNBOUNDED)
    }

    /// Caps of the trustworthy box, if it is finite and non-empty.
    pub fn as_caps(&self) -> Option<Vec<usize>> {
        if self.is_empty() || !self.is_bounded() {
            return None;
        }
        Some(self.bounds.iter().map(|&b| b as usize).collect())
    }

    /// Replaces unbounded axes with `fallback` caps.
    pub fn bounded_by(&self, fallback: &[usize]) -> Self {
        Self {
            bounds: self
                .bounds
                .iter()
                .zip(fallback)
                .map(|(&b, &f)| if b == UNBOUNDED { f as i64 } else { b })
                .collect(),
        }
    }

    pub fn contains(&self, index: &[usize]) -> bool {
        index.len() == self.rank()
            && index.iter().zip(&self.bounds).all(|(&i, &b)| (i as i64) <= b)
    }

    /// True when every bound is at least the corresponding bound of `other`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.bounds.iter().zip(&other.bounds).all(|(a, b)| a >= b)
    }
}

impl std::fmt::Display for ValidOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("(")?;
        for (n, b) in self.bounds.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            if *b == UNBOUNDED {
                f.write_str("inf")?;
            } else {
                write!(f, "{b}")?;
            }
        }
        f.write_str(")")
    }
}
