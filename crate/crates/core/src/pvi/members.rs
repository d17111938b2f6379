//! The 65 members obtained by equating coefficients of `x^i` after
//! substituting `y = sum a_i x^i` into the shifted equation.
//!
//! Members 1-16 come from the left-hand side (the `y''` terms) and 17-65
//! from the right-hand side, so at every `i` the coefficient identity reads
//! `sum(M_1..M_16) = sum(M_17..M_65)`. Each member is active for `i >= d` (or
//! exactly at `i = d` for the four constants), where `d` is the power of `x`
//! that multiplies it; below that its summation range is empty.

use super::{PviError, PviParams};
use crate::scalar::Scalar;

/// Which side of the coefficient identity a member belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    AtLeast(usize),
    Exactly(usize),
}

impl Validity {
    pub fn is_active(self, i: usize) -> bool {
        match self {
            Validity::AtLeast(b) => i >= b,
            Validity::Exactly(b) => i == b,
        }
    }
}

/// Summation templates, with `d` the shift of the member and `Y^n_j` the
/// `j`-th coefficient of `y^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// `sum_{j=0}^{i-d} (i-d+2-j)(i-d+1-j) Y^n_j a_{i-d+2-j}` (members 1-16).
    SecondDerivative { power: u32, shift: usize },
    /// `sum_{j=0}^{i-d} Y^2_j sum_{r=0}^{i-d-j} (r+1)(i-d+1-j-r) a_{r+1} a_{i-d+1-j-r}` (members 17-21).
    SquareDerivativeOuter { shift: usize },
    /// `sum_{j=0}^{i-d} sum_{k=0}^{j} (k+1)(j-k+1) a_{k+1} a_{j-k+1} a_{i-d-j}` (members 22-26).
    SquareDerivativeInner { shift: usize },
    /// `sum_{j=0}^{i-d} (j+1)(i-d+1-j) a_{j+1} a_{i-d+1-j}` (members 27-32).
    SquareDerivative { shift: usize },
    /// `sum_{j=0}^{i-d} (i-d+1-j) Y^n_j a_{i-d+1-j}` (members 33-46).
    FirstDerivative { power: u32, shift: usize },
    /// `Y^n_{i-d}` (members 47-61).
    Power { power: u32, shift: usize },
    /// A constant, present only at `i = d` (members 62-65).
    Constant,
}

/// Integer weights on `(1, alpha, beta, gamma, delta)`.
pub type Weights = [i64; 5];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberSpec {
    pub id: u8,
    pub side: Side,
    pub validity: Validity,
    pub weights: Weights,
    pub shape: Shape,
}

impl MemberSpec {
    pub fn coefficient<T: Scalar>(&self, params: &PviParams<T>) -> T {
        let [c, a, b, g, d] = self.weights;
        let mut acc = T::from_i64(c);
        for (w, p) in [(a, &params.alpha), (b, &params.beta), (g, &params.gamma), (d, &params.delta)] {
            if w != 0 {
                acc += &p.scaled_by(w);
            }
        }
        acc
    }

    /// Members 5 and 16 hold the only `a_{i+2}` occurrences (at `j = 0`).
    pub fn carries_leading_term(&self) -> bool {
        matches!(self.shape, Shape::SecondDerivative { shift: 0, .. })
    }

    /// Highest coefficient index read at `i` (full form), or `None` when
    /// the member is inactive.
    pub fn highest_index(&self, i: usize) -> Option<usize> {
        if !self.validity.is_active(i) {
            return None;
        }
        match self.shape {
            Shape::SecondDerivative { shift, .. } => Some(i - shift + 2),
            Shape::SquareDerivativeOuter { shift }
            | Shape::SquareDerivativeInner { shift }
            | Shape::SquareDerivative { shift }
            | Shape::FirstDerivative { shift, .. } => Some(i - shift + 1),
            Shape::Power { shift, .. } => Some(i - shift),
            Shape::Constant => None,
        }
    }
}

const K: Weights = [1, 0, 0, 0, 0];

const fn k(c: i64) -> Weights {
    [c, 0, 0, 0, 0]
}

const fn w(a: i64, b: i64, g: i64, d: i64) -> Weights {
    [0, a, b, g, d]
}

fn spec(id: u8, validity: Validity, weights: Weights, shape: Shape) -> MemberSpec {
    MemberSpec {
        id,
        side: if id <= 16 { Side::Left } else { Side::Right },
        validity,
        weights,
        shape,
    }
}

/// Immutable, data-driven member table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberTable {
    members: Vec<MemberSpec>,
}

impl MemberTable {
    pub fn standard() -> Self {
        use Shape::*;
        use Validity::*;
        let sd = |power, shift| SecondDerivative { power, shift };
        let fd = |power, shift| FirstDerivative { power, shift };
        let pw = |power, shift| Power { power, shift };
        let members = vec![
            // y^3 y'' [2x^4 - 12x^3 + 26x^2 - 24x + 8]
            spec(1, AtLeast(4), k(2), sd(3, 4)),
            spec(2, AtLeast(3), k(-12), sd(3, 3)),
            spec(3, AtLeast(2), k(26), sd(3, 2)),
            spec(4, AtLeast(1), k(-24), sd(3, 1)),
            spec(5, AtLeast(0), k(8), sd(3, 0)),
            // y^2 y'' [-2x^5 + 12x^4 - 26x^3 + 24x^2 - 8x]
            spec(6, AtLeast(5), k(-2), sd(2, 5)),
            spec(7, AtLeast(4), k(12), sd(2, 4)),
            spec(8, AtLeast(3), k(-26), sd(2, 3)),
            spec(9, AtLeast(2), k(24), sd(2, 2)),
            spec(10, AtLeast(1), k(-8), sd(2, 1)),
            // y y'' [2x^5 - 14x^4 + 38x^3 - 50x^2 + 32x - 8]
            spec(11, AtLeast(5), k(2), sd(1, 5)),
            spec(12, AtLeast(4), k(-14), sd(1, 4)),
            spec(13, AtLeast(3), k(38), sd(1, 3)),
            spec(14, AtLeast(2), k(-50), sd(1, 2)),
            spec(15, AtLeast(1), k(32), sd(1, 1)),
            spec(16, AtLeast(0), k(-8), sd(1, 0)),
            // y^2 p^2
            spec(17, AtLeast(4), k(3), SquareDerivativeOuter { shift: 4 }),
            spec(18, AtLeast(3), k(-18), SquareDerivativeOuter { shift: 3 }),
            spec(19, AtLeast(2), k(39), SquareDerivativeOuter { shift: 2 }),
            spec(20, AtLeast(1), k(-36), SquareDerivativeOuter { shift: 1 }),
            spec(21, AtLeast(0), k(12), SquareDerivativeOuter { shift: 0 }),
            // y p^2
            spec(22, AtLeast(5), k(-2), SquareDerivativeInner { shift: 5 }),
            spec(23, AtLeast(4), k(12), SquareDerivativeInner { shift: 4 }),
            spec(24, AtLeast(3), k(-26), SquareDerivativeInner { shift: 3 }),
            spec(25, AtLeast(2), k(24), SquareDerivativeInner { shift: 2 }),
            spec(26, AtLeast(1), k(-8), SquareDerivativeInner { shift: 1 }),
            // p^2
            spec(27, AtLeast(5), K, SquareDerivative { shift: 5 }),
            spec(28, AtLeast(4), k(-7), SquareDerivative { shift: 4 }),
            spec(29, AtLeast(3), k(19), SquareDerivative { shift: 3 }),
            spec(30, AtLeast(2), k(-25), SquareDerivative { shift: 2 }),
            spec(31, AtLeast(1), k(16), SquareDerivative { shift: 1 }),
            spec(32, AtLeast(0), k(-4), SquareDerivative { shift: 0 }),
            // y^3 p
            spec(33, AtLeast(3), k(-4), fd(3, 3)),
            spec(34, AtLeast(2), k(18), fd(3, 2)),
            spec(35, AtLeast(1), k(-26), fd(3, 1)),
            spec(36, AtLeast(0), k(12), fd(3, 0)),
            // y^2 p
            spec(37, AtLeast(4), k(-2), fd(2, 4)),
            spec(38, AtLeast(3), k(14), fd(2, 3)),
            spec(39, AtLeast(2), k(-36), fd(2, 2)),
            spec(40, AtLeast(1), k(40), fd(2, 1)),
            spec(41, AtLeast(0), k(-16), fd(2, 0)),
            // y p
            spec(42, AtLeast(4), k(2), fd(1, 4)),
            spec(43, AtLeast(3), k(-10), fd(1, 3)),
            spec(44, AtLeast(2), k(18), fd(1, 2)),
            spec(45, AtLeast(1), k(-14), fd(1, 1)),
            spec(46, AtLeast(0), k(4), fd(1, 0)),
            // parameter terms
            spec(47, AtLeast(0), w(2, 0, 0, 0), pw(6, 0)),
            spec(48, AtLeast(1), w(-4, 0, 0, 0), pw(5, 1)),
            spec(49, AtLeast(2), w(2, 0, 0, 2), pw(4, 2)),
            spec(50, AtLeast(1), w(4, 2, 2, -6), pw(4, 1)),
            spec(51, AtLeast(0), w(-4, -2, -4, 4), pw(4, 0)),
            spec(52, AtLeast(2), w(-4, -4, -4, -4), pw(3, 2)),
            spec(53, AtLeast(1), w(4, 4, 12, 12), pw(3, 1)),
            spec(54, AtLeast(0), w(0, 0, -8, -8), pw(3, 0)),
            spec(55, AtLeast(3), w(0, 2, 2, 0), pw(2, 3)),
            spec(56, AtLeast(2), w(2, 2, -8, 2), pw(2, 2)),
            spec(57, AtLeast(1), w(-4, -8, 10, -6), pw(2, 1)),
            spec(58, AtLeast(0), w(2, 4, -4, 4), pw(2, 0)),
            spec(59, AtLeast(3), w(0, -4, 0, 0), pw(1, 3)),
            spec(60, AtLeast(2), w(0, 8, 0, 0), pw(1, 2)),
            spec(61, AtLeast(1), w(0, -4, 0, 0), pw(1, 1)),
            spec(62, Exactly(3), w(0, 2, 0, 0), Constant),
            spec(63, Exactly(2), w(0, -6, 0, 0), Constant),
            spec(64, Exactly(1), w(0, 6, 0, 0), Constant),
            spec(65, Exactly(0), w(0, -2, 0, 0), Constant),
        ];
        Self { members }
    }

    pub fn members(&self) -> &[MemberSpec] {
        &self.members
    }

    pub fn get(&self, id: u8) -> Result<&MemberSpec, PviError> {
        self.members
            .iter()
            .find(|m| m.id == id)
            .ok_or(PviError::UnknownMember(id))
    }

    /// Returns a copy with member `id`'s weights negated (for mutation tests).
    pub fn with_flipped_sign(&self, id: u8) -> Result<Self, PviError> {
        let mut out = self.clone();
        let m = out
            .members
            .iter_mut()
            .find(|m| m.id == id)
            .ok_or(PviError::UnknownMember(id))?;
        m.weights = m.weights.map(|v| -v);
        Ok(out)
    }

    pub fn active_at(&self, i: usize) -> Vec<u8> {
        self.members
            .iter()
            .filter(|m| m.validity.is_active(i))
            .map(|m| m.id)
            .collect()
    }

    /// `sum(left members) - sum(right members)` at `i`. With `form = Starred`
    /// the `a_{i+2}` contributions of members 5 and 16 are left out.
    pub fn signed_sum<T: Scalar>(
        &self,
        i: usize,
        coeffs: &[T],
        params: &PviParams<T>,
        form: Form,
    ) -> Result<T, PviError> {
        let ctx = Prefix::new(coeffs);
        let mut acc = T::zero();
        for m in &self.members {
            let v = ctx.member(m, i, params, form)?;
            match m.side {
                Side::Left => acc += &v,
                Side::Right => acc -= &v,
            }
        }
        Ok(acc)
    }
}

/// Whether members 5 and 16 include their `j = 0` (`a_{i+2}`) term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Full,
    Starred,
}

/// Contribution of member `id` at index `i`, using the starred form of
/// members 5 and 16 (summation from `j = 1`), as it enters the recurrence.
pub fn member_value<T: Scalar>(id: u8, i: usize, coeffs: &[T], params: &PviParams<T>) -> Result<T, PviError> {
    let table = MemberTable::standard();
    let m = table.get(id)?;
    Prefix::new(coeffs).member(m, i, params, Form::Starred)
}

/// Same as [`member_value`] but with members 5 and 16 summed from `j = 0`.
pub fn member_value_full<T: Scalar>(id: u8, i: usize, coeffs: &[T], params: &PviParams<T>) -> Result<T, PviError> {
    let table = MemberTable::standard();
    let m = table.get(id)?;
    Prefix::new(coeffs).member(m, i, params, Form::Full)
}

/// A coefficient prefix with the coefficients of `y^n` (`n <= 6`) that the
/// nested sums `sum_k sum_r a_r a_{k-r} a_{j-k} ...` evaluate to.
struct Prefix<'a, T> {
    a: &'a [T],
    powers: Vec<Vec<T>>,
}

const MAX_POWER: usize = 6;

impl<'a, T: Scalar> Prefix<'a, T> {
    fn new(a: &'a [T]) -> Self {
        let len = a.len();
        let mut powers: Vec<Vec<T>> = vec![vec![T::one()], a.to_vec()];
        for n in 2..=MAX_POWER {
            let prev = &powers[n - 1];
            let next = (0..len)
                .map(|j| {
                    let mut acc = T::zero();
                    for (kk, p) in prev.iter().enumerate().take(j + 1) {
                        acc += &p.product(&a[j - kk]);
                    }
                    acc
                })
                .collect();
            powers.push(next);
        }
        Self { a, powers }
    }

    fn need(&self, index: usize) -> Result<(), PviError> {
        if index >= self.a.len() {
            return Err(PviError::InsufficientPrefix {
                needed: index,
                have: self.a.len(),
            });
        }
        Ok(())
    }

    fn y(&self, n: u32, j: usize) -> &T {
        &self.powers[n as usize][j]
    }

    fn member(&self, m: &MemberSpec, i: usize, params: &PviParams<T>, form: Form) -> Result<T, PviError> {
        if !m.validity.is_active(i) {
            return Ok(T::zero());
        }
        let a = self.a;
        let int = |v: usize| T::from_i64(v as i64);
        let raw = match m.shape {
            Shape::SecondDerivative { power, shift } => {
                let top = i - shift;
                let start = if form == Form::Starred && shift == 0 { 1 } else { 0 };
                if start <= top {
                    self.need(top + 2 - start)?;
                }
                let mut acc = T::zero();
                for j in start..=top {
                    let mut t = int((top + 2 - j) * (top + 1 - j));
                    t *= self.y(power, j);
                    t *= &a[top + 2 - j];
                    acc += &t;
                }
                acc
            }
            Shape::SquareDerivativeOuter { shift } => {
                let top = i - shift;
                self.need(top + 1)?;
                let mut acc = T::zero();
                for j in 0..=top {
                    let mut inner = T::zero();
                    for r in 0..=(top - j) {
                        let mut t = int((r + 1) * (top + 1 - j - r));
                        t *= &a[r + 1];
                        t *= &a[top + 1 - j - r];
                        inner += &t;
                    }
                    inner *= self.y(2, j);
                    acc += &inner;
                }
                acc
            }
            Shape::SquareDerivativeInner { shift } => {
                let top = i - shift;
                self.need(top + 1)?;
                let mut acc = T::zero();
                for j in 0..=top {
                    let mut inner = T::zero();
                    for kk in 0..=j {
                        let mut t = int((kk + 1) * (j - kk + 1));
                        t *= &a[kk + 1];
                        t *= &a[j - kk + 1];
                        inner += &t;
                    }
                    inner *= &a[top - j];
                    acc += &inner;
                }
                acc
            }
            Shape::SquareDerivative { shift } => {
                let top = i - shift;
                self.need(top + 1)?;
                let mut acc = T::zero();
                for j in 0..=top {
                    let mut t = int((j + 1) * (top + 1 - j));
                    t *= &a[j + 1];
                    t *= &a[top + 1 - j];
                    acc += &t;
                }
                acc
            }
            Shape::FirstDerivative { power, shift } => {
                let top = i - shift;
                self.need(top + 1)?;
                let mut acc = T::zero();
                for j in 0..=top {
                    let mut t = int(top + 1 - j);
                    t *= self.y(power, j);
                    t *= &a[top + 1 - j];
                    acc += &t;
                }
                acc
            }
            Shape::Power { power, shift } => {
                self.need(i - shift)?;
                self.y(power, i - shift).clone()
            }
            Shape::Constant => T::one(),
        };
        let mut out = m.coefficient(params);
        out *= &raw;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn ones() -> PviParams<Rational> {
        PviParams::all(Rational::from_i64(1))
    }

    fn prefix(n: usize) -> Vec<Rational> {
        (0..n).map(|v| Rational::ratio(v as i64 + 2, 3)).collect()
    }

    #[test]
    fn table_is_complete_and_ordered() {
        let t = MemberTable::standard();
        assert_eq!(t.members().len(), 65);
        for (n, m) in t.members().iter().enumerate() {
            assert_eq!(m.id as usize, n + 1);
        }
        let exact: Vec<u8> = t
            .members()
            .iter()
            .filter(|m| matches!(m.validity, Validity::Exactly(_)))
            .map(|m| m.id)
            .collect();
        assert_eq!(exact, vec![62, 63, 64, 65]);
        assert_eq!(t.get(62).unwrap().validity, Validity::Exactly(3));
        assert_eq!(t.get(65).unwrap().validity, Validity::Exactly(0));
        assert!(t.get(66).is_err());
    }

    #[test]
    fn constant_members() {
        let p = ones();
        let a = prefix(6);
        assert_eq!(member_value(62, 3, &a, &p).unwrap(), Rational::from_i64(2));
        for i in [0, 1, 2, 4, 5] {
            assert_eq!(member_value(62, i, &a, &p).unwrap(), Rational::from_i64(0));
        }
        assert_eq!(member_value(65, 0, &a, &p).unwrap(), Rational::from_i64(-2));
    }

    #[test]
    fn gates_give_empty_sums() {
        let p = ones();
        let a = prefix(6);
        assert_eq!(member_value(1, 3, &a, &p).unwrap(), Rational::from_i64(0));
        assert_eq!(member_value(6, 4, &a, &p).unwrap(), Rational::from_i64(0));
        assert_eq!(member_value(5, 0, &a, &p).unwrap(), Rational::from_i64(0));
    }

    #[test]
    fn member_five_full_form_adds_the_leading_term() {
        let p = ones();
        let a = prefix(8);
        for i in 0..=5 {
            let starred = member_value(5, i, &a, &p).unwrap();
            let full = member_value_full(5, i, &a, &p).unwrap();
            let lead = Rational::from_i64(8 * ((i + 2) * (i + 1)) as i64) * &a[0] * &a[0] * &a[0] * &a[i + 2];
            assert_eq!(full - starred, lead, "i = {i}");
            let starred = member_value(16, i, &a, &p).unwrap();
            let full = member_value_full(16, i, &a, &p).unwrap();
            let lead = Rational::from_i64(-8 * ((i + 2) * (i + 1)) as i64) * &a[0] * &a[i + 2];
            assert_eq!(full - starred, lead, "i = {i}");
        }
    }

    #[test]
    fn short_prefix_is_reported() {
        let p = ones();
        let a = prefix(3);
        assert_eq!(
            member_value(21, 2, &a, &p),
            Err(PviError::InsufficientPrefix { needed: 3, have: 3 })
        );
        assert!(member_value(5, 1, &a, &p).is_ok());
        assert!(member_value_full(5, 1, &a, &p).is_err());
    }

    #[test]
    fn member_47_is_the_sixth_power() {
        // Literal five-fold nested sum of member 47 against the cached power.
        let p = ones();
        let a = prefix(5);
        for i in 0..5 {
            let mut acc = Rational::from_i64(0);
            for j in 0..=i {
                for kk in 0..=j {
                    for r in 0..=kk {
                        for s in 0..=r {
                            for t in 0..=s {
                                acc += &(a[t].clone() * &a[s - t] * &a[r - s] * &a[kk - r] * &a[j - kk] * &a[i - j]);
                            }
                        }
                    }
                }
            }
            assert_eq!(member_value(47, i, &a, &p).unwrap(), acc * Rational::from_i64(2));
        }
    }
}
