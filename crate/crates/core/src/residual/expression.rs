use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

/// Polynomial in named symbolic parameters with rational coefficients.
///
/// Keys are sorted parameter-name lists (repeats encode powers); the empty
/// key is the constant term.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Vec<String>, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::zero().plus_monomial(&[], Rational::from_integer(BigInt::from(c)))
    }

    pub fn param(name: &str) -> Self {
        Self::zero().plus_monomial(&[name], Rational::one())
    }

    /// `c_1 p_1 + c_2 p_2 + ...` for integer weights.
    pub fn linear(weights: &[(i64, &str)]) -> Self {
        weights.iter().fold(Self::zero(), |acc, &(c, p)| {
            acc.plus_monomial(&[p], Rational::from_integer(BigInt::from(c)))
        })
    }

    pub fn plus_monomial(mut self, params: &[&str], coeff: Rational) -> Self {
        let mut key: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        key.sort();
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
        self
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            let refs: Vec<&str> = key.iter().map(String::as_str).collect();
            out = out.plus_monomial(&refs, c * k);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn parameters(&self) -> BTreeSet<&str> {
        self.terms.keys().flatten().map(String::as_str).collect()
    }

    /// Drops all monomials that mention a parameter bound to zero.
    pub fn without(&self, zeroed: &[&str]) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| !k.iter().any(|p| zeroed.contains(&p.as_str())))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn eval<T: Scalar>(&self, params: &BTreeMap<String, T>) -> Result<T, String> {
        let mut acc = T::zero();
        for (key, c) in &self.terms {
            let mut m = T::from_rational(c);
            for p in key {
                let v = params.get(p).ok_or_else(|| p.clone())?;
                m *= v;
            }
            acc += &m;
        }
        Ok(acc)
    }
}

/// One factor `(d^order unknown)^power` of a term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub unknown: String,
    pub derivative: Vec<usize>,
    pub power: u32,
}

impl Factor {
    pub fn new(unknown: &str, derivative: &[usize], power: u32) -> Self {
        Self {
            unknown: unknown.to_string(),
            derivative: derivative.to_vec(),
            power,
        }
    }
}

/// `poly(independent variables) * product of factors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub poly: BTreeMap<Vec<usize>, ParamPoly>,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn new(factors: Vec<Factor>) -> Self {
        Self {
            poly: BTreeMap::new(),
            factors,
        }
    }

    pub fn with_monomial(mut self, degree: &[usize], coeff: ParamPoly) -> Self {
        if coeff.is_zero() {
            return self;
        }
        let merged = match self.poly.remove(degree) {
            Some(prev) => {
                let mut sum = prev;
                for (k, v) in coeff.terms {
                    let refs: Vec<&str> = k.iter().map(String::as_str).collect();
                    sum = sum.plus_monomial(&refs, v);
                }
                sum
            }
            None => coeff,
        };
        if !merged.is_zero() {
            self.poly.insert(degree.to_vec(), merged);
        }
        self
    }

    /// Univariate convenience: `coeffs[d]` multiplies `x^d`, integer weights.
    pub fn with_univariate(self, coeffs: &[i64]) -> Self {
        coeffs.iter().enumerate().fold(self, |t, (d, &c)| {
            if c == 0 {
                t
            } else {
                t.with_monomial(&[d], ParamPoly::constant(c))
            }
        })
    }

    pub fn negated(&self) -> Self {
        let minus_one = -Rational::one();
        Self {
            poly: self
                .poly
                .iter()
                .map(|(d, c)| (d.clone(), c.scaled(&minus_one)))
                .collect(),
            factors: self.factors.clone(),
        }
    }

    /// Per-axis minimum degree of the polynomial coefficient.
    pub fn min_degree(&self) -> Option<Vec<usize>> {
        let mut iter = self.poly.keys();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, d| acc.iter().zip(d).map(|(a, b)| *a.min(b)).collect()))
    }

    pub fn max_degree(&self) -> Vec<usize> {
        let rank = self.poly.keys().next().map_or(0, Vec::len);
        self.poly.keys().fold(vec![0; rank], |acc, d| {
            acc.iter().zip(d).map(|(a, b)| *a.max(b)).collect()
        })
    }
}

/// Sum of [`Term`]s over a fixed list of independent variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyDiffExpression {
    pub axes: Vec<String>,
    pub terms: Vec<Term>,
}

impl PolyDiffExpression {
    pub fn new(axes: &[&str]) -> Self {
        Self {
            axes: axes.iter().map(|s| s.to_string()).collect(),
            terms: Vec::new(),
        }
    }

    pub fn term(mut self, term: Term) -> Self {
        self.terms.push(term);
        self
    }

    pub fn minus(mut self, term: Term) -> Self {
        self.terms.push(term.negated());
        self
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.axes, other.axes, "expressions over different variables");
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn unknowns(&self) -> BTreeSet<&str> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|f| f.unknown.as_str()))
            .collect()
    }

    pub fn parameters(&self) -> BTreeSet<&str> {
        self.terms
            .iter()
            .flat_map(|t| t.poly.values().flat_map(ParamPoly::parameters))
            .collect()
    }

    /// Returns the expression with the given parameters set to zero; terms
    /// whose polynomial vanishes are removed.
    pub fn with_zeroed(&self, params: &[&str]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let poly: BTreeMap<_, _> = t
                    .poly
                    .iter()
                    .map(|(d, c)| (d.clone(), c.without(params)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                (!poly.is_empty()).then(|| Term {
                    poly,
                    factors: t.factors.clone(),
                })
            })
            .collect();
        Self {
            axes: self.axes.clone(),
            terms,
        }
    }
}
