//! Numerical polynomials in one variable `T`, stored in the binomial basis.
//!
//! A polynomial is kept as integer coefficients `c_0..c_k` with
//! `P(T) = Σ c_i·C(T, i)`, where `C(T, i) = T(T-1)…(T-i+1)/i!`. Every integer
//! combination of these basis polynomials is integer-valued on `ℤ`, and every
//! integer-valued polynomial has such a representation, so the lattice of
//! numerical polynomials is exactly `ℤ^{k+1}` in this basis.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigjson;

/// Generalised binomial coefficient `C(n, k)` for any integer `n` and `k ≥ 0`.
pub fn binomial(n: &BigInt, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= n - BigInt::from(j);
        acc /= BigInt::from(j + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    /// The values are not those of a polynomial of degree at most `max_degree`.
    #[error("no numerical polynomial of degree <= {max_degree} fits the values")]
    NoFit { max_degree: usize },
    #[error("need at least {needed} values to fit degree <= {max_degree}, got {got}")]
    TooFewValues {
        needed: usize,
        got: usize,
        max_degree: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("binomial_coeffs must not end in a zero coefficient")]
pub struct NonCanonical;

/// An integer-valued polynomial in the binomial basis.
///
/// The coefficient vector never has a trailing zero; the zero polynomial is
/// the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct NumericalPolynomial {
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyRepr {
    #[serde(with = "bigjson::vec")]
    binomial_coeffs: Vec<BigInt>,
}

impl TryFrom<PolyRepr> for NumericalPolynomial {
    type Error = NonCanonical;

    fn try_from(repr: PolyRepr) -> Result<Self, NonCanonical> {
        Self::from_canonical(repr.binomial_coeffs)
    }
}

impl From<NumericalPolynomial> for PolyRepr {
    fn from(p: NumericalPolynomial) -> Self {
        PolyRepr {
            binomial_coeffs: p.coeffs,
        }
    }
}

impl NumericalPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_binomial_coeffs(vec![c.into()])
    }

    /// Builds a polynomial from binomial-basis coefficients, dropping trailing zeros.
    pub fn from_binomial_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Like [`from_binomial_coeffs`](Self::from_binomial_coeffs) but rejects a
    /// trailing zero instead of trimming it.
    pub fn from_canonical(coeffs: Vec<BigInt>) -> Result<Self, NonCanonical> {
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(NonCanonical);
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_binomial_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn binomial_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The top binomial-basis coefficient `c_k`; the monomial leading
    /// coefficient is `c_k / k!`.
    pub fn leading_binomial_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// `C(T + shift, k)` expanded in the binomial basis (Vandermonde's identity).
    pub fn shifted_basis(k: usize, shift: &BigInt) -> Self {
        let coeffs = (0..=k).map(|j| binomial(shift, k - j)).collect();
        Self::from_binomial_coeffs(coeffs)
    }

    /// `C(T + a - s, a)`, the summand shape of the canonical decomposition.
    pub fn shifted_binomial(a: usize, s: usize) -> Self {
        Self::shifted_basis(a, &(BigInt::from(a) - BigInt::from(s)))
    }

    pub fn evaluate(&self, t: &BigInt) -> BigInt {
        let mut basis = BigInt::one();
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                basis *= t - BigInt::from(i - 1);
                basis /= BigInt::from(i);
            }
            acc += c * &basis;
        }
        acc
    }

    pub fn evaluate_i64(&self, t: i64) -> BigInt {
        self.evaluate(&BigInt::from(t))
    }

    /// Eventual order: `P <_e Q` iff `P(t) < Q(t)` for all large `t`.
    pub fn compare_dominance(&self, other: &Self) -> Ordering {
        let diff = self - other;
        match diff.coeffs.last() {
            None => Ordering::Equal,
            Some(c) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    /// Recovers the polynomial taking `values[j]` at `T = offset + j`.
    ///
    /// Picks the least `d ≤ max_degree` whose `(d+1)`-st finite differences
    /// vanish across the whole sequence and returns the Newton interpolant.
    pub fn fit_from_values(
        values: &[BigInt],
        offset: i64,
        max_degree: usize,
    ) -> Result<Self, FitError> {
        let needed = max_degree + 2;
        if values.len() < needed {
            return Err(FitError::TooFewValues {
                needed,
                got: values.len(),
                max_degree,
            });
        }
        // rows[k] = k-th forward differences
        let mut rows: Vec<Vec<BigInt>> = vec![values.to_vec()];
        let mut degree = None;
        for d in 0..=max_degree {
            let next: Vec<BigInt> = rows[d].windows(2).map(|w| &w[1] - &w[0]).collect();
            let vanished = next.iter().all(Zero::is_zero);
            rows.push(next);
            if vanished {
                degree = Some(d);
                break;
            }
        }
        let d = degree.ok_or(FitError::NoFit { max_degree })?;

        // P(T) = Σ_k Δ^k v_0 · C(T - offset, k)
        let shift = BigInt::from(-offset);
        let mut poly = Self::zero();
        for (k, row) in rows.iter().enumerate().take(d + 1) {
            let lead = &row[0];
            if lead.is_zero() {
                continue;
            }
            poly = &poly + &Self::shifted_basis(k, &shift).scale(lead);
        }
        Ok(poly)
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self::from_binomial_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Coefficients in the monomial basis `1, T, T², …` (read-only view).
    pub fn monomial_coeffs(&self) -> Vec<BigRational> {
        let n = self.coeffs.len();
        let mut out = vec![BigRational::zero(); n];
        // falling[j] = coefficient of T^j in T(T-1)…(T-i+1)
        let mut falling: Vec<BigInt> = vec![BigInt::one()];
        let mut factorial = BigInt::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                let root = BigInt::from(i - 1);
                let mut next = vec![BigInt::zero(); falling.len() + 1];
                for (j, f) in falling.iter().enumerate() {
                    next[j + 1] += f;
                    next[j] -= f * &root;
                }
                falling = next;
                factorial *= BigInt::from(i);
            }
            if c.is_zero() {
                continue;
            }
            for (j, f) in falling.iter().enumerate() {
                out[j] += BigRational::new(c * f, factorial.clone());
            }
        }
        out
    }

    /// The monomial leading coefficient `c_k / k!`.
    pub fn leading_monomial_coeff(&self) -> Option<BigRational> {
        self.monomial_coeffs().pop()
    }
}

impl Add for &NumericalPolynomial {
    type Output = NumericalPolynomial;

    fn add(self, rhs: Self) -> NumericalPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default();
                let b = rhs.coeffs.get(i).cloned().unwrap_or_default();
                a + b
            })
            .collect();
        NumericalPolynomial::from_binomial_coeffs(coeffs)
    }
}

impl Sub for &NumericalPolynomial {
    type Output = NumericalPolynomial;

    fn sub(self, rhs: Self) -> NumericalPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &NumericalPolynomial {
    type Output = NumericalPolynomial;

    fn neg(self) -> NumericalPolynomial {
        NumericalPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for NumericalPolynomial {
    type Output = NumericalPolynomial;

    fn add(self, rhs: Self) -> NumericalPolynomial {
        &self + &rhs
    }
}

impl Sub for NumericalPolynomial {
    type Output = NumericalPolynomial;

    fn sub(self, rhs: Self) -> NumericalPolynomial {
        &self - &rhs
    }
}

impl Neg for NumericalPolynomial {
    type Output = NumericalPolynomial;

    fn neg(self) -> NumericalPolynomial {
        -&self
    }
}

/// Monomial form, e.g. `1/2*T^2 + 3/2*T + 1`.
impl fmt::Display for NumericalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = self.monomial_coeffs();
        let mut wrote = false;
        for (j, c) in mono.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            match (wrote, negative) {
                (false, true) => write!(f, "-")?,
                (true, true) => write!(f, " - ")?,
                (true, false) => write!(f, " + ")?,
                (false, false) => {}
            }
            wrote = true;
            let var = match j {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{j}"),
            };
            if j == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}
