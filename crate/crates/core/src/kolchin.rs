//! Canonical binomial decomposition of Kolchin polynomials and the ordinal
//! rank map on them.
//!
//! Every Kolchin polynomial is uniquely
//! `C(T+a_1, a_1) + C(T+a_2-1, a_2) + … + C(T+a_n-(n-1), a_n)` with
//! `a_1 ≥ … ≥ a_n ≥ 0`, and its rank is the ordinal `ω^{a_1} + … + ω^{a_n}`.

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numpoly::NumericalPolynomial;
use crate::ordinal::Ordinal;

/// Refuse to expand decompositions longer than this many summands.
pub const MAX_SUMMANDS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KolchinError {
    #[error("not a Kolchin polynomial: remainder {remainder} after {step} summands has a negative leading coefficient")]
    NotInP { step: usize, remainder: String },
    #[error("the zero polynomial has no rank bounds")]
    ZeroPolynomial,
    #[error("decomposition would exceed {MAX_SUMMANDS} summands")]
    TooLarge,
}

/// The nonincreasing exponent list `a_1 ≥ a_2 ≥ … ≥ a_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct KolchinDecomposition {
    exponents: Vec<u32>,
}

impl KolchinDecomposition {
    /// `None` unless the list is nonincreasing.
    pub fn new(exponents: Vec<u32>) -> Option<Self> {
        exponents
            .windows(2)
            .all(|w| w[0] >= w[1])
            .then_some(Self { exponents })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `Σ_i C(T + a_i - (i-1), a_i)`.
    pub fn reconstruct(&self) -> NumericalPolynomial {
        self.exponents
            .iter()
            .enumerate()
            .fold(NumericalPolynomial::zero(), |acc, (i, &a)| {
                &acc + &NumericalPolynomial::shifted_binomial(a as usize, i)
            })
    }

    /// `ω^{a_1} + … + ω^{a_n}`; with a nonincreasing list this is the CNF
    /// whose coefficients are the multiplicities.
    pub fn rank(&self) -> Ordinal {
        self.exponents
            .iter()
            .fold(Ordinal::zero(), |acc, &a| acc.ordinal_sum(&Ordinal::monomial(a, 1)))
    }
}

/// Greedy degree peeling: `a_i` is the degree of the current remainder.
pub fn decompose(p: &NumericalPolynomial) -> Result<KolchinDecomposition, KolchinError> {
    let mut exponents: Vec<u32> = Vec::new();
    let mut rem = p.clone();
    while let Some(deg) = rem.degree() {
        let lead = rem.leading_binomial_coeff().expect("nonzero remainder");
        if lead.is_negative() {
            return Err(KolchinError::NotInP {
                step: exponents.len(),
                remainder: rem.to_string(),
            });
        }
        if deg == 0 {
            // Each C(T - s, 0) is the constant 1.
            let n = lead
                .to_usize()
                .filter(|n| exponents.len().saturating_add(*n) <= MAX_SUMMANDS)
                .ok_or(KolchinError::TooLarge)?;
            exponents.resize(exponents.len() + n, 0);
            break;
        }
        if exponents.len() >= MAX_SUMMANDS {
            return Err(KolchinError::TooLarge);
        }
        let summand = NumericalPolynomial::shifted_binomial(deg, exponents.len());
        rem = &rem - &summand;
        exponents.push(deg as u32);
    }
    Ok(KolchinDecomposition { exponents })
}

/// `rk_𝒫(P)`.
pub fn rank(p: &NumericalPolynomial) -> Result<Ordinal, KolchinError> {
    decompose(p).map(|d| d.rank())
}

/// Membership in 𝒫, i.e. the greedy decomposition succeeds.
pub fn is_kolchin(p: &NumericalPolynomial) -> bool {
    decompose(p).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// Degree of `P`.
    pub k: u32,
    /// Top binomial coefficient, so `P = (n/k!)·T^k + …`.
    pub n: u64,
    pub rank: Ordinal,
    pub lower: Ordinal,
    pub upper_exclusive: Ordinal,
    pub holds: bool,
}

/// Checks `ω^k·n ≤ rk(P) < ω^k·(n+1)`.
pub fn check_rank_bounds(p: &NumericalPolynomial) -> Result<BoundsReport, KolchinError> {
    let decomposition = decompose(p)?;
    let (Some(k), Some(lead)) = (p.degree(), p.leading_binomial_coeff()) else {
        return Err(KolchinError::ZeroPolynomial);
    };
    let k = k as u32;
    let n = lead.to_u64().ok_or(KolchinError::TooLarge)?;
    let rank = decomposition.rank();
    let lower = Ordinal::monomial(k, n);
    let upper_exclusive = Ordinal::monomial(k, n + 1);
    let holds = lower <= rank && rank < upper_exclusive;
    Ok(BoundsReport {
        k,
        n,
        rank,
        lower,
        upper_exclusive,
        holds,
    })
}
