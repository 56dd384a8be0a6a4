//! Forking between Kolchin polynomials, the rank upper bound, and the
//! ordinal-indexed chain of types whose polynomials witness the lower bound
//! `ω^m` for a generic element.
//!
//! For `η < ω^m` with tuple `r̄`, the chain type `p_η` has every jet `δ^μ a`
//! with `μ ≥ η` in its parameter set, so its free jets are the lattice points
//! `ū` whose ordinal (coefficient of `ω^i` = `u_{i+1}`) lies below `η`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kolchin::{self, KolchinError};
use crate::lattice::{self, LeaderSet};
use crate::numpoly::NumericalPolynomial;
use crate::ordinal::{Ordinal, OrdinalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("child polynomial {child} dominates parent {parent}; not an extension")]
    NotAnExtension { parent: String, child: String },
    #[error(transparent)]
    Kolchin(#[from] KolchinError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error("sample {sample} exceeds eta = {eta}")]
    SampleAboveEta { sample: String, eta: String },
    #[error("number of derivations m must be at least 1")]
    ZeroDimension,
}

/// True iff `child <_e parent`; `child = parent` is a non-forking extension.
pub fn forks(parent: &NumericalPolynomial, child: &NumericalPolynomial) -> Result<bool, RankError> {
    match child.compare_dominance(parent) {
        Ordering::Less => Ok(true),
        Ordering::Equal => Ok(false),
        Ordering::Greater => Err(RankError::NotAnExtension {
            parent: parent.to_string(),
            child: child.to_string(),
        }),
    }
}

/// The certified upper bound `U^Δ(p) ≤ rk(ω_p)`.
pub fn u_rank_upper(p: &NumericalPolynomial) -> Result<Ordinal, RankError> {
    Ok(kolchin::rank(p)?)
}

/// `η < ω^m` together with its coefficient tuple `r̄`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    m: usize,
    eta: Ordinal,
    r: Vec<u64>,
}

impl ChainSpec {
    pub fn new(m: usize, eta: Ordinal) -> Result<Self, RankError> {
        if m == 0 {
            return Err(RankError::ZeroDimension);
        }
        let r = eta.to_tuple(m)?;
        Ok(Self { m, eta, r })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eta(&self) -> &Ordinal {
        &self.eta
    }

    /// `r̄`, with `r[i]` the coefficient of `ω^i`.
    pub fn tuple(&self) -> &[u64] {
        &self.r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainPolynomial {
    pub polynomial: NumericalPolynomial,
    pub threshold: u64,
}

/// Free-jet polynomial of `p_η`.
///
/// The colex-initial segment below `r̄` splits into slabs: for each
/// coordinate `j`, coordinates above `j` equal `r̄`, coordinate `j` takes a
/// value `v < r_j`, and the `j` coordinates below are unconstrained. A slab
/// with fixed part of order `s` contributes `C(T - s + j, j)`.
pub fn chain_type_polynomial(spec: &ChainSpec) -> ChainPolynomial {
    let r = spec.tuple();
    let mut polynomial = NumericalPolynomial::zero();
    let mut fixed_above: u64 = 0;
    for j in (0..spec.m()).rev() {
        for v in 0..r[j] {
            let s = fixed_above + v;
            let summand = NumericalPolynomial::shifted_basis(j, &(BigInt::from(j) - BigInt::from(s)));
            polynomial = &polynomial + &summand;
        }
        fixed_above += r[j];
    }
    ChainPolynomial {
        polynomial,
        threshold: r.iter().sum(),
    }
}

/// Brute-force `#{ū : |ū| ≤ t, ord(ū) < η}` over the simplex.
pub fn count_chain_points(spec: &ChainSpec, t: u64) -> u64 {
    fn walk(spec: &ChainSpec, point: &mut Vec<u64>, idx: usize, budget: u64) -> u64 {
        if idx == point.len() {
            return u64::from(Ordinal::from_tuple(point) < *spec.eta());
        }
        let mut n = 0;
        for v in 0..=budget {
            point[idx] = v;
            n += walk(spec, point, idx + 1, budget - v);
        }
        point[idx] = 0;
        n
    }
    let mut point = vec![0; spec.m()];
    walk(spec, &mut point, 0, t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub zeta: Ordinal,
    pub polynomial: NumericalPolynomial,
    pub threshold: u64,
    pub rank: Ordinal,
    /// `rank ≥ ζ`: `p_ζ` witnesses rank at least `ζ`.
    pub rank_at_least_zeta: bool,
    /// Closed form agrees with the brute-force count on `[threshold, threshold + window)`.
    pub oracle_agrees: bool,
    /// Whether the next type up the chain is a forking extension of this one
    /// (`None` for the top element `η`).
    pub forks_below_next: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub m: usize,
    pub eta: Ordinal,
    pub tuple: Vec<u64>,
    pub oracle_window: u64,
    pub steps: Vec<ChainStep>,
    pub generic_polynomial: NumericalPolynomial,
    pub generic_rank: Ordinal,
    /// The unconstrained type has rank exactly `ω^m`.
    pub generic_rank_is_omega_pow_m: bool,
    pub all_descents_strict: bool,
    pub all_ranks_at_least_zeta: bool,
    pub all_oracles_agree: bool,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.generic_rank_is_omega_pow_m
            && self.all_descents_strict
            && self.all_ranks_at_least_zeta
            && self.all_oracles_agree
    }
}

/// Number of points checked against the brute-force counter per chain step.
pub const ORACLE_WINDOW: u64 = 10;

/// Checks strict `<_e` ascent along the sorted samples followed by `η`, the
/// rank lower bounds, and the generic rank `ω^m`.
pub fn verify_chain(spec: &ChainSpec, samples: &[Ordinal]) -> Result<ChainReport, RankError> {
    let m = spec.m();
    let mut zetas: Vec<Ordinal> = samples.to_vec();
    if let Some(bad) = zetas.iter().find(|z| **z > *spec.eta()) {
        return Err(RankError::SampleAboveEta {
            sample: bad.to_string(),
            eta: spec.eta().to_string(),
        });
    }
    zetas.push(spec.eta().clone());
    zetas.sort();
    zetas.dedup();

    let mut steps = Vec::with_capacity(zetas.len());
    for zeta in &zetas {
        let sub = ChainSpec::new(m, zeta.clone())?;
        let ChainPolynomial {
            polynomial,
            threshold,
        } = chain_type_polynomial(&sub);
        let oracle_agrees = (threshold..threshold + ORACLE_WINDOW).all(|t| {
            polynomial.evaluate(&BigInt::from(t)) == BigInt::from(count_chain_points(&sub, t))
        });
        let rank = kolchin::rank(&polynomial)?;
        steps.push(ChainStep {
            zeta: zeta.clone(),
            rank_at_least_zeta: rank >= *zeta,
            polynomial,
            threshold,
            rank,
            oracle_agrees,
            forks_below_next: None,
        });
    }
    for i in 0..steps.len().saturating_sub(1) {
        let f = forks(&steps[i + 1].polynomial, &steps[i].polynomial).unwrap_or(false);
        steps[i].forks_below_next = Some(f);
    }

    let generic = LeaderSet::unconstrained(m, 1).map_err(|_| RankError::ZeroDimension)?;
    let generic_polynomial = lattice::dimension_polynomial(&generic).polynomial;
    let generic_rank = kolchin::rank(&generic_polynomial)?;
    let omega_pow_m = Ordinal::monomial(m as u32, 1);

    Ok(ChainReport {
        m,
        eta: spec.eta().clone(),
        tuple: spec.tuple().to_vec(),
        oracle_window: ORACLE_WINDOW,
        all_descents_strict: steps.iter().all(|s| s.forks_below_next != Some(false)),
        all_ranks_at_least_zeta: steps.iter().all(|s| s.rank_at_least_zeta),
        all_oracles_agree: steps.iter().all(|s| s.oracle_agrees),
        generic_rank_is_omega_pow_m: generic_rank == omega_pow_m,
        steps,
        generic_polynomial,
        generic_rank,
    })
}

/// `u_a + u_{b|a} ≤ u_{ab} ≤ u_a ⊕ u_{b|a}`.
pub fn lascar_bounds(u_a: &Ordinal, u_b_given_a: &Ordinal, u_ab: &Ordinal) -> bool {
    let lower = u_a.ordinal_sum(u_b_given_a);
    let upper = u_a.natural_sum(u_b_given_a);
    lower <= *u_ab && *u_ab <= upper
}
