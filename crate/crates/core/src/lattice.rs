//! Leader sets in ℕ^m and their Kolchin dimension polynomials.
//!
//! A point `ū` in coordinate `i`'s leader set marks `δ^ū a_i`, and every
//! derivative of it, as dependent. The free jets of order `≤ t` are the
//! points of the simplex `|ū| ≤ t` lying outside the upward-closed filter
//! generated by the leaders.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numpoly::NumericalPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("ambient dimension m must be at least 1")]
    ZeroDimension,
    #[error("a leader set needs at least one coordinate")]
    NoCoordinates,
    #[error("point {point:?} in coordinate {coord} has length {len}, expected m = {m}")]
    WrongArity {
        coord: usize,
        point: Vec<u32>,
        len: usize,
        m: usize,
    },
}

/// A point `ū ∈ ℕ^m`, naming the operator `δ_1^{u_1}⋯δ_m^{u_m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<u32>);

impl LatticePoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|ū|`, the order of `δ^ū`.
    pub fn order(&self) -> u64 {
        self.0.iter().map(|&u| u as u64).sum()
    }

    /// Componentwise `self ≼ other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Self) -> Self {
        LatticePoint(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }
}

impl From<Vec<u32>> for LatticePoint {
    fn from(v: Vec<u32>) -> Self {
        LatticePoint(v)
    }
}

/// The ≼-minimal elements of `points`, sorted and deduplicated.
pub fn minimize(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut sorted: Vec<LatticePoint> = points.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut keep: Vec<LatticePoint> = Vec::with_capacity(sorted.len());
    for p in &sorted {
        if !sorted.iter().any(|q| q != p && q.leq(p)) {
            keep.push(p.clone());
        }
    }
    keep
}

/// One leader set per coordinate of a tuple `ā = (a_1, …, a_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LeaderSetRepr", into = "LeaderSetRepr")]
pub struct LeaderSet {
    m: usize,
    coords: Vec<Vec<LatticePoint>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LeaderSetRepr {
    m: usize,
    coords: Vec<Vec<Vec<u32>>>,
}

impl TryFrom<LeaderSetRepr> for LeaderSet {
    type Error = LatticeError;

    fn try_from(r: LeaderSetRepr) -> Result<Self, LatticeError> {
        let coords = r
            .coords
            .into_iter()
            .map(|c| c.into_iter().map(LatticePoint).collect())
            .collect();
        LeaderSet::new(r.m, coords)
    }
}

impl From<LeaderSet> for LeaderSetRepr {
    fn from(l: LeaderSet) -> Self {
        LeaderSetRepr {
            m: l.m,
            coords: l
                .coords
                .into_iter()
                .map(|c| c.into_iter().map(|p| p.0).collect())
                .collect(),
        }
    }
}

impl LeaderSet {
    /// Validates arities; the sets are stored as given (see [`canonicalize`](Self::canonicalize)).
    pub fn new(m: usize, coords: Vec<Vec<LatticePoint>>) -> Result<Self, LatticeError> {
        if m == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        if coords.is_empty() {
            return Err(LatticeError::NoCoordinates);
        }
        for (coord, set) in coords.iter().enumerate() {
            if let Some(p) = set.iter().find(|p| p.dim() != m) {
                return Err(LatticeError::WrongArity {
                    coord,
                    point: p.0.clone(),
                    len: p.dim(),
                    m,
                });
            }
        }
        Ok(Self { m, coords })
    }

    /// A `d`-tuple with no constraints at all.
    pub fn unconstrained(m: usize, d: usize) -> Result<Self, LatticeError> {
        Self::new(m, vec![Vec::new(); d])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Vec<LatticePoint>] {
        &self.coords
    }

    /// Replaces every coordinate's set by its antichain of minimal elements.
    pub fn canonicalize(&self) -> Self {
        Self {
            m: self.m,
            coords: self.coords.iter().map(|c| minimize(c)).collect(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.coords.iter().all(|c| *c == minimize(c))
    }

    /// Adds `point` to coordinate `coord`.
    pub fn with_leader(&self, coord: usize, point: LatticePoint) -> Result<Self, LatticeError> {
        let mut coords = self.coords.clone();
        coords[coord].push(point);
        Self::new(self.m, coords)
    }
}

/// Brute-force count of free jets of order `≤ t`, by enumerating the simplex.
pub fn count_free_points(leaders: &LeaderSet, t: u64) -> u64 {
    let m = leaders.m();
    let mut total = 0u64;
    let mut point = vec![0u32; m];
    for set in leaders.coords() {
        total += count_outside(set, &mut point, 0, t);
    }
    total
}

fn count_outside(set: &[LatticePoint], point: &mut Vec<u32>, idx: usize, budget: u64) -> u64 {
    if idx == point.len() {
        let dominated = set
            .iter()
            .any(|l| l.0.iter().zip(point.iter()).all(|(a, b)| a <= b));
        return u64::from(!dominated);
    }
    let mut n = 0;
    for v in 0..=budget {
        point[idx] = v as u32;
        n += count_outside(set, point, idx + 1, budget - v);
    }
    point[idx] = 0;
    n
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionPolynomial {
    pub polynomial: NumericalPolynomial,
    /// Largest `|m_S|` over all subsets; from this `t` on the polynomial
    /// equals the free-point count.
    pub threshold: u64,
}

/// Inclusion–exclusion over subsets of each coordinate's antichain.
///
/// A subset `S` with join `m_S` contributes `(-1)^{|S|}·C(T - |m_S| + m, m)`;
/// subsets sharing a join are merged before the polynomial is built.
pub fn dimension_polynomial(leaders: &LeaderSet) -> DimensionPolynomial {
    let m = leaders.m();
    let mut polynomial = NumericalPolynomial::zero();
    let mut threshold = 0u64;
    for set in leaders.coords() {
        // The join is monotone, so the largest |m_S| is the join of the whole set.
        let full = set.iter().fold(LatticePoint(vec![0; m]), |acc, l| acc.join(l));
        threshold = threshold.max(full.order());
        // join -> signed multiplicity, starting from the empty subset
        let mut joins: BTreeMap<LatticePoint, BigInt> = BTreeMap::new();
        joins.insert(LatticePoint(vec![0; m]), BigInt::from(1));
        for leader in set {
            let mut next = joins.clone();
            for (join, sign) in &joins {
                *next.entry(join.join(leader)).or_default() -= sign;
            }
            next.retain(|_, c| !c.is_zero());
            joins = next;
        }
        for (join, mult) in &joins {
            let order = join.order();
            let term = NumericalPolynomial::shifted_binomial(m, order as usize).scale(mult);
            polynomial = &polynomial + &term;
        }
    }
    DimensionPolynomial {
        polynomial,
        threshold,
    }
}

/// Number of coordinates with an empty antichain; these are exactly the
/// coordinates contributing a full `T^m/m!` term.
pub fn delta_rank(leaders: &LeaderSet) -> usize {
    leaders.coords().iter().filter(|c| c.is_empty()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[u32]]) -> Vec<LatticePoint> {
        v.iter().map(|p| LatticePoint(p.to_vec())).collect()
    }

    fn leaders(m: usize, coords: &[&[&[u32]]]) -> LeaderSet {
        LeaderSet::new(m, coords.iter().map(|c| pts(c)).collect()).unwrap()
    }

    #[test]
    fn minimize_examples() {
        assert_eq!(minimize(&pts(&[&[1, 0], &[2, 0]])), pts(&[&[1, 0]]));
        assert!(minimize(&[]).is_empty());
        assert_eq!(minimize(&pts(&[&[2, 1], &[1, 2], &[2, 2]])), pts(&[&[1, 2], &[2, 1]]));
        assert_eq!(minimize(&pts(&[&[1, 1], &[1, 1]])), pts(&[&[1, 1]]));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_free_points(&leaders(2, &[&[]]), 3), 10);
        assert_eq!(count_free_points(&leaders(2, &[&[&[0, 0]]]), 5), 0);
        assert_eq!(count_free_points(&leaders(2, &[&[&[1, 0], &[0, 1]]]), 4), 1);
    }

    #[test]
    fn dimension_polynomial_examples() {
        let generic = dimension_polynomial(&leaders(2, &[&[]]));
        assert_eq!(generic.polynomial, NumericalPolynomial::shifted_binomial(2, 0));
        assert_eq!(generic.threshold, 0);

        let corner = dimension_polynomial(&leaders(2, &[&[&[1, 0], &[0, 1]]]));
        assert_eq!(corner.polynomial, NumericalPolynomial::constant(1));
        assert_eq!(corner.threshold, 2);

        let strip = dimension_polynomial(&leaders(2, &[&[&[2, 0]]]));
        assert_eq!(strip.polynomial, NumericalPolynomial::from_i64s(&[1, 2]));
        assert_eq!(strip.threshold, 2);
        let l = leaders(2, &[&[&[2, 0]]]);
        for t in 2..=6 {
            assert_eq!(strip.polynomial.evaluate_i64(t as i64), BigInt::from(count_free_points(&l, t)));
        }
    }

    #[test]
    fn delta_rank_examples() {
        let l = leaders(2, &[&[], &[], &[&[0, 0]]]);
        assert_eq!(delta_rank(&l), 2);
        let lead = dimension_polynomial(&l).polynomial.leading_monomial_coeff().unwrap();
        let two = num_rational::BigRational::from_integer(BigInt::from(2));
        assert_eq!(lead * &two, two);

        assert_eq!(delta_rank(&leaders(2, &[&[]])), 1);

        let l = leaders(2, &[&[&[1, 1]]]);
        assert_eq!(delta_rank(&l), 0);
        assert!(dimension_polynomial(&l).polynomial.degree().unwrap() < 2);
    }

    #[test]
    fn duplicate_joins_cancel() {
        // (1,1) is redundant next to (1,0); without canonicalizing the
        // polynomial must still be right.
        let raw = leaders(2, &[&[&[1, 0], &[1, 1]]]);
        let canon = raw.canonicalize();
        assert_eq!(dimension_polynomial(&raw).polynomial, dimension_polynomial(&canon).polynomial);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(LeaderSet::new(0, vec![vec![]]), Err(LatticeError::ZeroDimension));
        assert_eq!(LeaderSet::new(2, vec![]), Err(LatticeError::NoCoordinates));
        assert!(matches!(
            LeaderSet::new(2, vec![pts(&[&[1]])]),
            Err(LatticeError::WrongArity { coord: 0, len: 1, .. })
        ));
    }

    #[test]
    fn json_input_shape() {
        let l: LeaderSet = serde_json::from_str(r#"{"m":2, "coords":[[[2,0],[0,3]], []]}"#).unwrap();
        assert_eq!(l.d(), 2);
        assert_eq!(l.coords()[0], pts(&[&[2, 0], &[0, 3]]));
        assert!(serde_json::from_str::<LeaderSet>(r#"{"m":2, "coords":[[[2,0,1]]]}"#).is_err());
    }
}
