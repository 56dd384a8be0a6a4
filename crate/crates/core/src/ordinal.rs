//! Ordinals below ω^ω in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("ordinal has exponent {exponent}, not below {m}")]
    OutOfRange { exponent: u32, m: usize },
    #[error("CNF terms must have strictly decreasing exponents and positive coefficients")]
    NonCanonical,
    #[error("cannot parse ordinal {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// `Σ ω^{e_j}·c_j` with `e_1 > e_2 > …` and every `c_j ≥ 1`; the empty sum is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "CnfRepr", into = "CnfRepr")]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CnfRepr {
    cnf: Vec<(u32, u64)>,
}

impl TryFrom<CnfRepr> for Ordinal {
    type Error = OrdinalError;

    fn try_from(repr: CnfRepr) -> Result<Self, OrdinalError> {
        Ordinal::from_terms(repr.cnf)
    }
}

impl From<Ordinal> for CnfRepr {
    fn from(o: Ordinal) -> Self {
        CnfRepr { cnf: o.terms }
    }
}

impl Ordinal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn finite(n: u64) -> Self {
        Self::monomial(0, n)
    }

    pub fn omega() -> Self {
        Self::monomial(1, 1)
    }

    /// `ω^exponent · coeff`.
    pub fn monomial(exponent: u32, coeff: u64) -> Self {
        if coeff == 0 {
            return Self::zero();
        }
        Self {
            terms: vec![(exponent, coeff)],
        }
    }

    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, OrdinalError> {
        let decreasing = terms.windows(2).all(|w| w[0].0 > w[1].0);
        if !decreasing || terms.iter().any(|&(_, c)| c == 0) {
            return Err(OrdinalError::NonCanonical);
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_exponent(&self) -> Option<u32> {
        self.terms.first().map(|&(e, _)| e)
    }

    /// Coefficient of `ω^exponent` (zero when absent).
    pub fn coeff(&self, exponent: u32) -> u64 {
        self.terms
            .iter()
            .find(|&&(e, _)| e == exponent)
            .map_or(0, |&(_, c)| c)
    }

    /// Ordinal (non-commutative) sum `self + rhs`.
    pub fn ordinal_sum(&self, rhs: &Self) -> Self {
        let Some(lead) = rhs.leading_exponent() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> =
            self.terms.iter().copied().filter(|&(e, _)| e >= lead).collect();
        let mut rest = rhs.terms.iter().copied();
        match terms.last_mut() {
            Some(last) if last.0 == lead => {
                let (_, c) = rest.next().expect("rhs is nonzero");
                last.1 = checked_add(last.1, c);
            }
            _ => {}
        }
        terms.extend(rest);
        Self { terms }
    }

    /// Hessenberg (natural) sum `self ⊕ rhs`.
    pub fn natural_sum(&self, rhs: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), rhs.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ea, ca)), Some(&&(eb, cb))) => match ea.cmp(&eb) {
                    Ordering::Greater => {
                        terms.push((ea, ca));
                        a.next();
                    }
                    Ordering::Less => {
                        terms.push((eb, cb));
                        b.next();
                    }
                    Ordering::Equal => {
                        terms.push((ea, checked_add(ca, cb)));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&t), None) => {
                    terms.push(t);
                    a.next();
                }
                (None, Some(&&t)) => {
                    terms.push(t);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { terms }
    }

    /// `Σ_i ω^i · r[i]`: entry `i` of the tuple is the coefficient of `ω^i`.
    pub fn from_tuple(r: &[u64]) -> Self {
        let terms = r
            .iter()
            .enumerate()
            .rev()
            .filter(|&(_, &c)| c > 0)
            .map(|(i, &c)| (i as u32, c))
            .collect();
        Self { terms }
    }

    /// Inverse of [`from_tuple`](Self::from_tuple) for ordinals below `ω^m`.
    pub fn to_tuple(&self, m: usize) -> Result<Vec<u64>, OrdinalError> {
        let mut r = vec![0; m];
        for &(e, c) in &self.terms {
            if e as usize >= m {
                return Err(OrdinalError::OutOfRange { exponent: e, m });
            }
            r[e as usize] = c;
        }
        Ok(r)
    }

    /// True when every exponent is below `m`, i.e. `self < ω^m`.
    pub fn is_below_omega_pow(&self, m: usize) -> bool {
        self.leading_exponent().is_none_or(|e| (e as usize) < m)
    }
}

fn checked_add(a: u64, b: u64) -> u64 {
    a.checked_add(b).expect("ordinal coefficient overflow")
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        // Lexicographic on (exponent, coefficient) pairs; a proper prefix is smaller.
        self.terms.cmp(&other.terms)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Self::finite(n)
    }
}

/// Renders as `w^2*3 + w*1 + 4`.
impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "w*{c}")?,
                _ => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

/// Accepts sums of terms `N`, `w`, `w*N`, `w^E`, `w^E*N`, `N*w^E` (`ω` may
/// replace `w`). Terms may come in any order and repeat; they are combined
/// with ordinal addition left to right.
impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(input: &str) -> Result<Self, OrdinalError> {
        let err = |reason: &str| OrdinalError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let cleaned: String = input
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == 'ω' { 'w' } else { c })
            .collect();
        if cleaned.is_empty() {
            return Err(err("empty"));
        }
        let mut acc = Ordinal::zero();
        for term in cleaned.split('+') {
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let mut exponent: Option<u32> = None;
            let mut coeff: u64 = 1;
            for factor in term.split('*') {
                if let Some(rest) = factor.strip_prefix('w') {
                    if exponent.is_some() {
                        return Err(err("more than one power of w in a term"));
                    }
                    exponent = Some(if rest.is_empty() {
                        1
                    } else {
                        let digits = rest.strip_prefix('^').ok_or_else(|| err("expected '^' after w"))?;
                        digits.parse().map_err(|_| err("bad exponent"))?
                    });
                } else {
                    let n: u64 = factor.parse().map_err(|_| err("bad coefficient"))?;
                    coeff = coeff.checked_mul(n).ok_or_else(|| err("coefficient overflow"))?;
                }
            }
            acc = acc.ordinal_sum(&Ordinal::monomial(exponent.unwrap_or(0), coeff));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(Ordinal::omega().cmp(&Ordinal::finite(1000)), Ordering::Greater);
        assert_eq!(o("w*2+3").cmp(&o("w*2+3")), Ordering::Equal);
        assert_eq!(o("w^2").cmp(&o("w*5+9")), Ordering::Greater);
        assert!(o("w*2") < o("w*2+1"));
        assert!(Ordinal::zero() < Ordinal::finite(1));
    }

    #[test]
    fn sum_examples() {
        assert_eq!(Ordinal::finite(1).ordinal_sum(&Ordinal::omega()), Ordinal::omega());
        assert_eq!(o("w+1").natural_sum(&o("w")), o("w*2+1"));
        assert_eq!(o("w*2+3").ordinal_sum(&o("w")), o("w*3"));
        assert_eq!(o("w^2+w").ordinal_sum(&o("5")), o("w^2+w+5"));
        assert_eq!(o("w+3").ordinal_sum(&Ordinal::zero()), o("w+3"));
    }

    #[test]
    fn tuple_examples() {
        assert_eq!(Ordinal::from_tuple(&[3, 2]), o("w*2+3"));
        assert_eq!(Ordinal::from_tuple(&[0, 0, 0]), Ordinal::zero());
        assert_eq!(
            o("w^2").to_tuple(2),
            Err(OrdinalError::OutOfRange { exponent: 2, m: 2 })
        );
        assert_eq!(o("w*2+3").to_tuple(2).unwrap(), vec![3, 2]);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(o("w^2*3 + w*1 + 4").to_string(), "w^2*3 + w*1 + 4");
        assert_eq!(o("ω^2").to_string(), "w^2*1");
        assert_eq!(o("0").to_string(), "0");
        assert_eq!(o("3*w"), o("w*3"));
        assert_eq!(o("5 + w"), Ordinal::omega());
        assert!("w^".parse::<Ordinal>().is_err());
        assert!("".parse::<Ordinal>().is_err());
        assert!("w*w".parse::<Ordinal>().is_err());
        assert!("x".parse::<Ordinal>().is_err());
    }

    #[test]
    fn json_form() {
        let a = o("w^2*3 + w + 4");
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"cnf":[[2,3],[1,1],[0,4]]}"#);
        assert_eq!(serde_json::from_str::<Ordinal>(&s).unwrap(), a);
        assert!(serde_json::from_str::<Ordinal>(r#"{"cnf":[[1,1],[2,1]]}"#).is_err());
        assert!(serde_json::from_str::<Ordinal>(r#"{"cnf":[[1,0]]}"#).is_err());
    }
}
