//! Finite prime-field versions of the affine set constructions: the
//! quadruple sets `Inv_X(α)`, their fibers, threshold-based `X^𝒴_{a,b,z}`,
//! and the orbit of `X` under affine maps.
//!
//! "Infinite" has no meaning over `F_p`; wherever a construction asks for an
//! infinite intersection the caller supplies a size threshold instead.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("element {value} is not reduced mod {p}")]
    NotReduced { value: u64, p: u64 },
    #[error("{0} is not a member of X")]
    NotInX(u64),
    #[error("X must be nonempty")]
    EmptyX,
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("cannot parse set {input:?}: {reason}")]
    ParseSet { input: String, reason: String },
    #[error("threshold must be at least 1")]
    ZeroThreshold,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic in `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ProbeError> {
        if p == 2 || !is_prime(p) || p > u32::MAX as u64 {
            return Err(ProbeError::NotOddPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        (!a.is_multiple_of(self.p)).then(|| self.pow(a, self.p - 2))
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }

    /// Nonzero squares.
    pub fn quadratic_residues(&self) -> BTreeSet<u64> {
        (1..self.p).map(|x| self.mul(x, x)).collect()
    }
}

/// How a subset of `F_p` is written on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetSpec {
    /// Nonzero squares.
    QuadraticResidues,
    /// The whole field.
    All,
    /// `lo..hi` (half-open) or `lo..=hi`.
    Interval { lo: u64, hi_exclusive: u64 },
    List(Vec<u64>),
}

impl FromStr for SetSpec {
    type Err = ProbeError;

    fn from_str(s: &str) -> Result<Self, ProbeError> {
        let s = s.trim();
        let err = |reason: &str| ProbeError::ParseSet {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        match s {
            "qr" | "squares" => return Ok(SetSpec::QuadraticResidues),
            "all" | "field" => return Ok(SetSpec::All),
            "" => return Ok(SetSpec::List(Vec::new())),
            _ => {}
        }
        if let Some((lo, hi)) = s.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| err("bad interval start"))?;
            let hi_exclusive = match hi.strip_prefix('=') {
                Some(h) => h.trim().parse::<u64>().map_err(|_| err("bad interval end"))? + 1,
                None => hi.trim().parse().map_err(|_| err("bad interval end"))?,
            };
            return Ok(SetSpec::Interval { lo, hi_exclusive });
        }
        s.split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| err("bad element")))
            .collect::<Result<Vec<_>, _>>()
            .map(SetSpec::List)
    }
}

impl SetSpec {
    /// Materializes the set; list entries and interval ends are reduced mod `p`.
    pub fn resolve(&self, field: &PrimeField) -> BTreeSet<u64> {
        let p = field.p();
        match self {
            SetSpec::QuadraticResidues => field.quadratic_residues(),
            SetSpec::All => field.elements().collect(),
            SetSpec::Interval { lo, hi_exclusive } => (*lo..*hi_exclusive).map(|x| x % p).collect(),
            SetSpec::List(v) => v.iter().map(|x| x % p).collect(),
        }
    }
}

/// `F_p` with a distinguished subset `X` and named subsets `Y_z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFieldConfig {
    field: PrimeField,
    x: BTreeSet<u64>,
    families: BTreeMap<String, BTreeSet<u64>>,
    #[serde(skip)]
    member: Vec<bool>,
}

impl PrimeFieldConfig {
    pub fn new(
        p: u64,
        x: impl IntoIterator<Item = u64>,
        families: BTreeMap<String, BTreeSet<u64>>,
    ) -> Result<Self, ProbeError> {
        let field = PrimeField::new(p)?;
        let x: BTreeSet<u64> = x.into_iter().collect();
        for &v in x.iter().chain(families.values().flatten()) {
            if v >= p {
                return Err(ProbeError::NotReduced { value: v, p });
            }
        }
        if x.is_empty() {
            return Err(ProbeError::EmptyX);
        }
        let mut member = vec![false; p as usize];
        for &v in &x {
            member[v as usize] = true;
        }
        Ok(Self {
            field,
            x,
            families,
            member,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn x(&self) -> &BTreeSet<u64> {
        &self.x
    }

    pub fn family(&self, name: &str) -> Result<&BTreeSet<u64>, ProbeError> {
        self.families
            .get(name)
            .ok_or_else(|| ProbeError::UnknownFamily(name.to_string()))
    }

    pub fn in_x(&self, v: u64) -> bool {
        self.member.get(v as usize).copied().unwrap_or(false)
    }

    fn check_element(&self, v: u64) -> Result<(), ProbeError> {
        if v >= self.p() {
            return Err(ProbeError::NotReduced { value: v, p: self.p() });
        }
        Ok(())
    }

    fn check_in_x(&self, v: u64) -> Result<(), ProbeError> {
        self.check_element(v)?;
        if !self.in_x(v) {
            return Err(ProbeError::NotInX(v));
        }
        Ok(())
    }
}

/// `Inv_X(α) = {(a,b,c,d) ∈ X⁴ : b ≠ c, a - d = α(b - c)}`, in lexicographic order.
///
/// For each `(a, b, c)` the equation determines `d`, which is then tested for
/// membership in `X`.
pub fn inv_set(cfg: &PrimeFieldConfig, alpha: u64) -> Result<Vec<[u64; 4]>, ProbeError> {
    cfg.check_element(alpha)?;
    let f = cfg.field();
    let mut out = Vec::new();
    for &a in cfg.x() {
        for &b in cfg.x() {
            for &c in cfg.x() {
                if b == c {
                    continue;
                }
                let d = f.sub(a, f.mul(alpha, f.sub(b, c)));
                if cfg.in_x(d) {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    Ok(out)
}

/// Size of `Inv_X(α)` without materializing it.
pub fn inv_count(cfg: &PrimeFieldConfig, alpha: u64) -> Result<u64, ProbeError> {
    cfg.check_element(alpha)?;
    let f = cfg.field();
    let mut n = 0;
    for &a in cfg.x() {
        for &b in cfg.x() {
            let base = f.sub(a, f.mul(alpha, b));
            n += cfg
                .x()
                .iter()
                .filter(|&&c| c != b && cfg.in_x(f.add(base, f.mul(alpha, c))))
                .count() as u64;
        }
    }
    Ok(n)
}

/// Re-checks a quadruple against the quotient form `(a - d)/(b - c) = α`,
/// dividing by `b - c` rather than clearing it.
pub fn verify_inv_quadruple(cfg: &PrimeFieldConfig, alpha: u64, q: &[u64; 4]) -> bool {
    let f = cfg.field();
    let [a, b, c, d] = *q;
    if !q.iter().all(|&v| cfg.in_x(v)) {
        return false;
    }
    match f.inv(f.sub(b, c)) {
        Some(inv) => f.mul(f.sub(a, d), inv) == alpha % f.p(),
        None => false,
    }
}

/// The fiber `{(c, d) ∈ X² : (a, b, c, d) ∈ Inv_X(α)}`.
pub fn inv_fiber(cfg: &PrimeFieldConfig, alpha: u64, a: u64, b: u64) -> Result<Vec<(u64, u64)>, ProbeError> {
    cfg.check_element(alpha)?;
    cfg.check_in_x(a)?;
    cfg.check_in_x(b)?;
    let f = cfg.field();
    let mut out = Vec::new();
    for &c in cfg.x() {
        if c == b {
            continue;
        }
        let d = f.sub(a, f.mul(alpha, f.sub(b, c)));
        if cfg.in_x(d) {
            out.push((c, d));
        }
    }
    Ok(out)
}

/// The fiber as a line: `{(c, d) ∈ X² : d - cα = a - bα, (c, d) ≠ (b, a)}`,
/// scanning all of `X²`.
pub fn inv_fiber_as_line(cfg: &PrimeFieldConfig, alpha: u64, a: u64, b: u64) -> Vec<(u64, u64)> {
    let f = cfg.field();
    let target = f.sub(a, f.mul(b, alpha));
    let mut out = Vec::new();
    for &c in cfg.x() {
        for &d in cfg.x() {
            if (c, d) != (b, a) && f.sub(d, f.mul(c, alpha)) == target {
                out.push((c, d));
            }
        }
    }
    out
}

/// `{c ∈ X : |X ∩ (a + (c - b)·Y_z)| ≥ threshold}`.
pub fn x_family_set(
    cfg: &PrimeFieldConfig,
    a: u64,
    b: u64,
    z: &str,
    threshold: usize,
) -> Result<Vec<u64>, ProbeError> {
    cfg.check_in_x(a)?;
    cfg.check_in_x(b)?;
    if threshold == 0 {
        return Err(ProbeError::ZeroThreshold);
    }
    let family = cfg.family(z)?;
    let f = cfg.field();
    let mut out = Vec::new();
    for &c in cfg.x() {
        let scale = f.sub(c, b);
        let translate: BTreeSet<u64> = family.iter().map(|&y| f.add(a, f.mul(scale, y))).collect();
        let hits = translate.iter().filter(|&&v| cfg.in_x(v)).count();
        if hits >= threshold {
            out.push(c);
        }
    }
    Ok(out)
}

/// Distinct affine images `a + bX` for `b ∈ F_p^×`, `a ∈ F_p`, in order of
/// first appearance, at most `limit` of them.
pub fn aff_orbit(cfg: &PrimeFieldConfig, limit: usize) -> Vec<Vec<u64>> {
    let f = cfg.field();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut out = Vec::new();
    'outer: for b in 1..f.p() {
        for a in 0..f.p() {
            if out.len() >= limit {
                break 'outer;
            }
            let image: BTreeSet<u64> = cfg.x().iter().map(|&x| f.add(a, f.mul(b, x))).collect();
            let image: Vec<u64> = image.into_iter().collect();
            if seen.insert(image.clone()) {
                out.push(image);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonemptinessReport {
    pub p: u64,
    pub x_size: usize,
    /// `|Inv_X(α)|` for each nonzero `α`.
    pub counts: BTreeMap<u64, u64>,
    pub empty_alphas: Vec<u64>,
    pub all_nonempty: bool,
}

/// Records, for every `α ∈ F_p^×`, whether `Inv_X(α)` is nonempty. An
/// observation about this particular `X`, not a claim about finite fields.
pub fn nonemptiness_report(cfg: &PrimeFieldConfig) -> NonemptinessReport {
    let mut counts = BTreeMap::new();
    for alpha in 1..cfg.p() {
        counts.insert(alpha, inv_count(cfg, alpha).expect("alpha reduced"));
    }
    let empty_alphas: Vec<u64> = counts.iter().filter(|(_, &n)| n == 0).map(|(&a, _)| a).collect();
    NonemptinessReport {
        p: cfg.p(),
        x_size: cfg.x().len(),
        all_nonempty: empty_alphas.is_empty(),
        counts,
        empty_alphas,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: u64, x: &[u64]) -> PrimeFieldConfig {
        PrimeFieldConfig::new(p, x.iter().copied(), BTreeMap::new()).unwrap()
    }

    fn cfg_with(p: u64, x: BTreeSet<u64>, name: &str, y: BTreeSet<u64>) -> PrimeFieldConfig {
        PrimeFieldConfig::new(p, x, BTreeMap::from([(name.to_string(), y)])).unwrap()
    }

    #[test]
    fn field_checks() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(101).is_ok());
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(3), Some(5));
        assert_eq!(f.inv(0), None);
        assert_eq!(f.quadratic_residues(), BTreeSet::from([1, 2, 4]));
    }

    #[test]
    fn inv_set_examples() {
        let c = cfg(7, &[1, 2, 4]);
        let inv = inv_set(&c, 1).unwrap();
        assert!(inv.contains(&[2, 2, 1, 1]));
        assert!(inv.iter().all(|q| verify_inv_quadruple(&c, 1, q)));
        // brute force over X⁴
        let mut brute = Vec::new();
        for a in [1, 2, 4] {
            for b in [1, 2, 4] {
                for cc in [1u64, 2, 4] {
                    for d in [1u64, 2, 4] {
                        if b != cc && (a + 7 - d) % 7 == (b + 7 - cc) % 7 {
                            brute.push([a, b, cc, d]);
                        }
                    }
                }
            }
        }
        assert_eq!(inv, brute);
        assert_eq!(inv_count(&c, 1).unwrap(), inv.len() as u64);

        assert!(inv_set(&cfg(5, &[0]), 1).unwrap().is_empty());
    }

    #[test]
    fn fiber_examples() {
        let full = cfg(7, &(0..7).collect::<Vec<_>>());
        let fiber = inv_fiber(&full, 1, 0, 0).unwrap();
        let expected: Vec<(u64, u64)> = (1..7).map(|c| (c, c)).collect();
        assert_eq!(fiber, expected);
        assert_eq!(inv_fiber_as_line(&full, 1, 0, 0), expected);

        let fiber = inv_fiber(&full, 0, 3, 5).unwrap();
        let expected: Vec<(u64, u64)> = (0..7).filter(|&c| c != 5).map(|c| (c, 3)).collect();
        assert_eq!(fiber, expected);

        assert!(inv_fiber(&cfg(7, &[3]), 2, 3, 3).unwrap().is_empty());
        assert_eq!(inv_fiber(&cfg(7, &[3]), 2, 4, 3), Err(ProbeError::NotInX(4)));
    }

    #[test]
    fn x_family_full_line() {
        let x: BTreeSet<u64> = BTreeSet::from([1, 2, 4]);
        let all: BTreeSet<u64> = (0..7).collect();
        let c = cfg_with(7, x.clone(), "F", all);
        // every c ≠ b sees all of F_p; c = b sees only {a}
        assert_eq!(x_family_set(&c, 1, 2, "F", 3).unwrap(), vec![1, 4]);
        assert_eq!(x_family_set(&c, 1, 2, "F", 1).unwrap(), vec![1, 2, 4]);
        assert_eq!(x_family_set(&c, 1, 2, "G", 1), Err(ProbeError::UnknownFamily("G".into())));
        assert_eq!(x_family_set(&c, 1, 2, "F", 0), Err(ProbeError::ZeroThreshold));
    }

    #[test]
    fn x_family_squares_mod_11() {
        let f = PrimeField::new(11).unwrap();
        let sq = f.quadratic_residues();
        let c = cfg_with(11, sq.clone(), "sq", sq.clone());
        let got = x_family_set(&c, 1, 3, "sq", 3).unwrap();
        // independent count straight from the definition
        let expected: Vec<u64> = sq
            .iter()
            .copied()
            .filter(|&cc| {
                let hits: BTreeSet<u64> = sq
                    .iter()
                    .map(|&y| (1 + (cc + 11 - 3) % 11 * y) % 11)
                    .filter(|v| sq.contains(v))
                    .collect();
                hits.len() >= 3
            })
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn aff_orbit_examples() {
        let full = cfg(7, &(0..7).collect::<Vec<_>>());
        assert_eq!(aff_orbit(&full, 100).len(), 1);
        let point = cfg(7, &[0]);
        assert_eq!(aff_orbit(&point, 100).len(), 7);
        let qr = cfg(7, &[1, 2, 4]);
        let orbit = aff_orbit(&qr, 100);
        assert!(orbit.len() <= 42);
        // multiplying by a square fixes {1,2,4}, so each set is hit by 3 pairs
        assert_eq!(orbit.len(), 14);
        assert_eq!(aff_orbit(&qr, 5).len(), 5);
    }

    #[test]
    fn set_spec_parsing() {
        let f = PrimeField::new(11).unwrap();
        assert_eq!("qr".parse::<SetSpec>().unwrap().resolve(&f).len(), 5);
        assert_eq!("2..5".parse::<SetSpec>().unwrap().resolve(&f), BTreeSet::from([2, 3, 4]));
        assert_eq!("2..=5".parse::<SetSpec>().unwrap().resolve(&f), BTreeSet::from([2, 3, 4, 5]));
        assert_eq!("1, 12".parse::<SetSpec>().unwrap().resolve(&f), BTreeSet::from([1]));
        assert!("1,x".parse::<SetSpec>().is_err());
    }
}
