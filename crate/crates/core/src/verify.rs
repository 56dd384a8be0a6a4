//! Seeded randomized suites that pit every closed form against its
//! brute-force oracle. Reports contain no timing or other run-dependent data,
//! so a fixed seed reproduces them byte for byte.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field_probe::{self, PrimeField, PrimeFieldConfig};
use crate::free_monoid::{self, Word, WordSet};
use crate::kolchin::{self, KolchinDecomposition};
use crate::lattice::{self, LatticePoint, LeaderSet};
use crate::numpoly::{FitError, NumericalPolynomial};
use crate::ordinal::Ordinal;
use crate::rank_engine::{self, ChainSpec};

/// Failures recorded per suite before further ones are only counted.
const MAX_LISTED_FAILURES: usize = 20;

/// Width of the agreement window checked above each threshold.
pub const ORACLE_WINDOW: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lattice,
    Kolchin,
    Monotonicity,
    Ordinal,
    Chain,
    Ncgrowth,
    Probe,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lattice,
        Suite::Kolchin,
        Suite::Monotonicity,
        Suite::Ordinal,
        Suite::Chain,
        Suite::Ncgrowth,
        Suite::Probe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Kolchin => "kolchin",
            Suite::Monotonicity => "monotonicity",
            Suite::Ordinal => "ordinal",
            Suite::Chain => "chain",
            Suite::Ncgrowth => "ncgrowth",
            Suite::Probe => "probe",
        }
    }

    pub fn default_cases(self) -> usize {
        match self {
            Suite::Lattice => 200,
            Suite::Kolchin => 500,
            Suite::Monotonicity => 200,
            Suite::Ordinal => 1000,
            Suite::Chain => 20,
            Suite::Ncgrowth => 20,
            Suite::Probe => 50,
        }
    }

    /// Separates the random streams of the suites sharing one user seed.
    fn stream(self) -> u64 {
        match self {
            Suite::Lattice => 0x6c61_7474,
            Suite::Kolchin => 0x6b6f_6c63,
            Suite::Monotonicity => 0x6d6f_6e6f,
            Suite::Ordinal => 0x6f72_6469,
            Suite::Chain => 0x6368_6169,
            Suite::Ncgrowth => 0x6e63_6772,
            Suite::Probe => 0x7072_6f62,
        }
    }

    fn rng(self, seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed ^ self.stream().rotate_left(17))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub checks: u64,
    pub passed: u64,
    pub failures: Vec<String>,
    /// Suite-specific observations (not pass/fail).
    pub observations: BTreeMap<String, serde_json::Value>,
}

impl SuiteReport {
    fn new(suite: Suite, seed: u64, cases: usize) -> Self {
        Self {
            suite,
            seed,
            cases,
            checks: 0,
            passed: 0,
            failures: Vec::new(),
            observations: BTreeMap::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(describe());
        }
    }

    fn observe(&mut self, key: &str, value: impl Serialize) {
        self.observations
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn ok(&self) -> bool {
        self.passed == self.checks
    }
}

pub fn run_suite(suite: Suite, seed: u64, cases: Option<usize>) -> SuiteReport {
    let cases = cases.unwrap_or_else(|| suite.default_cases());
    let mut report = SuiteReport::new(suite, seed, cases);
    let mut rng = suite.rng(seed);
    match suite {
        Suite::Lattice => lattice_suite(&mut report, &mut rng),
        Suite::Kolchin => kolchin_suite(&mut report, &mut rng),
        Suite::Monotonicity => monotonicity_suite(&mut report, &mut rng),
        Suite::Ordinal => ordinal_suite(&mut report, &mut rng),
        Suite::Chain => chain_suite(&mut report, &mut rng),
        Suite::Ncgrowth => ncgrowth_suite(&mut report, &mut rng),
        Suite::Probe => probe_suite(&mut report, &mut rng),
    }
    report
}

/// Random leader set with `m, d ≤ 3`, entries `≤ 6`, at most 5 leaders per coordinate.
pub fn random_leader_set<R: Rng>(rng: &mut R) -> LeaderSet {
    let m = rng.random_range(1..=3);
    let d = rng.random_range(1..=3);
    let coords = (0..d)
        .map(|_| {
            let n = rng.random_range(0..=5);
            (0..n)
                .map(|_| LatticePoint((0..m).map(|_| rng.random_range(0..=6)).collect()))
                .collect()
        })
        .collect();
    LeaderSet::new(m, coords).expect("well-formed")
}

/// Random nonincreasing list of length `≤ 6` with values `≤ 4`.
pub fn random_exponents<R: Rng>(rng: &mut R) -> Vec<u32> {
    let len = rng.random_range(0..=6);
    let mut v: Vec<u32> = (0..len).map(|_| rng.random_range(0..=4)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Random ordinal below `ω^4` with coefficients `≤ 20`.
pub fn random_ordinal<R: Rng>(rng: &mut R) -> Ordinal {
    let terms = (0..4u32)
        .rev()
        .filter_map(|e| {
            let c = if rng.random_bool(0.6) { rng.random_range(1..=20) } else { 0 };
            (c > 0).then_some((e, c))
        })
        .collect();
    Ordinal::from_terms(terms).expect("decreasing by construction")
}

/// Agreement of polynomial and brute-force count on the oracle window.
pub fn lattice_window_agrees(leaders: &LeaderSet, poly: &NumericalPolynomial, threshold: u64) -> bool {
    (threshold..=threshold + ORACLE_WINDOW)
        .all(|t| poly.evaluate(&BigInt::from(t)) == BigInt::from(lattice::count_free_points(leaders, t)))
}

fn lattice_suite(report: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let mut max_threshold = 0;
    for case in 0..report.cases {
        let leaders = random_leader_set(rng).canonicalize();
        let dp = lattice::dimension_polynomial(&leaders);
        max_threshold = max_threshold.max(dp.threshold);
        report.check(lattice_window_agrees(&leaders, &dp.polynomial, dp.threshold), || {
            format!("case {case}: {leaders:?} polynomial {} disagrees with count", dp.polynomial)
        });
        let decomposed = kolchin::decompose(&dp.polynomial);
        report.check(decomposed.is_ok(), || {
            format!("case {case}: {} not in P: {decomposed:?}", dp.polynomial)
        });
        if !dp.polynomial.is_zero() {
            let bounds = kolchin::check_rank_bounds(&dp.polynomial);
            report.check(bounds.as_ref().is_ok_and(|b| b.holds), || {
                format!("case {case}: rank bounds fail for {}: {bounds:?}", dp.polynomial)
            });
        }
        let rk = lattice::delta_rank(&leaders);
        let m = leaders.m();
        let shape_ok = if rk == 0 {
            dp.polynomial.degree().is_none_or(|deg| deg < m)
        } else {
            let lead = dp.polynomial.leading_binomial_coeff().cloned().unwrap_or_default();
            dp.polynomial.degree() == Some(m) && lead == BigInt::from(rk)
        };
        report.check(shape_ok, || {
            format!("case {case}: delta rank {rk} does not match leading term of {}", dp.polynomial)
        });
    }
    report.observe("max_threshold", max_threshold);
    report.observe("oracle_window", ORACLE_WINDOW);
}

fn kolchin_suite(report: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    for case in 0..report.cases {
        let exps = random_exponents(rng);
        let dec = KolchinDecomposition::new(exps.clone()).expect("nonincreasing");
        let poly = dec.reconstruct();
        let back = kolchin::decompose(&poly);
        report.check(back.as_ref().is_ok_and(|d| d.exponents() == exps.as_slice()), || {
            format!("case {case}: {exps:?} -> {poly} -> {back:?}")
        });
        if !poly.is_zero() {
            let bounds = kolchin::check_rank_bounds(&poly);
            report.check(bounds.as_ref().is_ok_and(|b| b.holds), || {
                format!("case {case}: rank bounds fail for {poly}: {bounds:?}")
            });
        }
    }
}

fn monotonicity_suite(report: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let pool: Vec<NumericalPolynomial> = (0..report.cases.max(2))
        .map(|_| lattice::dimension_polynomial(&random_leader_set(rng).canonicalize()).polynomial)
        .collect();
    let mut strict_pairs = 0u64;
    for case in 0..report.cases {
        let p = &pool[rng.random_range(0..pool.len())];
        let q = &pool[rng.random_range(0..pool.len())];
        let (Ok(rp), Ok(rq)) = (kolchin::rank(p), kolchin::rank(q)) else {
            report.check(false, || format!("case {case}: {p} or {q} not in P"));
            continue;
        };
        let ok = match p.compare_dominance(q) {
            Ordering::Less => rp < rq,
            Ordering::Greater => rp > rq,
            Ordering::Equal => rp == rq,
        };
        if p.compare_dominance(q) != Ordering::Equal {
            strict_pairs += 1;
        }
        report.check(ok, || format!("case {case}: {p} vs {q} but ranks {rp} vs {rq}"));
    }
    report.observe("strict_pairs", strict_pairs);
}

/// Ordinal sum by rewriting: spell both operands as sequences of atoms `ω^e`
/// and repeatedly delete an atom followed by a strictly larger one
/// (`ω^e + ω^f = ω^f` for `e < f`).
pub fn ordinal_sum_by_absorption(a: &Ordinal, b: &Ordinal) -> Ordinal {
    let mut atoms: Vec<u32> = Vec::new();
    for o in [a, b] {
        for &(e, c) in o.terms() {
            atoms.extend(std::iter::repeat_n(e, c as usize));
        }
    }
    let mut out: Vec<u32> = Vec::new();
    for e in atoms {
        while out.last().is_some_and(|&top| top < e) {
            out.pop();
        }
        out.push(e);
    }
    let mut terms: Vec<(u32, u64)> = Vec::new();
    for e in out {
        match terms.last_mut() {
            Some((le, c)) if *le == e => *c += 1,
            _ => terms.push((e, 1)),
        }
    }
    Ordinal::from_terms(terms).expect("nonincreasing atoms")
}

/// Colexicographic comparison: the last coordinate is most significant.
pub fn colex_cmp(a: &[u64], b: &[u64]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

fn ordinal_suite(report: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    for case in 0..report.cases {
        let (a, b, c) = (random_ordinal(rng), random_ordinal(rng), random_ordinal(rng));
        let sum = a.ordinal_sum(&b);
        let nat = a.natural_sum(&b);
        report.check(sum <= nat, || format!("case {case}: {a} + {b} = {sum} > {nat}"));
        report.check(sum == ordinal_sum_by_absorption(&a, &b), || {
            format!("case {case}: {a} + {b} = {sum} disagrees with absorption")
        });
        report.check(nat == b.natural_sum(&a), || format!("case {case}: natural sum not commutative on {a}, {b}"));
        report.check(
            a.natural_sum(&b).natural_sum(&c) == a.natural_sum(&b.natural_sum(&c)),
            || format!("case {case}: natural sum not associative on {a}, {b}, {c}"),
        );
        report.check(
            a.ordinal_sum(&b).ordinal_sum(&c) == a.ordinal_sum(&b.ordinal_sum(&c)),
            || format!("case {case}: ordinal sum not associative on {a}, {b}, {c}"),
        );
        let (x, y): (Vec<u64>, Vec<u64>) = (
            (0..3).map(|_| rng.random_range(0..=20)).collect(),
            (0..3).map(|_| rng.random_range(0..=20)).collect(),
        );
        let (ox, oy) = (Ordinal::from_tuple(&x), Ordinal::from_tuple(&y));
        report.check(ox.to_tuple(3).as_deref() == Ok(x.as_slice()), || {
            format!("case {case}: tuple round trip fails on {x:?}")
        });
        report.check(ox.cmp(&oy) == colex_cmp(&x, &y), || {
            format!("case {case}: order of {x:?} vs {y:?} is not colex")
        });
    }
}

/// The fixed ordinals every chain run covers for `m = 2`.
pub fn standard_chain_etas() -> Vec<Ordinal> {
    ["1", "5", "w", "w+3", "w*2", "w*4+7"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .collect()
}

fn chain_suite(report: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let mut runs: Vec<(usize, Ordinal)> = standard_chain_etas().into_iter().map(|e| (2, e)).collect();
    for _ in 0..report.cases {
        let m = rng.random_range(1..=3usize);
        let r: Vec<u64> = (0..m).map(|_| rng.random_range(0..=4)).collect();
        runs.push((m, Ordinal::from_tuple(&r)));
    }
    for (m, eta) in runs {
        let spec = ChainSpec::new(m, eta.clone()).expect("below w^m by construction");
        // every ordinal below eta with the same or smaller coordinates
        let r = spec.tuple().to_vec();
        let mut samples = Vec::new();
        for i in 0..m {
            let mut lower = r.clone();
            if lower[i] > 0 {
                lower[i] -= 1;
                samples.push(Ordinal::from_tuple(&lower));
            }
        }
        samples.push(Ordinal::zero());
        match rank_engine::verify_chain(&spec, &samples) {
            Ok(rep) => {
                report.check(rep.all_descents_strict, || format!("m={m} eta={eta}: descent not strict"));
                report.check(rep.all_oracles_agree, || format!("m={m} eta={eta}: oracle disagreement"));
                report.check(rep.all_ranks_at_least_zeta, || format!("m={m} eta={eta}: rank below zeta"));
                report.check(rep.generic_rank_is_omega_pow_m, || format!("m={m}: generic rank {}", rep.generic_rank));
            }
            Err(e) => report.check(false, || format!("m={m} eta={eta}: {e}")),
        }
    }
}

fn random_word_set<R: Rng>(rng: &mut R, m: usize) -> WordSet {
    let n = rng.random_range(0..=3);
    let words = (0..n).map(|_| {
        let len = rng.random_range(1..=3);
        Word::new((0..len).map(|_| rng.random_range(1..=m as u8)).collect())
    });
    WordSet::new(m, words).expect("letters in range")
}

fn ncgrowth_suite(report: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let empty2 = WordSet::new(2, []).expect("empty");
    for t in 0..=12usize {
        let count = free_monoid::free_word_count(&empty2, t);
        let expected = (BigInt::from(1) << (t + 1)) - 1;
        report.check(count == expected, || format!("m=2 t={t}: {count} != 2^(t+1)-1"));
    }
    let counts: Vec<BigInt> = (0..=12).map(|t| free_monoid::free_word_count(&empty2, t)).collect();
    for d in 0..=6 {
        let fit = NumericalPolynomial::fit_from_values(&counts, 0, d);
        report.check(matches!(fit, Err(FitError::NoFit { .. })), || {
            format!("m=2 free growth fitted at degree {d}: {fit:?}")
        });
    }

    let empty1 = WordSet::new(1, []).expect("empty");
    let counts1: Vec<BigInt> = (0..=12).map(|t| free_monoid::free_word_count(&empty1, t)).collect();
    let fit = NumericalPolynomial::fit_from_values(&counts1, 0, 6);
    report.check(fit == Ok(NumericalPolynomial::from_i64s(&[1, 1])), || format!("m=1 fit {fit:?}"));
    for k in 0..=5u32 {
        let word_leaders = WordSet::new(1, [Word::new(vec![1; k as usize])]).expect("one letter");
        let lattice_leaders = LeaderSet::new(1, vec![vec![LatticePoint(vec![k])]]).expect("m = 1");
        for t in 0..=12u64 {
            let words = free_monoid::free_word_count(&word_leaders, t as usize);
            let points = lattice::count_free_points(&lattice_leaders, t);
            report.check(words == BigInt::from(points), || {
                format!("m=1 leader delta^{k} t={t}: words {words} vs lattice {points}")
            });
        }
    }

    for case in 0..report.cases {
        let m = rng.random_range(2..=3usize);
        let leaders = random_word_set(rng, m);
        for t in 0..=6 {
            let fast = free_monoid::free_word_count(&leaders, t);
            let naive = free_monoid::free_word_count_naive(&leaders, t);
            report.check(fast == naive, || format!("case {case}: {leaders:?} t={t}: {fast} vs {naive}"));
        }
    }
}

fn probe_suite(report: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    const P: u64 = 101;
    let field = PrimeField::new(P).expect("prime");
    let cfg = PrimeFieldConfig::new(P, field.quadratic_residues(), BTreeMap::new()).expect("valid");
    let xs: Vec<u64> = cfg.x().iter().copied().collect();

    let mut emitted = 0u64;
    let mut bad = 0u64;
    for alpha in 0..P {
        let inv = field_probe::inv_set(&cfg, alpha).expect("reduced");
        emitted += inv.len() as u64;
        bad += inv.iter().filter(|q| !field_probe::verify_inv_quadruple(&cfg, alpha, q)).count() as u64;
    }
    report.check(bad == 0, || format!("{bad} of {emitted} quadruples fail re-verification"));

    for case in 0..report.cases {
        let alpha = rng.random_range(0..P);
        let a = xs[rng.random_range(0..xs.len())];
        let b = xs[rng.random_range(0..xs.len())];
        let fiber = field_probe::inv_fiber(&cfg, alpha, a, b).expect("a, b in X");
        let from_inv: Vec<(u64, u64)> = field_probe::inv_set(&cfg, alpha)
            .expect("reduced")
            .into_iter()
            .filter(|q| q[0] == a && q[1] == b)
            .map(|q| (q[2], q[3]))
            .collect();
        report.check(fiber == from_inv, || format!("case {case}: fiber ({alpha},{a},{b}) differs from Inv slice"));
        report.check(fiber == field_probe::inv_fiber_as_line(&cfg, alpha, a, b), || {
            format!("case {case}: fiber ({alpha},{a},{b}) differs from line form")
        });
        report.check(
            fiber.iter().all(|&(c, d)| field_probe::verify_inv_quadruple(&cfg, alpha, &[a, b, c, d])),
            || format!("case {case}: fiber pair fails re-verification"),
        );
    }

    let nonempty = field_probe::nonemptiness_report(&cfg);
    report.observe("p", P);
    report.observe("x", "quadratic residues");
    report.observe("emitted_quadruples", emitted);
    report.observe("inv_nonempty_for_all_nonzero_alpha", nonempty.all_nonempty);
    report.observe("empty_alphas", &nonempty.empty_alphas);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absorption_matches_examples() {
        let o = |s: &str| s.parse::<Ordinal>().unwrap();
        assert_eq!(ordinal_sum_by_absorption(&o("w*2+3"), &o("w")), o("w*3"));
        assert_eq!(ordinal_sum_by_absorption(&o("1"), &o("w")), o("w"));
        assert_eq!(ordinal_sum_by_absorption(&o("w^2+w"), &o("w^2")), o("w^2*2"));
    }

    #[test]
    fn suites_are_deterministic_and_pass() {
        for suite in [Suite::Lattice, Suite::Kolchin, Suite::Ordinal, Suite::Monotonicity, Suite::Chain] {
            let a = run_suite(suite, 7, Some(30));
            let b = run_suite(suite, 7, Some(30));
            assert_eq!(a, b);
            assert!(a.ok(), "{a:?}");
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
