//! Words over `m` noncommuting derivations.
//!
//! A word `γ = δ_{i_1}…δ_{i_r}` is stored as its letter indices
//! `[i_1, …, i_r]` (1-based) and acts as an operator, rightmost letter
//! first. Under this convention `γ1 ≼ γ2` iff `γ2 = αγ1`, i.e. `γ1` is a
//! suffix of `γ2`: applying more derivations to a dependent jet keeps it
//! dependent.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numpoly::{FitError, NumericalPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {letter} is outside the alphabet 1..={m}")]
    LetterOutOfRange { letter: u8, m: usize },
    #[error("cannot parse word {0:?}")]
    Parse(String),
    #[error("set is not downward closed: {missing} is a suffix of a member but absent")]
    NotDownwardClosed { missing: Word },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(letters: Vec<u8>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// `|γ|`.
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn check_alphabet(&self, m: usize) -> Result<(), WordError> {
        match self.0.iter().find(|&&l| l == 0 || l as usize > m) {
            Some(&letter) => Err(WordError::LetterOutOfRange { letter, m }),
            None => Ok(()),
        }
    }

    /// `αγ`.
    pub fn compose(&self, inner: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&inner.0);
        Word(letters)
    }

    /// `self ≼ other`: `other = α·self` for some `α`.
    pub fn suffix_leq(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    /// Length first, then lexicographic on letter indices.
    pub fn lenlex_cmp(&self, other: &Word) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }

    pub fn lenlex_leq(&self, other: &Word) -> bool {
        self.lenlex_cmp(other) != Ordering::Greater
    }

    /// All suffixes, from the empty word up to `self`.
    pub fn suffixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.0.len()).rev().map(|i| Word(self.0[i..].to_vec()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The length-lexicographic order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lenlex_cmp(other)
    }
}

/// Comma-separated indices, `"2,1,1"` for `εδδ` with `δ = 1`, `ε = 2`; the
/// empty word prints as the empty string (and `e` also parses as it).
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word::empty());
        }
        s.split(',')
            .map(|p| p.trim().parse::<u8>().map_err(|_| WordError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// A finite set of words in length-lex order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WordSet {
    m: usize,
    words: BTreeSet<Word>,
}

impl WordSet {
    pub fn new(m: usize, words: impl IntoIterator<Item = Word>) -> Result<Self, WordError> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        for w in &words {
            w.check_alphabet(m)?;
        }
        Ok(Self { m, words })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    /// No two distinct members are ≼-comparable.
    pub fn pairwise_incomparable(&self) -> bool {
        self.words.iter().all(|a| {
            self.words
                .iter()
                .all(|b| a == b || !(a.suffix_leq(b) || b.suffix_leq(a)))
        })
    }

    /// Closure under taking suffixes.
    pub fn downward_close(&self) -> WordSet {
        let words = self.words.iter().flat_map(|w| w.suffixes()).collect();
        WordSet { m: self.m, words }
    }

    pub fn check_downward_closed(&self) -> Result<(), WordError> {
        for w in &self.words {
            if let Some(missing) = w.suffixes().find(|s| !self.words.contains(s)) {
                return Err(WordError::NotDownwardClosed { missing });
            }
        }
        Ok(())
    }

    /// `Λ^max`, the ≼-maximal members of a downward-closed `Λ`.
    pub fn max_elements(&self) -> Result<WordSet, WordError> {
        self.check_downward_closed()?;
        let words = self
            .words
            .iter()
            .filter(|w| !self.words.iter().any(|v| v != *w && w.suffix_leq(v)))
            .cloned()
            .collect();
        Ok(WordSet { m: self.m, words })
    }

    /// `Λ^↓ = Λ ∖ Λ^max`.
    pub fn strip_max(&self) -> Result<WordSet, WordError> {
        let max = self.max_elements()?;
        let words = self.words.difference(&max.words).cloned().collect();
        Ok(WordSet { m: self.m, words })
    }

    /// The ≼-minimal members; they generate the same upward-closed set.
    pub fn minimize_suffix(&self) -> WordSet {
        let words = self
            .words
            .iter()
            .filter(|w| !self.words.iter().any(|v| v != *w && v.suffix_leq(w)))
            .cloned()
            .collect();
        WordSet { m: self.m, words }
    }

    /// Some member is a suffix of `w`.
    pub fn blocks(&self, w: &Word) -> bool {
        self.words.iter().any(|e| e.suffix_leq(w))
    }
}

/// `#{γ : |γ| ≤ t, no member of E is a suffix of γ}`, by enumerating words.
///
/// Words are grown by prepending letters, and a blocked word is never
/// extended since all its left extensions are blocked too.
pub fn free_word_count(leaders: &WordSet, t: usize) -> BigInt {
    let m = leaders.m() as u8;
    let mut total = BigInt::from(0);
    let mut layer: Vec<Word> = vec![Word::empty()];
    for len in 0..=t {
        layer.retain(|w| !leaders.blocks(w));
        total += layer.len();
        if len == t {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|w| (1..=m).map(move |l| Word::new(vec![l]).compose(w)))
            .collect();
    }
    total
}

/// Same count as [`free_word_count`] by plain enumeration of all `m^r` words of
/// each length; used as a cross-check.
pub fn free_word_count_naive(leaders: &WordSet, t: usize) -> BigInt {
    let m = leaders.m() as u64;
    let mut total = BigInt::from(0);
    for len in 0..=t as u32 {
        for code in 0..m.pow(len) {
            let mut rest = code;
            let letters = (0..len)
                .map(|_| {
                    let l = (rest % m) as u8 + 1;
                    rest /= m;
                    l
                })
                .collect();
            if !leaders.blocks(&Word::new(letters)) {
                total += 1;
            }
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub m: usize,
    pub leaders: Vec<String>,
    pub t_max: usize,
    pub max_degree: usize,
    #[serde(with = "crate::bigjson::vec")]
    pub counts: Vec<BigInt>,
    /// `count(t+1)/count(t)` as decimal strings (absent when `count(t) = 0`).
    pub ratios: Vec<Option<String>>,
    /// The fitted polynomial, or `None` when no fit of degree `≤ max_degree` exists.
    pub fit: Option<NumericalPolynomial>,
}

impl WitnessReport {
    pub fn no_fit(&self) -> bool {
        self.fit.is_none()
    }
}

/// Growth of free words for `t = 0..=t_max` and whether it is a numerical
/// polynomial of degree `≤ max_degree`.
pub fn non_polynomial_witness(leaders: &WordSet, t_max: usize, max_degree: usize) -> Result<WitnessReport, FitError> {
    let counts: Vec<BigInt> = (0..=t_max).map(|t| free_word_count(leaders, t)).collect();
    let ratios = counts
        .windows(2)
        .map(|w| ratio_string(&w[1], &w[0]))
        .collect();
    let fit = match NumericalPolynomial::fit_from_values(&counts, 0, max_degree) {
        Ok(p) => Some(p),
        Err(FitError::NoFit { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(WitnessReport {
        m: leaders.m(),
        leaders: leaders.words().iter().map(Word::to_string).collect(),
        t_max,
        max_degree,
        counts,
        ratios,
        fit,
    })
}

/// `num/den` to six decimal places, exact integer arithmetic.
fn ratio_string(num: &BigInt, den: &BigInt) -> Option<String> {
    if *den == BigInt::from(0) {
        return None;
    }
    let scaled: BigInt = num * BigInt::from(1_000_000) / den;
    let whole = &scaled / 1_000_000;
    let frac: BigInt = &scaled % 1_000_000;
    Some(format!("{whole}.{frac:0>6}"))
}
