use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use kolrank_core::field_probe::{self, PrimeFieldConfig};
use kolrank_core::free_monoid::{self, Word, WordSet};
use kolrank_core::lattice::{self, LatticePoint, LeaderSet};
use kolrank_core::rank_engine::{self, ChainSpec};
use kolrank_core::verify::{colex_cmp, ordinal_sum_by_absorption};
use kolrank_core::{kolchin, KolchinDecomposition, NumericalPolynomial, Ordinal};

fn poly_strategy() -> impl Strategy<Value = NumericalPolynomial> {
    prop::collection::vec(-50i64..50, 0..6).prop_map(|c| NumericalPolynomial::from_i64s(&c))
}

fn ordinal_strategy() -> impl Strategy<Value = Ordinal> {
    prop::collection::vec(0u64..6, 4).prop_map(|r| Ordinal::from_tuple(&r))
}

fn exponents_strategy() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=4, 0..=6).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

fn leader_set_strategy() -> impl Strategy<Value = LeaderSet> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(m, d)| {
        prop::collection::vec(
            prop::collection::vec(prop::collection::vec(0u32..=6, m).prop_map(LatticePoint), 0..=5),
            d,
        )
        .prop_map(move |coords| LeaderSet::new(m, coords).unwrap())
    })
}

fn word_strategy(m: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=m, 0..=max_len).prop_map(Word::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fit_recovers_polynomial(p in poly_strategy()) {
        let deg = p.degree().unwrap_or(0);
        let values: Vec<BigInt> = (0..=deg as i64 + 2).map(|t| p.evaluate_i64(t)).collect();
        prop_assert_eq!(NumericalPolynomial::fit_from_values(&values, 0, deg).unwrap(), p);
    }

    #[test]
    fn fit_with_offset(p in poly_strategy(), offset in -20i64..20) {
        let deg = p.degree().unwrap_or(0);
        let values: Vec<BigInt> = (0..deg as i64 + 3).map(|j| p.evaluate_i64(offset + j)).collect();
        prop_assert_eq!(NumericalPolynomial::fit_from_values(&values, offset, deg + 1).unwrap(), p);
    }

    #[test]
    fn evaluation_is_integral_and_matches_monomial_form(p in poly_strategy(), t in -50i64..=50) {
        // The rational monomial form must give the same integer.
        let mono = p.monomial_coeffs();
        let tq = num_rational::BigRational::from_integer(BigInt::from(t));
        let mut acc = num_rational::BigRational::from_integer(BigInt::from(0));
        let mut pow = num_rational::BigRational::from_integer(BigInt::from(1));
        for c in &mono {
            acc += c * &pow;
            pow *= &tq;
        }
        prop_assert!(acc.is_integer());
        prop_assert_eq!(acc.to_integer(), p.evaluate_i64(t));
    }

    #[test]
    fn add_sub_are_pointwise(p in poly_strategy(), q in poly_strategy(), t in -30i64..30) {
        prop_assert_eq!((&p + &q).evaluate_i64(t), p.evaluate_i64(t) + q.evaluate_i64(t));
        prop_assert_eq!((&p - &q).evaluate_i64(t), p.evaluate_i64(t) - q.evaluate_i64(t));
        prop_assert_eq!(&(&p + &q) - &q, p);
    }

    #[test]
    fn dominance_is_a_total_order(p in poly_strategy(), q in poly_strategy(), r in poly_strategy()) {
        prop_assert_eq!(p.compare_dominance(&q), q.compare_dominance(&p).reverse());
        prop_assert_eq!(p.compare_dominance(&q) == Ordering::Equal, p == q);
        if p.compare_dominance(&q) != Ordering::Greater && q.compare_dominance(&r) != Ordering::Greater {
            prop_assert_ne!(p.compare_dominance(&r), Ordering::Greater);
        }
        // eventual order is visible far out
        let far = BigInt::from(10_000);
        prop_assert_eq!(p.compare_dominance(&q), p.evaluate(&far).cmp(&q.evaluate(&far)));
    }

    #[test]
    fn ordinal_sum_below_natural_sum(a in ordinal_strategy(), b in ordinal_strategy(), c in ordinal_strategy()) {
        prop_assert!(a.ordinal_sum(&b) <= a.natural_sum(&b));
        prop_assert_eq!(a.ordinal_sum(&b), ordinal_sum_by_absorption(&a, &b));
        prop_assert_eq!(a.natural_sum(&b), b.natural_sum(&a));
        prop_assert_eq!(a.natural_sum(&b).natural_sum(&c), a.natural_sum(&b.natural_sum(&c)));
        prop_assert_eq!(a.ordinal_sum(&b).ordinal_sum(&c), a.ordinal_sum(&b.ordinal_sum(&c)));
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
    }

    #[test]
    fn tuple_bijection_is_colex(m in 1usize..=4, x in prop::collection::vec(0u64..=20, 4), y in prop::collection::vec(0u64..=20, 4)) {
        let (x, y) = (&x[..m], &y[..m]);
        let (ox, oy) = (Ordinal::from_tuple(x), Ordinal::from_tuple(y));
        prop_assert_eq!(ox.to_tuple(m).unwrap(), x.to_vec());
        prop_assert_eq!(ox.cmp(&oy), colex_cmp(x, y));
    }

    #[test]
    fn ordinal_json_and_text_round_trip(a in ordinal_strategy()) {
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Ordinal>(&json).unwrap(), a.clone());
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
    }

    #[test]
    fn decomposition_is_unique(exps in exponents_strategy()) {
        let dec = KolchinDecomposition::new(exps.clone()).unwrap();
        let p = dec.reconstruct();
        let back = kolchin::decompose(&p).unwrap();
        prop_assert_eq!(back.exponents(), exps.as_slice());
        prop_assert_eq!(back.reconstruct(), p.clone());
        if !p.is_zero() {
            prop_assert!(kolchin::check_rank_bounds(&p).unwrap().holds);
        }
    }

    #[test]
    fn rank_is_strictly_monotone(a in exponents_strategy(), b in exponents_strategy()) {
        let p = KolchinDecomposition::new(a).unwrap().reconstruct();
        let q = KolchinDecomposition::new(b).unwrap().reconstruct();
        let (rp, rq) = (kolchin::rank(&p).unwrap(), kolchin::rank(&q).unwrap());
        prop_assert_eq!(p.compare_dominance(&q), rp.cmp(&rq));
    }

    #[test]
    fn lattice_matches_brute_force(l in leader_set_strategy()) {
        let l = l.canonicalize();
        let dp = lattice::dimension_polynomial(&l);
        for t in dp.threshold..=dp.threshold + 10 {
            prop_assert_eq!(dp.polynomial.evaluate(&BigInt::from(t)), BigInt::from(lattice::count_free_points(&l, t)));
        }
        let dec = kolchin::decompose(&dp.polynomial);
        prop_assert!(dec.is_ok(), "{} not in P", dp.polynomial);
        if !dp.polynomial.is_zero() {
            prop_assert!(kolchin::check_rank_bounds(&dp.polynomial).unwrap().holds);
        }
    }

    #[test]
    fn delta_rank_is_leading_term(l in leader_set_strategy()) {
        let l = l.canonicalize();
        let p = lattice::dimension_polynomial(&l).polynomial;
        let rk = lattice::delta_rank(&l);
        if rk == 0 {
            prop_assert!(p.degree().is_none_or(|d| d < l.m()));
        } else {
            prop_assert_eq!(p.degree(), Some(l.m()));
            prop_assert_eq!(p.leading_binomial_coeff().unwrap(), &BigInt::from(rk));
        }
    }

    #[test]
    fn adding_a_leader_never_increases(l in leader_set_strategy(), pt in prop::collection::vec(0u32..=6, 3), coord in 0usize..3) {
        let coord = coord % l.d();
        let point = LatticePoint(pt[..l.m()].to_vec());
        let before = lattice::dimension_polynomial(&l.canonicalize()).polynomial;
        let after = lattice::dimension_polynomial(&l.with_leader(coord, point).unwrap().canonicalize()).polynomial;
        prop_assert_ne!(after.compare_dominance(&before), Ordering::Greater);
    }

    #[test]
    fn minimize_is_idempotent_and_preserves_filter(l in leader_set_strategy(), t in 0u64..8) {
        let once = l.canonicalize();
        prop_assert_eq!(once.canonicalize(), once.clone());
        prop_assert!(once.is_canonical());
        prop_assert_eq!(lattice::count_free_points(&l, t), lattice::count_free_points(&once, t));
    }

    #[test]
    fn forks_is_antisymmetric(p in poly_strategy(), q in poly_strategy()) {
        let pq = rank_engine::forks(&p, &q).unwrap_or(false);
        let qp = rank_engine::forks(&q, &p).unwrap_or(false);
        prop_assert!(!(pq && qp));
    }

    #[test]
    fn chain_polynomials_ascend(m in 1usize..=3, r in prop::collection::vec(0u64..=4, 3), s in prop::collection::vec(0u64..=4, 3)) {
        let (a, b) = (Ordinal::from_tuple(&r[..m]), Ordinal::from_tuple(&s[..m]));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let lo_spec = ChainSpec::new(m, lo.clone()).unwrap();
        let hi_spec = ChainSpec::new(m, hi.clone()).unwrap();
        let plo = rank_engine::chain_type_polynomial(&lo_spec);
        let phi = rank_engine::chain_type_polynomial(&hi_spec);
        prop_assert_eq!(plo.polynomial.compare_dominance(&phi.polynomial), lo.cmp(&hi));
        for t in phi.threshold..=phi.threshold + 10 {
            prop_assert_eq!(phi.polynomial.evaluate(&BigInt::from(t)), BigInt::from(rank_engine::count_chain_points(&hi_spec, t)));
        }
        prop_assert!(kolchin::rank(&phi.polynomial).unwrap() >= hi);
    }

    #[test]
    fn suffix_order_is_partial(a in word_strategy(2, 4), b in word_strategy(2, 4), c in word_strategy(2, 4)) {
        prop_assert!(a.suffix_leq(&a));
        if a.suffix_leq(&b) && b.suffix_leq(&a) {
            prop_assert_eq!(&a, &b);
        }
        if a.suffix_leq(&b) && b.suffix_leq(&c) {
            prop_assert!(a.suffix_leq(&c));
        }
        // lenlex is total and refines the suffix order
        prop_assert!(a.lenlex_leq(&b) || b.lenlex_leq(&a));
        if a.suffix_leq(&b) {
            prop_assert!(a.lenlex_leq(&b));
        }
    }

    #[test]
    fn lenlex_is_left_invariant(alpha in word_strategy(3, 3), a in word_strategy(3, 4), b in word_strategy(3, 4)) {
        if a.lenlex_leq(&b) {
            prop_assert!(alpha.compose(&a).lenlex_leq(&alpha.compose(&b)));
        }
        prop_assert!(a.suffix_leq(&alpha.compose(&a)));
    }

    #[test]
    fn infinite_free_sets_grow_superlinearly(words in prop::collection::vec(word_strategy(2, 3), 0..4)) {
        // Freeness of a word of length >= 3 depends only on its last three
        // letters, so past that point the free count is either stuck or doubles.
        let leaders = WordSet::new(2, words.into_iter().filter(|w| w.order() > 0)).unwrap();
        let counts: Vec<BigInt> = (0..=12).map(|t| free_monoid::free_word_count(&leaders, t)).collect();
        let diffs: Vec<BigInt> = counts.windows(2).map(|w| &w[1] - &w[0]).collect();
        if diffs.last().unwrap() > &BigInt::from(0) {
            prop_assert!(diffs.windows(2).skip(3).all(|w| w[1] > w[0]), "{:?}", diffs);
        }
    }

    #[test]
    fn fiber_is_slice_of_inv(alpha in 0u64..13, a_idx in 0usize..6, b_idx in 0usize..6) {
        let xs = [1u64, 3, 4, 9, 10, 12];
        let cfg = PrimeFieldConfig::new(13, xs, BTreeMap::new()).unwrap();
        let (a, b) = (xs[a_idx], xs[b_idx]);
        let fiber = field_probe::inv_fiber(&cfg, alpha, a, b).unwrap();
        let slice: Vec<(u64, u64)> = field_probe::inv_set(&cfg, alpha).unwrap().into_iter()
            .filter(|q| q[0] == a && q[1] == b).map(|q| (q[2], q[3])).collect();
        prop_assert_eq!(&fiber, &slice);
        prop_assert_eq!(fiber, field_probe::inv_fiber_as_line(&cfg, alpha, a, b));
    }
}

#[test]
fn free_growth_with_one_letter_matches_lattice() {
    for k in 0..6u32 {
        let words = WordSet::new(1, [Word::new(vec![1; k as usize])]).unwrap();
        let points = LeaderSet::new(1, vec![vec![LatticePoint(vec![k])]]).unwrap();
        for t in 0..15 {
            assert_eq!(
                free_monoid::free_word_count(&words, t),
                BigInt::from(lattice::count_free_points(&points, t as u64))
            );
        }
    }
}

#[test]
fn free_growth_in_two_letters_has_increasing_differences() {
    // only εδ-suffixed words are excluded: infinitely many survive
    let leaders = WordSet::new(2, ["2,1".parse().unwrap()]).unwrap();
    let counts: Vec<BigInt> = (0..=12).map(|t| free_monoid::free_word_count(&leaders, t)).collect();
    let diffs: Vec<BigInt> = counts.windows(2).map(|w| &w[1] - &w[0]).collect();
    assert!(diffs.windows(2).skip(2).all(|w| w[1] > w[0]), "{diffs:?}");
}
