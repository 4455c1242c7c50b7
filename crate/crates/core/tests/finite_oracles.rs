//! Verdicts on finite languages against brute-force characterizations.
//!
//! For finite `L1, L2`: the least level-1/2 language containing `L1` is its
//! upward closure for the subword order, and from level 1 on every finite
//! language is available, so separability is disjointness.

use std::collections::BTreeSet;

use hiersep::corpus::ab;
use hiersep::automata::parse_regex;
use hiersep::{st_separates, Input, Level, Nfa, SeparateOptions};
use proptest::prelude::*;

fn is_subword(u: &[usize], v: &[usize]) -> bool {
    let mut it = v.iter();
    u.iter().all(|x| it.any(|y| y == x))
}

fn subwords_up_to(w: &[usize], k: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << w.len() {
        if mask.count_ones() as usize <= k {
            out.insert((0..w.len()).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).collect());
        }
    }
    out
}

fn finite(words: &BTreeSet<Vec<usize>>) -> Nfa {
    let a = ab();
    words.iter().fold(Nfa::empty_language(a.clone()), |acc, w| {
        acc.union(&Nfa::word(a.clone(), w)).unwrap()
    })
}

fn verdict(level: &Level, x: &Nfa, y: &Nfa) -> bool {
    let (x, y) = (Input::Nfa(x.clone()), Input::Nfa(y.clone()));
    st_separates(level, &x, &y, hiersep::Strategy::Tm, &SeparateOptions::default())
        .unwrap()
        .separable
}

fn word_set() -> impl Strategy<Value = BTreeSet<Vec<usize>>> {
    proptest::collection::btree_set(proptest::collection::vec(0usize..2, 0..=4), 0..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn finite_languages_match_brute_force(l1 in word_set(), l2 in word_set()) {
        let (x, y) = (finite(&l1), finite(&l2));
        let half = !l1.iter().any(|u| l2.iter().any(|v| is_subword(u, v)));
        let disjoint = l1.is_disjoint(&l2);
        prop_assert_eq!(verdict(&Level::StHalf, &x, &y), half);
        for level in [Level::StOne, Level::StThreeHalf, Level::StTwo] {
            prop_assert_eq!(verdict(&level, &x, &y), disjoint, "at {}", level);
        }
    }
}

fn alternating(first: usize, k: usize) -> Vec<usize> {
    (0..2 * k).map(|i| (first + i) % 2).collect()
}

#[test]
fn prefix_languages_below_level_three_half() {
    let a = ab();
    let x = parse_regex("a (a+b)*", &a).unwrap();
    let y = parse_regex("b (a+b)*", &a).unwrap();
    // "a" sits below "ba" in the subword order
    assert!(x.accepts(&[0]) && y.accepts(&[1, 0]) && is_subword(&[0], &[1, 0]));
    // (ab)^k and (ba)^k agree on all subwords of length at most k
    for k in 1..=6 {
        let (u, v) = (alternating(0, k), alternating(1, k));
        assert!(x.accepts(&u) && y.accepts(&v));
        assert_eq!(subwords_up_to(&u, k), subwords_up_to(&v, k));
    }
    let got: Vec<bool> = Level::st_levels().iter().map(|l| verdict(l, &x, &y)).collect();
    assert_eq!(got, [false, false, true, true]);
}
