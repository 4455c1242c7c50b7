mod common;

use std::collections::HashSet;

use common::{nfa, nfa_with};
use hiersep::algebra::morphism_to_nfa;
use hiersep::corpus::ab;
use hiersep::reduction::{build_l_monoid, build_l_nfa, cyclic_tagging, l_monoid_bound, relabel_nfa};
use hiersep::{st_separates, Input, Level, Limits, Nfa, SeparateOptions, Strategy, TagLetters};
use proptest::prelude::*;

/// `n` with states renamed by `perm`, which reorders its transitions and
/// hence the tags they receive.
fn renamed(n: &Nfa, perm: &[u32]) -> Nfa {
    let p = |q: u32| perm[q as usize];
    Nfa::new(
        n.alphabet().clone(),
        n.state_count(),
        n.initial().iter().map(p),
        n.finals().iter().map(p),
        n.transitions().iter().map(|&(q, a, r)| (p(q), a as usize, p(r))),
    )
    .unwrap()
}

fn tag_verdict(level: &Level, x: &Nfa, y: &Nfa) -> bool {
    let (x, y) = (Input::Nfa(x.clone()), Input::Nfa(y.clone()));
    st_separates(level, &x, &y, Strategy::Tag, &SeparateOptions::default()).unwrap().separable
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn l_constructions_agree_within_the_bound(n in nfa(3)) {
        let lim = Limits::default();
        let p = cyclic_tagging(n.transition_count().max(1));
        let tags = TagLetters::for_alphabet(&ab());
        let m = build_l_monoid(&n, &p, &tags, &lim).unwrap();
        prop_assert!(m.morphism.monoid().size() <= l_monoid_bound(&n, &p));
        let l = build_l_nfa(&n, &p, &tags).unwrap();
        prop_assert!(l.equivalent(&morphism_to_nfa(&m), &lim).unwrap());
    }

    #[test]
    fn relabeled_transitions_are_distinct(n in nfa(3)) {
        let r = relabel_nfa(&n, &cyclic_tagging(n.transition_count().max(1))).unwrap();
        let labels: HashSet<u32> = r.transitions().iter().map(|t| t.1).collect();
        prop_assert_eq!(labels.len(), r.transition_count());
    }

    #[test]
    fn verdicts_ignore_the_transition_order(
        x in nfa_with(3, 4),
        y in nfa_with(2, 4),
        which in 0usize..6,
    ) {
        const PERMS: [[u32; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let perm: Vec<u32> = PERMS[which].into_iter().filter(|&q| (q as usize) < x.state_count()).collect();
        let x2 = renamed(&x, &perm);
        for level in [Level::StHalf, Level::StOne] {
            prop_assert_eq!(tag_verdict(&level, &x, &y), tag_verdict(&level, &x2, &y), "at {}", level);
        }
    }
}
