mod common;

use std::sync::Arc;

use common::{nfa, rng, seed, words};
use hiersep::algebra::morphism_to_nfa;
use hiersep::corpus;
use hiersep::{transition_monoid, Alphabet, Basis, Limits, Monoid};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn transition_monoid_recognizes_the_language(n in nfa(3)) {
        let lim = Limits::default();
        let l = transition_monoid(&n, &lim).unwrap();
        prop_assert!(morphism_to_nfa(&l).equivalent(&n, &lim).unwrap());
    }

    #[test]
    fn classes_follow_the_canonical_morphism(s in seed(), b in 0usize..5) {
        let basis = &corpus::corpus_bases()[b];
        let cm = corpus::random_compatible(&mut rng(s), basis, 12);
        for w in words(5) {
            prop_assert_eq!(cm.class(cm.morphism().eval(&w)), basis.class_of_word(&w));
        }
    }

    #[test]
    fn omega_powers_are_idempotent_powers(s in seed()) {
        let Some((m, _)) = corpus::random_transformation_monoid(&mut rng(s), 3, 2, 64) else {
            return Ok(());
        };
        for x in m.elements() {
            let e = m.omega_power(x);
            prop_assert!(m.is_idempotent(e));
            prop_assert!((1..=m.size()).any(|k| m.power(x, k) == e));
        }
    }
}

#[test]
fn semilattice_depth_is_alphabet_size_plus_one() {
    for k in 1..=3 {
        assert_eq!(Monoid::semilattice(k).j_depth(), k + 1);
        let a = Alphabet::new(["a", "b", "c"].into_iter().take(k)).unwrap();
        assert_eq!(Basis::at(&a).unwrap().monoid().j_depth(), k + 1);
    }
}

#[test]
fn small_monoids_have_idempotent_omega_powers() {
    for m in corpus::small_monoids(3) {
        let m = Arc::new(m);
        for x in m.elements() {
            assert!(m.is_idempotent(m.omega_power(x)));
        }
    }
}
