mod common;

use common::{nfa, rng, seed};
use hiersep::automata::parse_regex;
use hiersep::corpus::{self, ab};
use hiersep::{st_separates, verify_certificate, Input, Level, Limits, Nfa, SeparateOptions, Strategy, Verdict};
use proptest::prelude::*;

fn run(level: &Level, x: &Nfa, y: &Nfa) -> Verdict {
    let (x, y) = (Input::Nfa(x.clone()), Input::Nfa(y.clone()));
    st_separates(level, &x, &y, Strategy::Tm, &SeparateOptions::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn boolean_levels_are_symmetric(x in nfa(3), y in nfa(3)) {
        for level in [Level::StOne, Level::StTwo] {
            prop_assert_eq!(run(&level, &x, &y).separable, run(&level, &y, &x).separable, "at {}", level);
        }
    }

    #[test]
    fn red_chains_strictly_decrease(x in nfa(3), y in nfa(3)) {
        for level in [Level::StOne, Level::StTwo] {
            let v = run(&level, &x, &y);
            let chain = &v.stats.red_chain;
            prop_assert!(!chain.is_empty());
            prop_assert!(chain.windows(2).all(|w| w[1] < w[0]), "{:?}", chain);
            // at most |S_0| strict steps, and |S_0| = |image|^2
            prop_assert!(chain.len() <= chain[0] + 1);
        }
    }

    #[test]
    fn certified_languages_are_separable(s in seed()) {
        let lim = Limits::default();
        let c = corpus::random_at_certificate(&mut rng(s));
        let k = c.to_nfa(&ab(), &lim).unwrap();
        let co = k.complement(&lim).unwrap();
        prop_assert!(verify_certificate(&c, &k, &co, &lim).unwrap());
        prop_assert!(run(&Level::StThreeHalf, &k, &co).separable);
    }
}

#[test]
fn polynomial_levels_are_not_symmetric() {
    let a = ab();
    let ab_ = parse_regex("a b", &a).unwrap();
    let a_ = parse_regex("a", &a).unwrap();
    assert!(run(&Level::StHalf, &ab_, &a_).separable);
    assert!(!run(&Level::StHalf, &a_, &ab_).separable);
}
