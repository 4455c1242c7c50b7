mod common;

use common::{nfa, rng, seed, words};
use hiersep::automata::{parse_regex, Regex};
use hiersep::corpus::{self, ab};
use hiersep::Limits;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn complement_flips_membership(n in nfa(3)) {
        let c = n.complement(&Limits::default()).unwrap();
        for w in words(6) {
            prop_assert_eq!(c.accepts(&w), !n.accepts(&w));
        }
    }

    #[test]
    fn inclusion_matches_enumeration(x in nfa(3), y in nfa(3)) {
        let lim = Limits::default();
        // 2·|Q_x|·|Q_y| bounds a shortest counterexample in the product
        let bound = 2 * x.state_count() * y.state_count();
        let ws = words(bound);
        let brute = ws.iter().all(|w| !y.accepts(w) || x.accepts(w));
        prop_assert_eq!(x.includes(&y, &lim).unwrap(), brute);
        let eq = ws.iter().all(|w| x.accepts(w) == y.accepts(w));
        prop_assert_eq!(x.equivalent(&y, &lim).unwrap(), eq);
    }

    #[test]
    fn regex_print_parse_round_trip(s in seed()) {
        let a = ab();
        let r: Regex = corpus::random_regex(&mut rng(s), &a, 4);
        let printed = r.to_string();
        let direct = r.compile(&a).unwrap();
        let reparsed = parse_regex(&printed, &a).unwrap();
        prop_assert!(direct.equivalent(&reparsed, &Limits::default()).unwrap(), "{}", printed);
    }
}
