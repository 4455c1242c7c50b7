mod common;

use common::{rng, seed};
use hiersep::hardness::{build_qbf_languages, eval_qbf, Lit, Qbf, Quantifier};
use hiersep::{st_separates, Input, Level, SeparateOptions, Strategy};
use proptest::prelude::*;
use rand::Rng;

fn random_qbf(s: u64, vars: usize) -> Qbf {
    let mut r = rng(s);
    let quantifiers = (0..vars)
        .map(|_| if r.gen_bool(0.5) { Quantifier::Exists } else { Quantifier::Forall })
        .collect();
    let clauses = (0..r.gen_range(1..=3))
        .map(|_| {
            let mut c = Vec::new();
            for v in 1..=vars {
                if r.gen_bool(0.6) {
                    c.push(if r.gen_bool(0.5) { Lit::pos(v) } else { Lit::neg(v) });
                }
            }
            c
        })
        .filter(|c| !c.is_empty())
        .collect::<Vec<_>>();
    let clauses = if clauses.is_empty() { vec![vec![Lit::pos(1)]] } else { clauses };
    Qbf::new(quantifiers, clauses).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn state_counts_stay_within_the_recorded_bound(s in seed(), vars in 1usize..=4) {
        let q = random_qbf(s, vars);
        let inst = build_qbf_languages(&q).unwrap();
        let m = inst.manifest(&q);
        prop_assert!(m.l_states <= m.state_bound.0 && m.lprime_states <= m.state_bound.1);
        // one level of sizes per nesting depth, each linear in the previous
        prop_assert_eq!(m.level_sizes.len(), vars + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn separable_instances_are_disjoint(s in seed()) {
        let q = random_qbf(s, 1);
        let inst = build_qbf_languages(&q).unwrap();
        let v = st_separates(
            &Level::StThreeHalf,
            &Input::Nfa(inst.l.clone()),
            &Input::Nfa(inst.lprime.clone()),
            Strategy::Tm,
            &SeparateOptions::default(),
        )
        .unwrap();
        prop_assert_eq!(v.separable, !eval_qbf(&q));
        if v.separable {
            prop_assert!(inst.l.intersect(&inst.lprime).unwrap().is_empty());
        }
    }
}
