//! Fixed instances for the benchmarks.

use hiersep::corpus::{self, ab};
use hiersep::hardness::{build_qbf_languages, Lit, Qbf, Quantifier};
use hiersep::{Nfa, TreeContext};

/// `count` seeded automaton pairs over `{a, b}` with at most `states` states.
pub fn nfa_pairs(states: usize, count: usize, seed: u64) -> Vec<(Nfa, Nfa)> {
    let mut rng = corpus::rng(seed);
    let a = ab();
    (0..count)
        .map(|_| {
            (
                corpus::random_nfa(&mut rng, &a, states, 0.4, None),
                corpus::random_nfa(&mut rng, &a, states, 0.4, None),
            )
        })
        .collect()
}

/// Seeded tree contexts over the corpus bases.
pub fn contexts(count: usize, max_m: usize, max_n: usize, seed: u64) -> Vec<TreeContext> {
    let mut rng = corpus::rng(seed);
    let bases = corpus::corpus_bases();
    (0..count)
        .map(|i| corpus::random_context(&mut rng, &bases[i % bases.len()], max_m, max_n))
        .collect()
}

/// The pair compiled from `∃x_2 ∀x_1. (x_1 ∨ x_2) ∧ (¬x_1 ∨ ¬x_2)`.
pub fn qbf_pair() -> (Nfa, Nfa) {
    let q = Qbf::new(
        vec![Quantifier::Forall, Quantifier::Exists],
        vec![vec![Lit::pos(1), Lit::pos(2)], vec![Lit::neg(1), Lit::neg(2)]],
    )
    .expect("valid formula");
    let inst = build_qbf_languages(&q).expect("small formula");
    (inst.l, inst.lprime)
}
