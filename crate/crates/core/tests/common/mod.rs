#![allow(dead_code)]

use hiersep::corpus::{self, ab};
use hiersep::{Nfa, Word};
use proptest::prelude::*;

/// Automata over `{a, b}` with at most `max_states` states.
pub fn nfa(max_states: usize) -> impl Strategy<Value = Nfa> {
    nfa_with(max_states, 3 * max_states)
}

/// As [`nfa`], with at most `max_trans` transitions.
pub fn nfa_with(max_states: usize, max_trans: usize) -> impl Strategy<Value = Nfa> {
    (1..=max_states as u32).prop_flat_map(move |n| {
        (
            proptest::collection::vec((0..n, 0..2usize, 0..n), 0..=max_trans.min(3 * n as usize)),
            proptest::collection::vec(any::<bool>(), n as usize),
        )
            .prop_map(move |(trans, fin)| {
                let finals: Vec<u32> = (0..n).filter(|&q| fin[q as usize]).collect();
                Nfa::new(ab(), n as usize, [0], finals, trans).unwrap()
            })
    })
}

/// Seeds for the corpus generators.
pub fn seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

pub fn words(max_len: usize) -> Vec<Word> {
    ab().words_up_to(max_len)
}

pub fn rng(seed: u64) -> corpus::Rng8 {
    corpus::rng(seed)
}
