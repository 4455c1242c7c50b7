use std::sync::Arc;

use super::{generate, Monoid, Morphism, RecognizedLanguage};
use crate::automata::Nfa;
use crate::{ElemSet, Limits, Result};

/// A Boolean relation on `Q`, packed row by row into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Relation(Box<[u64]>);

struct Shape {
    states: usize,
    words: usize,
}

impl Shape {
    fn empty(&self) -> Relation {
        Relation(vec![0u64; self.states * self.words].into_boxed_slice())
    }

    fn identity(&self) -> Relation {
        let mut r = self.empty();
        for q in 0..self.states {
            self.set(&mut r, q, q);
        }
        r
    }

    fn set(&self, r: &mut Relation, p: usize, q: usize) {
        r.0[p * self.words + q / 64] |= 1u64 << (q % 64);
    }

    fn get(&self, r: &Relation, p: usize, q: usize) -> bool {
        r.0[p * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    /// Relational composition: first `r`, then `s`.
    fn compose(&self, r: &Relation, s: &Relation) -> Relation {
        let w = self.words;
        let mut out = self.empty();
        for p in 0..self.states {
            let row = &mut out.0[p * w..(p + 1) * w];
            for (chunk, &bits) in r.0[p * w..(p + 1) * w].iter().enumerate() {
                let mut bits = bits;
                while bits != 0 {
                    let q = chunk * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    for (o, &x) in row.iter_mut().zip(&s.0[q * w..(q + 1) * w]) {
                        *o |= x;
                    }
                }
            }
        }
        out
    }
}

/// The monoid of Boolean `Q × Q` relations generated by the letters of `n`,
/// with the accept set `{R : R(i, f) for some initial i and final f}`.
pub fn transition_monoid(n: &Nfa, limits: &Limits) -> Result<RecognizedLanguage> {
    let shape = Shape {
        states: n.state_count(),
        words: n.state_count().div_ceil(64).max(1),
    };
    let k = n.alphabet().len();
    let gens: Vec<Relation> = (0..k)
        .map(|a| {
            let mut r = shape.empty();
            for &(p, b, q) in n.transitions() {
                if b as usize == a {
                    shape.set(&mut r, p as usize, q as usize);
                }
            }
            r
        })
        .collect();
    let gen = generate(
        shape.identity(),
        &gens,
        |r, s| shape.compose(r, s),
        "transition monoid size",
        limits.monoid_size,
        limits,
    )?;
    let table = gen.table(limits)?;
    let monoid = Arc::new(Monoid::from_flat(gen.len(), 0, table));
    let images = (0..k).map(|a| gen.right[a]).collect();
    let accept: ElemSet = gen
        .elems
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            n.initial().iter().any(|i| {
                n.finals()
                    .iter()
                    .any(|f| shape.get(r, i as usize, f as usize))
            })
        })
        .map(|(x, _)| x as u32)
        .collect();
    let morphism = Morphism::new(n.alphabet().clone(), monoid, images)?;
    RecognizedLanguage::new(morphism, accept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{parse_regex, Alphabet};

    #[test]
    fn universal_gives_trivial_monoid() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let rl = transition_monoid(&Nfa::universal(a), &Limits::default()).unwrap();
        assert_eq!(rl.morphism.monoid().size(), 1);
        assert_eq!(rl.accept, ElemSet::singleton(0));
    }

    #[test]
    fn parity_dfa_gives_z2() {
        let a = Alphabet::new(["a"]).unwrap();
        let n = Nfa::new(
            a.clone(),
            2,
            [0],
            [0],
            vec![(0, 0, 1), (1, 0, 0)],
        )
        .unwrap();
        let rl = transition_monoid(&n, &Limits::default()).unwrap();
        let m = rl.morphism.monoid();
        assert_eq!(m.size(), 2);
        assert_eq!(m.j_depth(), 1);
        assert_eq!(m.idempotents().len(), 1);
        assert!(rl.accepts(&[0, 0]) && !rl.accepts(&[0]));
    }

    #[test]
    fn thompson_start_state_adds_an_identity() {
        let a = Alphabet::new(["a"]).unwrap();
        let n = parse_regex("(aa)*", &a).unwrap();
        let rl = transition_monoid(&n, &Limits::default()).unwrap();
        assert!(rl.to_nfa().equivalent(&n, &Limits::default()).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let n = parse_regex("(a+b)* a (a+b)(a+b)", &a).unwrap();
        let limits = Limits {
            monoid_size: 4,
            ..Limits::default()
        };
        assert!(transition_monoid(&n, &limits).is_err());
    }
}
