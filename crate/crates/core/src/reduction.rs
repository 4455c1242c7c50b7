//! Taggings and the reduction from automata to monoids.
//!
//! For an automaton `A` over `A` and a tagging `P = (τ: E* → T, G)` with
//! `E = {0, 1}`, the relabeled automaton `A[P]` reads letters of `A × T`,
//! and `L[A,P] ⊆ (A ∪ E)*` interleaves tag words into `L(A)`: after each
//! letter `a` of a transition labeled `(a, t)` comes a word of `E*` with
//! image `t`, and a free prefix of `E*` is allowed.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    compatible_product, extend_basis_e, generate, CompatibleMorphism, Elem, Monoid, Morphism,
    RecognizedLanguage, TagLetters,
};
use crate::automata::{Alphabet, EpsNfa, Letter, Nfa};
use crate::separation::Level;
use crate::{ElemSet, Error, Limits, Result};

/// A morphism `τ: {0,1}* → T` with a distinguished subset `G`.
#[derive(Clone, Debug)]
pub struct Tagging {
    monoid: Arc<Monoid>,
    zero: Elem,
    one: Elem,
    g: Vec<Elem>,
}

impl Tagging {
    pub fn new(monoid: Arc<Monoid>, zero: Elem, one: Elem, g: ElemSet) -> Result<Tagging> {
        let size = monoid.size();
        if zero as usize >= size || one as usize >= size || g.iter().any(|x| x as usize >= size) {
            return Err(Error::Invalid("tagging refers to elements outside T".into()));
        }
        if g.is_empty() {
            return Err(Error::Invalid("a tagging needs rank at least 1".into()));
        }
        Ok(Tagging {
            monoid,
            zero,
            one,
            g: g.into_vec(),
        })
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        &self.monoid
    }

    pub fn rank(&self) -> usize {
        self.g.len()
    }

    pub fn size(&self) -> usize {
        self.monoid.size()
    }

    /// `G`, sorted by element index.
    pub fn g(&self) -> &[Elem] {
        &self.g
    }

    pub fn tag_image(&self, bit: bool) -> Elem {
        if bit {
            self.one
        } else {
            self.zero
        }
    }

    /// `τ(w)` for a word of tag bits.
    pub fn tau(&self, w: &[bool]) -> Elem {
        w.iter()
            .fold(self.monoid.unit(), |acc, &b| self.monoid.mul(acc, self.tag_image(b)))
    }

    /// `τ` as a morphism over the given tag letters.
    pub fn tau_morphism(&self, tags: &TagLetters) -> Morphism {
        let alphabet = Alphabet::from_letters(tags.letters().to_vec()).expect("distinct tags");
        Morphism::new(alphabet, self.monoid.clone(), vec![self.zero, self.one])
            .expect("tag images in range")
    }
}

/// `τ_k` counting lengths modulo `k`, with `G = T = Z/kZ`.
pub fn cyclic_tagging(k: usize) -> Tagging {
    assert!(k >= 1, "k must be positive");
    let t1 = (1 % k) as Elem;
    Tagging::new(Arc::new(Monoid::cyclic(k)), t1, t1, ElemSet::full(k)).expect("valid tagging")
}

fn check_compatible(n: &Nfa, p: &Tagging) -> Result<()> {
    if n.transition_count() > p.rank() {
        return Err(Error::Invalid(format!(
            "tagging of rank {} is too small for {} transitions",
            p.rank(),
            n.transition_count()
        )));
    }
    Ok(())
}

fn pair_token(a: &Letter, t: Elem) -> String {
    format!("{a}|t{t}")
}

/// The alphabet `A × T`, letter-major.
pub fn pair_alphabet(alphabet: &Alphabet, p: &Tagging) -> Alphabet {
    let tokens: Vec<String> = alphabet
        .letters()
        .iter()
        .flat_map(|a| (0..p.size() as Elem).map(move |t| pair_token(a, t)))
        .collect();
    Alphabet::new(tokens).expect("pair tokens are distinct")
}

/// Transitions in the fixed order, each with its tag `t_i = G[i]`.
fn tagged_transitions(n: &Nfa, p: &Tagging) -> Result<Vec<(u32, Letter, u32, Elem)>> {
    check_compatible(n, p)?;
    Ok(n.transitions_by_token()
        .into_iter()
        .zip(p.g())
        .map(|((q, a, r), &t)| (q, a, r, t))
        .collect())
}

/// `A[P]`: the i-th transition `(q, a, r)` becomes `(q, (a, t_i), r)`.
pub fn relabel_nfa(n: &Nfa, p: &Tagging) -> Result<Nfa> {
    let target = pair_alphabet(n.alphabet(), p);
    let trans = tagged_transitions(n, p)?
        .into_iter()
        .map(|(q, a, r, t)| {
            let idx = target.index_of(&pair_token(&a, t)).expect("pair letter");
            (q, idx, r)
        })
        .collect::<Vec<_>>();
    Nfa::new(
        target,
        n.state_count(),
        n.initial().iter(),
        n.finals().iter(),
        trans,
    )
}

fn extended_alphabet(alphabet: &Alphabet, tags: &TagLetters) -> Result<Alphabet> {
    if tags.letters().iter().any(|l| alphabet.contains(l.as_str())) {
        return Err(Error::Invalid("tag letters collide with the input alphabet".into()));
    }
    Ok(alphabet.extended(&tags.letters()))
}

/// An automaton for `L[A,P]` over `A ∪ E`.
pub fn build_l_nfa(n: &Nfa, p: &Tagging, tags: &TagLetters) -> Result<Nfa> {
    let ext = extended_alphabet(n.alphabet(), tags)?;
    let (zero, one) = (
        ext.index(&tags.zero).expect("tag letter"),
        ext.index(&tags.one).expect("tag letter"),
    );
    let t = p.monoid();
    let mut b = EpsNfa::new(ext.clone());
    let states: Vec<u32> = (0..n.state_count()).map(|_| b.add_state()).collect();
    let start = b.add_state();
    let end = b.add_state();
    b.edge(start, zero, start);
    b.edge(start, one, start);
    for q in n.initial().iter() {
        b.eps(start, states[q as usize]);
    }
    for q in n.finals().iter() {
        b.eps(states[q as usize], end);
    }
    for (q, a, r, tag) in tagged_transitions(n, p)? {
        let gadget: Vec<u32> = (0..t.size()).map(|_| b.add_state()).collect();
        b.edge(states[q as usize], ext.index(&a).expect("letter"), gadget[t.unit() as usize]);
        for x in t.elements() {
            b.edge(gadget[x as usize], zero, gadget[t.mul(x, p.tag_image(false)) as usize]);
            b.edge(gadget[x as usize], one, gadget[t.mul(x, p.tag_image(true)) as usize]);
        }
        b.eps(gadget[tag as usize], states[r as usize]);
    }
    b.finish(start, end)
}

/// `N = Q² ∪ {0_N, 1_N}` encoded as `0 = 0_N`, `1 = 1_N`, `2 + q·|Q| + r`.
#[derive(Clone, Copy)]
struct PathMonoid {
    q: u32,
}

impl PathMonoid {
    const ZERO: u32 = 0;
    const ONE: u32 = 1;

    fn pair(&self, q: u32, r: u32) -> u32 {
        2 + q * self.q + r
    }

    fn mul(&self, x: u32, y: u32) -> u32 {
        match (x, y) {
            (Self::ZERO, _) | (_, Self::ZERO) => Self::ZERO,
            (Self::ONE, y) => y,
            (x, Self::ONE) => x,
            (x, y) => {
                let (q1, r1) = ((x - 2) / self.q, (x - 2) % self.q);
                let (q2, r2) = ((y - 2) / self.q, (y - 2) % self.q);
                if r1 == q2 {
                    self.pair(q1, r2)
                } else {
                    Self::ZERO
                }
            }
        }
    }
}

/// Elements of `M = T ∪ (T × N × A × T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum LElem {
    Tag(Elem),
    Block(Elem, u32, u32, Elem),
}

/// A morphism recognizing `L[A,P]`, on the reachable part of the explicit
/// monoid `T ∪ (T × N × A × T)`.
pub fn build_l_monoid(
    n: &Nfa,
    p: &Tagging,
    tags: &TagLetters,
    limits: &Limits,
) -> Result<RecognizedLanguage> {
    let ext = extended_alphabet(n.alphabet(), tags)?;
    let a_len = n.alphabet().len();
    let t = p.monoid().clone();
    let nm = PathMonoid {
        q: n.state_count().max(1) as u32,
    };
    let mut beta: HashMap<(u32, Elem), u32> = HashMap::new();
    for (q, a, r, tag) in tagged_transitions(n, p)? {
        let a = n.alphabet().index(&a).expect("letter") as u32;
        beta.insert((a, tag), nm.pair(q, r));
    }
    let beta_of = |a: u32, tag: Elem| beta.get(&(a, tag)).copied().unwrap_or(PathMonoid::ZERO);
    let mul = |x: &LElem, y: &LElem| -> LElem {
        match (*x, *y) {
            (LElem::Tag(u), LElem::Tag(v)) => LElem::Tag(t.mul(u, v)),
            (LElem::Tag(u), LElem::Block(t1, s, a, t2)) => LElem::Block(t.mul(u, t1), s, a, t2),
            (LElem::Block(t1, s, a, t2), LElem::Tag(u)) => LElem::Block(t1, s, a, t.mul(t2, u)),
            (LElem::Block(t1, s, a, t2), LElem::Block(u1, s2, a2, u2)) => {
                let mid = nm.mul(nm.mul(s, beta_of(a, t.mul(t2, u1))), s2);
                LElem::Block(t1, mid, a2, u2)
            }
        }
    };
    let unit = LElem::Tag(t.unit());
    let gens: Vec<LElem> = (0..a_len as u32)
        .map(|a| LElem::Block(t.unit(), PathMonoid::ONE, a, t.unit()))
        .chain([LElem::Tag(p.tag_image(false)), LElem::Tag(p.tag_image(true))])
        .collect();
    let gen = generate(unit, &gens, mul, "L[A,P] monoid size", limits.monoid_size, limits)?;
    let bound = p.size() + a_len * p.size() * p.size() * (n.state_count().pow(2) + 2);
    if gen.len() > bound {
        return Err(Error::Invariant(format!(
            "L[A,P] monoid has {} elements, above the bound {bound}",
            gen.len()
        )));
    }
    let size = gen.len();
    let table = gen.table(limits)?;
    // The table was filled assuming associativity; check it against the
    // defining formulas, then run Light's test on the generators.
    for x in 0..size {
        limits.check_deadline()?;
        for y in 0..size {
            let expect = mul(&gen.elems[x], &gen.elems[y]);
            if gen.index.get(&expect) != Some(&table[x * size + y]) {
                return Err(Error::Invariant("L[A,P] multiplication is not closed".into()));
            }
        }
    }
    for g in 0..gens.len() {
        let gi = gen.right[g] as usize;
        for x in 0..size {
            let xg = table[x * size + gi] as usize;
            for y in 0..size {
                let gy = table[gi * size + y] as usize;
                if table[xg * size + y] != table[x * size + gy] {
                    return Err(Error::Invariant("L[A,P] multiplication is not associative".into()));
                }
            }
        }
    }

    let h_contains = |s: u32| -> bool {
        match s {
            PathMonoid::ZERO => false,
            PathMonoid::ONE => n.initial().iter().any(|q| n.finals().contains(q)),
            s => {
                let (q, r) = ((s - 2) / nm.q, (s - 2) % nm.q);
                n.initial().contains(q) && n.finals().contains(r)
            }
        }
    };
    let one_in_h = h_contains(PathMonoid::ONE);
    let accept: ElemSet = gen
        .elems
        .iter()
        .enumerate()
        .filter(|(_, x)| match **x {
            LElem::Tag(_) => one_in_h,
            LElem::Block(_, s, a, t2) => h_contains(nm.mul(s, beta_of(a, t2))),
        })
        .map(|(i, _)| i as Elem)
        .collect();
    let monoid = Arc::new(Monoid::from_flat(size, 0, table));
    let images = (0..ext.len())
        .map(|a| gen.right[a])
        .collect();
    let morphism = Morphism::new(ext, monoid, images)?;
    RecognizedLanguage::new(morphism, accept)
}

/// The upper bound `|T| + |A|·|T|²·(|Q|² + 2)` on the monoid of
/// [`build_l_monoid`].
pub fn l_monoid_bound(n: &Nfa, p: &Tagging) -> usize {
    p.size() + n.alphabet().len() * p.size() * p.size() * (n.state_count().pow(2) + 2)
}

/// Everything built for one input automaton.
#[derive(Clone, Debug)]
pub struct ReductionArtifacts {
    pub relabeled: Nfa,
    pub language_nfa: Nfa,
    pub language_monoid: RecognizedLanguage,
    pub tagging: Tagging,
    pub tags: TagLetters,
    /// Transitions in the order used to assign tags.
    pub transition_order: Vec<(u32, Letter, u32)>,
    pub size_bound: usize,
}

/// A summary suitable for a JSON manifest.
#[derive(Clone, Debug, Serialize)]
pub struct ArtifactSummary {
    pub tagging: String,
    pub tag_letters: [String; 2],
    pub g_order: Vec<Elem>,
    pub transition_order: Vec<(u32, String, u32, Elem)>,
    pub relabeled_states: usize,
    pub language_nfa_states: usize,
    pub monoid_size: usize,
    pub size_bound: usize,
    pub size_bound_holds: bool,
}

impl ReductionArtifacts {
    pub fn build(n: &Nfa, p: &Tagging, tags: &TagLetters, limits: &Limits) -> Result<Self> {
        Ok(ReductionArtifacts {
            relabeled: relabel_nfa(n, p)?,
            language_nfa: build_l_nfa(n, p, tags)?,
            language_monoid: build_l_monoid(n, p, tags, limits)?,
            tagging: p.clone(),
            tags: tags.clone(),
            transition_order: n.transitions_by_token(),
            size_bound: l_monoid_bound(n, p),
        })
    }

    pub fn summary(&self) -> ArtifactSummary {
        let size = self.language_monoid.morphism.monoid().size();
        ArtifactSummary {
            tagging: format!("cyclic({})", self.tagging.size()),
            tag_letters: [self.tags.zero.to_string(), self.tags.one.to_string()],
            g_order: self.tagging.g().to_vec(),
            transition_order: self
                .transition_order
                .iter()
                .zip(self.tagging.g())
                .map(|((q, a, r), &t)| (*q, a.to_string(), *r, t))
                .collect(),
            relabeled_states: self.relabeled.state_count(),
            language_nfa_states: self.language_nfa.state_count(),
            monoid_size: size,
            size_bound: self.size_bound,
            size_bound_holds: size <= self.size_bound,
        }
    }
}

/// A separation instance over `A ∪ E` equivalent to the one on `(n1, n2)`.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub morphism: CompatibleMorphism,
    pub accept0: ElemSet,
    pub accept1: ElemSet,
    pub artifacts: [ReductionArtifacts; 2],
}

/// Builds `L[A1,P]`, `L[A2,P]` for the cyclic tagging of size
/// `max(|δ1|, |δ2|, 1)` and their compatible product over the extended basis.
pub fn reduce_instance(n1: &Nfa, n2: &Nfa, level: &Level, limits: &Limits) -> Result<ReducedInstance> {
    let alphabet = n1.alphabet();
    let n2 = n2.with_alphabet(alphabet)?;
    let k = n1.transition_count().max(n2.transition_count()).max(1);
    let p = cyclic_tagging(k);
    let tags = TagLetters::for_alphabet(alphabet);
    let a1 = ReductionArtifacts::build(n1, &p, &tags, limits)?;
    let a2 = ReductionArtifacts::build(&n2, &p, &tags, limits)?;
    let basis = level.desugar().1.build(alphabet)?;
    let ext = Arc::new(extend_basis_e(&basis, &tags)?);
    let (morphism, accept0, accept1) =
        compatible_product(&a1.language_monoid, &a2.language_monoid, &ext, limits)?;
    Ok(ReducedInstance {
        morphism,
        accept0,
        accept1,
        artifacts: [a1, a2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::parse_regex;

    #[test]
    fn cyclic_counts_length() {
        let p = cyclic_tagging(3);
        assert_eq!(p.tau(&[false, true, false]), 0);
        assert_eq!(p.tau(&[true]), 1);
        assert_eq!(cyclic_tagging(1).rank(), 1);
    }

    #[test]
    fn relabel_gives_distinct_letters() {
        let a = Alphabet::new(["a"]).unwrap();
        let n = Nfa::new(a, 2, [0], [1], [(0, 0, 1), (1, 0, 1)]).unwrap();
        let r = relabel_nfa(&n, &cyclic_tagging(2)).unwrap();
        let toks: Vec<String> = r
            .transitions_by_token()
            .into_iter()
            .map(|(_, l, _)| l.to_string())
            .collect();
        assert_eq!(toks, ["a|t0", "a|t1"]);
        assert!(relabel_nfa(&n, &cyclic_tagging(1)).is_err());
    }

    #[test]
    fn epsilon_language_gives_all_tag_words() {
        let a = Alphabet::new(["a"]).unwrap();
        let n = Nfa::epsilon(a);
        let tags = TagLetters::for_alphabet(n.alphabet());
        let l = build_l_nfa(&n, &cyclic_tagging(1), &tags).unwrap();
        let ext = l.alphabet().clone();
        let expect = parse_regex("[0,1]*", &ext).unwrap();
        assert!(l.equivalent(&expect, &Limits::default()).unwrap());
    }

    #[test]
    fn constructions_agree() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let n = parse_regex("a b* + b a", &a).unwrap().trim();
        let p = cyclic_tagging(n.transition_count());
        let tags = TagLetters::for_alphabet(&a);
        let lim = Limits::default();
        let by_nfa = build_l_nfa(&n, &p, &tags).unwrap();
        let by_monoid = build_l_monoid(&n, &p, &tags, &lim).unwrap();
        assert!(by_nfa.equivalent(&by_monoid.to_nfa(), &lim).unwrap());
        assert!(by_monoid.morphism.monoid().size() <= l_monoid_bound(&n, &p));
        by_monoid.morphism.monoid().validate().unwrap();
    }
}
