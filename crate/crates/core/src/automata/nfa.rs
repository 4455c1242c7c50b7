use std::collections::{HashMap, HashSet, VecDeque};

use super::{Alphabet, EpsNfa, Letter};
use crate::{ElemSet, Error, Limits, Result};

/// An ε-free nondeterministic automaton over a symbolic alphabet.
///
/// States are `0..state_count`. Transitions are kept sorted and deduplicated;
/// all values are immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    states: usize,
    initial: ElemSet,
    finals: ElemSet,
    transitions: Vec<(u32, u32, u32)>,
    delta: Vec<Vec<u32>>,
}

impl Nfa {
    pub fn new(
        alphabet: Alphabet,
        states: usize,
        initial: impl IntoIterator<Item = u32>,
        finals: impl IntoIterator<Item = u32>,
        transitions: impl IntoIterator<Item = (u32, usize, u32)>,
    ) -> Result<Self> {
        let initial: ElemSet = initial.into_iter().collect();
        let finals: ElemSet = finals.into_iter().collect();
        let k = alphabet.len();
        let mut trans = Vec::new();
        for (p, a, q) in transitions {
            if a >= k {
                return Err(Error::Invalid(format!("letter index {a} out of range")));
            }
            trans.push((p, a as u32, q));
        }
        let bad = |q: u32| q as usize >= states;
        if initial.iter().any(bad)
            || finals.iter().any(bad)
            || trans.iter().any(|&(p, _, q)| bad(p) || bad(q))
        {
            return Err(Error::Invalid(format!(
                "state index out of range (state count {states})"
            )));
        }
        trans.sort_unstable();
        trans.dedup();
        let mut delta = vec![Vec::new(); states * k];
        for &(p, a, q) in &trans {
            delta[p as usize * k + a as usize].push(q);
        }
        Ok(Nfa {
            alphabet,
            states,
            initial,
            finals,
            transitions: trans,
            delta,
        })
    }

    /// Automaton for the empty language.
    pub fn empty_language(alphabet: Alphabet) -> Self {
        Nfa::new(alphabet, 0, [], [], []).unwrap()
    }

    /// One-state automaton for `A*`.
    pub fn universal(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Nfa::new(alphabet, 1, [0], [0], (0..k).map(|a| (0, a, 0))).unwrap()
    }

    /// Automaton accepting only the empty word.
    pub fn epsilon(alphabet: Alphabet) -> Self {
        Nfa::new(alphabet, 1, [0], [0], []).unwrap()
    }

    /// Automaton accepting exactly the given word.
    pub fn word(alphabet: Alphabet, w: &[usize]) -> Self {
        let n = w.len();
        Nfa::new(
            alphabet,
            n + 1,
            [0],
            [n as u32],
            w.iter().enumerate().map(|(i, &a)| (i as u32, a, i as u32 + 1)),
        )
        .unwrap()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> &ElemSet {
        &self.initial
    }

    pub fn finals(&self) -> &ElemSet {
        &self.finals
    }

    /// Transitions `(source, letter index, target)`, sorted.
    pub fn transitions(&self) -> &[(u32, u32, u32)] {
        &self.transitions
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    /// Transitions sorted by `(source, letter token, target)`.
    pub fn transitions_by_token(&self) -> Vec<(u32, Letter, u32)> {
        let mut v: Vec<_> = self
            .transitions
            .iter()
            .map(|&(p, a, q)| (p, self.alphabet.letter(a as usize).clone(), q))
            .collect();
        v.sort();
        v
    }

    pub fn successors(&self, q: u32, a: usize) -> &[u32] {
        &self.delta[q as usize * self.alphabet.len() + a]
    }

    pub fn step(&self, set: &ElemSet, a: usize) -> ElemSet {
        let mut out = Vec::new();
        for q in set.iter() {
            out.extend_from_slice(self.successors(q, a));
        }
        ElemSet::from_vec(out)
    }

    pub fn accepts(&self, w: &[usize]) -> bool {
        let mut cur = self.initial.clone();
        for &a in w {
            if cur.is_empty() {
                return false;
            }
            cur = self.step(&cur, a);
        }
        let hit = cur.iter().any(|q| self.finals.contains(q));
        hit
    }

    pub fn accepts_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Result<bool> {
        Ok(self.accepts(&self.alphabet.word(tokens)?))
    }

    fn reachable_from(&self, start: &ElemSet) -> Vec<bool> {
        let mut seen = vec![false; self.states];
        let mut stack: Vec<u32> = start.iter().collect();
        for q in start.iter() {
            seen[q as usize] = true;
        }
        while let Some(p) = stack.pop() {
            for a in 0..self.alphabet.len() {
                for &q in self.successors(p, a) {
                    if !seen[q as usize] {
                        seen[q as usize] = true;
                        stack.push(q);
                    }
                }
            }
        }
        seen
    }

    /// True iff no final state is reachable from an initial state.
    pub fn is_empty(&self) -> bool {
        let seen = self.reachable_from(&self.initial);
        !self.finals.iter().any(|f| seen[f as usize])
    }

    /// Removes states that are not both accessible and co-accessible.
    pub fn trim(&self) -> Nfa {
        let fwd = self.reachable_from(&self.initial);
        let mut bwd = vec![false; self.states];
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); self.states];
        for &(p, _, q) in &self.transitions {
            preds[q as usize].push(p);
        }
        let mut stack: Vec<u32> = self.finals.iter().collect();
        for f in self.finals.iter() {
            bwd[f as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &preds[q as usize] {
                if !bwd[p as usize] {
                    bwd[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        let mut rename = vec![u32::MAX; self.states];
        let mut n = 0u32;
        for q in 0..self.states {
            if fwd[q] && bwd[q] {
                rename[q] = n;
                n += 1;
            }
        }
        let keep = |q: u32| rename[q as usize] != u32::MAX;
        Nfa::new(
            self.alphabet.clone(),
            n as usize,
            self.initial.iter().filter(|&q| keep(q)).map(|q| rename[q as usize]),
            self.finals.iter().filter(|&q| keep(q)).map(|q| rename[q as usize]),
            self.transitions
                .iter()
                .filter(|&&(p, _, q)| keep(p) && keep(q))
                .map(|&(p, a, q)| (rename[p as usize], a as usize, rename[q as usize])),
        )
        .unwrap()
    }

    /// Subset construction. The result is complete (it may contain the empty
    /// subset as a sink) and has the single initial state 0.
    pub fn determinize(&self, limits: &Limits) -> Result<Nfa> {
        let k = self.alphabet.len();
        let mut index: HashMap<ElemSet, u32> = HashMap::new();
        let mut subsets = vec![self.initial.clone()];
        index.insert(self.initial.clone(), 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            if i % 1024 == 0 {
                limits.check_deadline()?;
            }
            let cur = subsets[i].clone();
            for a in 0..k {
                let next = self.step(&cur, a);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as u32;
                        limits.check("determinization states", subsets.len() + 1, limits.det_states)?;
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                trans.push((i as u32, a, id));
            }
            i += 1;
        }
        let finals = subsets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.iter().any(|q| self.finals.contains(q)))
            .map(|(i, _)| i as u32);
        Nfa::new(self.alphabet.clone(), subsets.len(), [0], finals, trans)
    }

    /// Automaton for `A* \ L(self)`.
    pub fn complement(&self, limits: &Limits) -> Result<Nfa> {
        let dfa = self.determinize(limits)?;
        let finals: Vec<u32> = (0..dfa.states as u32)
            .filter(|&q| !dfa.finals.contains(q))
            .collect();
        Nfa::new(
            dfa.alphabet.clone(),
            dfa.states,
            [0],
            finals,
            dfa.transitions.iter().map(|&(p, a, q)| (p, a as usize, q)),
        )
    }

    /// Re-indexes `other` over this automaton's alphabet (same letter set).
    fn aligned(&self, other: &Nfa) -> Result<Nfa> {
        if self.alphabet == other.alphabet {
            return Ok(other.clone());
        }
        if !self.alphabet.same_set(&other.alphabet) {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet, other.alphabet
            )));
        }
        other.with_alphabet(&self.alphabet)
    }

    /// Re-expresses this automaton over a larger (or reordered) alphabet.
    pub fn with_alphabet(&self, target: &Alphabet) -> Result<Nfa> {
        let map = self
            .alphabet
            .letters()
            .iter()
            .map(|l| {
                target
                    .index(l)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("letter `{l}` missing")))
            })
            .collect::<Result<Vec<_>>>()?;
        Nfa::new(
            target.clone(),
            self.states,
            self.initial.iter(),
            self.finals.iter(),
            self.transitions
                .iter()
                .map(|&(p, a, q)| (p, map[a as usize], q)),
        )
    }

    /// Applies a letter-to-letter morphism into `target`.
    pub fn map_letters(&self, target: &Alphabet, f: impl Fn(&Letter) -> Letter) -> Result<Nfa> {
        let map = self
            .alphabet
            .letters()
            .iter()
            .map(|l| {
                let img = f(l);
                target.index(&img).ok_or(Error::UnknownLetter(img.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Nfa::new(
            target.clone(),
            self.states,
            self.initial.iter(),
            self.finals.iter(),
            self.transitions
                .iter()
                .map(|&(p, a, q)| (p, map[a as usize], q)),
        )
    }

    /// Product automaton (accessible part only).
    pub fn intersect(&self, other: &Nfa) -> Result<Nfa> {
        let other = self.aligned(other)?;
        let k = self.alphabet.len();
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut pairs = Vec::new();
        let mut initial = Vec::new();
        for p in self.initial.iter() {
            for q in other.initial.iter() {
                let id = pairs.len() as u32;
                index.insert((p, q), id);
                pairs.push((p, q));
                queue.push_back(id);
                initial.push(id);
            }
        }
        let mut trans = Vec::new();
        while let Some(id) = queue.pop_front() {
            let (p, q) = pairs[id as usize];
            for a in 0..k {
                for &p2 in self.successors(p, a) {
                    for &q2 in other.successors(q, a) {
                        let nid = *index.entry((p2, q2)).or_insert_with(|| {
                            pairs.push((p2, q2));
                            queue.push_back(pairs.len() as u32 - 1);
                            pairs.len() as u32 - 1
                        });
                        trans.push((id, a, nid));
                    }
                }
            }
        }
        let finals: Vec<u32> = pairs
            .iter()
            .enumerate()
            .filter(|(_, &(p, q))| self.finals.contains(p) && other.finals.contains(q))
            .map(|(i, _)| i as u32)
            .collect();
        Nfa::new(self.alphabet.clone(), pairs.len(), initial, finals, trans)
    }

    /// Disjoint sum.
    pub fn union(&self, other: &Nfa) -> Result<Nfa> {
        let other = self.aligned(other)?;
        let off = self.states as u32;
        Nfa::new(
            self.alphabet.clone(),
            self.states + other.states,
            self.initial.iter().chain(other.initial.iter().map(|q| q + off)),
            self.finals.iter().chain(other.finals.iter().map(|q| q + off)),
            self.transitions
                .iter()
                .map(|&(p, a, q)| (p, a as usize, q))
                .chain(
                    other
                        .transitions
                        .iter()
                        .map(|&(p, a, q)| (p + off, a as usize, q + off)),
                ),
        )
    }

    pub fn concat(&self, other: &Nfa) -> Result<Nfa> {
        let other = self.aligned(other)?;
        let mut b = EpsNfa::new(self.alphabet.clone());
        let (s1, e1) = b.embed(self);
        let (s2, e2) = b.embed(&other);
        b.eps(e1, s2);
        b.finish(s1, e2)
    }

    pub fn star(&self) -> Result<Nfa> {
        let mut b = EpsNfa::new(self.alphabet.clone());
        let (s, e) = b.embed(self);
        let (s2, e2) = b.star(s, e);
        b.finish(s2, e2)
    }

    /// `L(other) ⊆ L(self)`, decided on the fly against the subset
    /// construction of `self`.
    pub fn includes(&self, other: &Nfa, limits: &Limits) -> Result<bool> {
        let other = self.aligned(other)?;
        let k = self.alphabet.len();
        let mut seen: HashSet<(u32, ElemSet)> = HashSet::new();
        let mut stack = Vec::new();
        for q in other.initial.iter() {
            let node = (q, self.initial.clone());
            if seen.insert(node.clone()) {
                stack.push(node);
            }
        }
        while let Some((q, set)) = stack.pop() {
            if other.finals.contains(q) && !set.iter().any(|p| self.finals.contains(p)) {
                return Ok(false);
            }
            if seen.len() % 1024 == 0 {
                limits.check_deadline()?;
            }
            for a in 0..k {
                let succ = other.successors(q, a);
                if succ.is_empty() {
                    continue;
                }
                let next = self.step(&set, a);
                for &r in succ {
                    let node = (r, next.clone());
                    if !seen.contains(&node) {
                        limits.check("inclusion check states", seen.len() + 1, limits.det_states)?;
                        seen.insert(node.clone());
                        stack.push(node);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn equivalent(&self, other: &Nfa, limits: &Limits) -> Result<bool> {
        Ok(self.includes(other, limits)? && other.includes(self, limits)?)
    }

    /// A shortest accepted word, if any.
    pub fn shortest_word(&self) -> Option<Vec<usize>> {
        let mut prev: Vec<Option<(u32, usize)>> = vec![None; self.states];
        let mut seen = vec![false; self.states];
        let mut queue = VecDeque::new();
        for q in self.initial.iter() {
            seen[q as usize] = true;
            queue.push_back(q);
        }
        while let Some(p) = queue.pop_front() {
            if self.finals.contains(p) {
                let mut w = Vec::new();
                let mut cur = p;
                while let Some((q, a)) = prev[cur as usize] {
                    w.push(a);
                    cur = q;
                }
                w.reverse();
                return Some(w);
            }
            for a in 0..self.alphabet.len() {
                for &q in self.successors(p, a) {
                    if !seen[q as usize] {
                        seen[q as usize] = true;
                        prev[q as usize] = Some((p, a));
                        queue.push_back(q);
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn empty_alphabet_star_is_epsilon() {
        let a = Alphabet::empty();
        let u = Nfa::universal(a.clone());
        assert!(u.accepts(&[]));
        assert!(u.equivalent(&Nfa::epsilon(a), &Limits::default()).unwrap());
    }

    #[test]
    fn complement_of_empty_is_universal() {
        let l = Limits::default();
        let c = Nfa::empty_language(ab()).complement(&l).unwrap();
        assert!(c.equivalent(&Nfa::universal(ab()), &l).unwrap());
    }

    #[test]
    fn determinization_cap_fails_loudly() {
        // (a+b)* a (a+b)^3: the subset construction needs 16 states
        let a = ab();
        let n = Nfa::new(
            a,
            5,
            [0],
            [4],
            [(0, 0, 0), (0, 1, 0), (0, 0, 1)]
                .into_iter()
                .chain((1..4).flat_map(|i| [(i, 0, i + 1), (i, 1, i + 1)])),
        )
        .unwrap();
        let limits = Limits {
            det_states: 8,
            ..Limits::default()
        };
        assert!(matches!(n.complement(&limits), Err(Error::Limit { .. })));
        assert_eq!(n.determinize(&Limits::default()).unwrap().state_count(), 16);
    }

    #[test]
    fn union_and_intersection_alphabet_mismatch() {
        let x = Nfa::universal(ab());
        let y = Nfa::universal(Alphabet::new(["a"]).unwrap());
        assert!(matches!(x.union(&y), Err(Error::AlphabetMismatch(_))));
        assert!(matches!(x.intersect(&y), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn includes_prefix_language() {
        // aA* ⊇ {ab}
        let a = ab();
        let a_astar = Nfa::new(a.clone(), 2, [0], [1], [(0, 0, 1), (1, 0, 1), (1, 1, 1)]).unwrap();
        let ab_word = Nfa::word(a.clone(), &[0, 1]);
        let l = Limits::default();
        assert!(a_astar.includes(&ab_word, &l).unwrap());
        assert!(!ab_word.includes(&a_astar, &l).unwrap());
        let single_a = Nfa::word(a.clone(), &[0]);
        let len_one = Nfa::new(a, 2, [0], [1], [(0, 0, 1), (0, 1, 1)]).unwrap();
        assert!(!single_a.includes(&len_one, &l).unwrap());
    }

    #[test]
    fn trim_keeps_language() {
        let a = ab();
        let n = Nfa::new(a, 4, [0], [1], [(0, 0, 1), (0, 1, 2), (3, 0, 1)]).unwrap();
        let t = n.trim();
        assert_eq!(t.state_count(), 2);
        assert!(t.equivalent(&n, &Limits::default()).unwrap());
    }
}
