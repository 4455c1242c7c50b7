use super::{Alphabet, Nfa};
use crate::Result;

/// Builder for automata with ε-transitions (Thompson fragments).
///
/// ε-transitions never leave the builder: [`EpsNfa::finish`] eliminates them
/// and trims the result.
pub struct EpsNfa {
    alphabet: Alphabet,
    eps: Vec<Vec<u32>>,
    trans: Vec<(u32, usize, u32)>,
}

impl EpsNfa {
    pub fn new(alphabet: Alphabet) -> Self {
        EpsNfa {
            alphabet,
            eps: Vec::new(),
            trans: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn add_state(&mut self) -> u32 {
        self.eps.push(Vec::new());
        self.eps.len() as u32 - 1
    }

    pub fn eps(&mut self, p: u32, q: u32) {
        self.eps[p as usize].push(q);
    }

    pub fn edge(&mut self, p: u32, a: usize, q: u32) {
        self.trans.push((p, a, q));
    }

    /// Fragment reading one letter from `letters`.
    pub fn letters(&mut self, letters: &[usize]) -> (u32, u32) {
        let s = self.add_state();
        let e = self.add_state();
        for &a in letters {
            self.edge(s, a, e);
        }
        (s, e)
    }

    pub fn epsilon(&mut self) -> (u32, u32) {
        let s = self.add_state();
        let e = self.add_state();
        self.eps(s, e);
        (s, e)
    }

    pub fn nothing(&mut self) -> (u32, u32) {
        (self.add_state(), self.add_state())
    }

    /// Copies an ε-free automaton in as a fragment. `nfa` must be over the
    /// builder's alphabet.
    pub fn embed(&mut self, nfa: &Nfa) -> (u32, u32) {
        debug_assert_eq!(nfa.alphabet(), &self.alphabet);
        let off = self.eps.len() as u32;
        for _ in 0..nfa.state_count() {
            self.add_state();
        }
        for &(p, a, q) in nfa.transitions() {
            self.edge(p + off, a as usize, q + off);
        }
        let s = self.add_state();
        let e = self.add_state();
        for q in nfa.initial().iter() {
            self.eps(s, q + off);
        }
        for q in nfa.finals().iter() {
            self.eps(q + off, e);
        }
        (s, e)
    }

    pub fn concat(&mut self, parts: &[(u32, u32)]) -> (u32, u32) {
        if parts.is_empty() {
            return self.epsilon();
        }
        for w in parts.windows(2) {
            self.eps(w[0].1, w[1].0);
        }
        (parts[0].0, parts[parts.len() - 1].1)
    }

    pub fn alt(&mut self, parts: &[(u32, u32)]) -> (u32, u32) {
        let s = self.add_state();
        let e = self.add_state();
        for &(ps, pe) in parts {
            self.eps(s, ps);
            self.eps(pe, e);
        }
        (s, e)
    }

    pub fn star(&mut self, s: u32, e: u32) -> (u32, u32) {
        let s2 = self.add_state();
        let e2 = self.add_state();
        self.eps(s2, s);
        self.eps(s2, e2);
        self.eps(e, s);
        self.eps(e, e2);
        (s2, e2)
    }

    fn closure(&self, q: u32) -> Vec<u32> {
        let mut seen = vec![false; self.eps.len()];
        let mut stack = vec![q];
        seen[q as usize] = true;
        let mut out = Vec::new();
        while let Some(p) = stack.pop() {
            out.push(p);
            for &r in &self.eps[p as usize] {
                if !seen[r as usize] {
                    seen[r as usize] = true;
                    stack.push(r);
                }
            }
        }
        out
    }

    /// Eliminates ε-transitions for the fragment `(start, end)` and trims.
    pub fn finish(&self, start: u32, end: u32) -> Result<Nfa> {
        let n = self.eps.len();
        let mut by_source: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
        for &(p, a, q) in &self.trans {
            by_source[p as usize].push((a, q));
        }
        let mut trans = Vec::new();
        let mut finals = Vec::new();
        for q in 0..n as u32 {
            let cl = self.closure(q);
            if cl.contains(&end) {
                finals.push(q);
            }
            for p in cl {
                for &(a, r) in &by_source[p as usize] {
                    trans.push((q, a, r));
                }
            }
        }
        Ok(Nfa::new(self.alphabet.clone(), n, [start], finals, trans)?.trim())
    }
}
