//! Hard instances: QBF formulas compiled to pairs of languages whose level
//! 3/2 separability encodes the truth of the formula, and the transform
//! turning a level 3/2 instance into a level 2 instance.

mod qbf;

use std::time::{Duration, Instant};

use log::warn;
use serde::Serialize;

use crate::automata::{Alphabet, Letter, Nfa, Regex};
use crate::separation::{st_separates, Input, Level, SeparateOptions, Strategy};
use crate::{Error, Limits, Result};

pub use qbf::{eval_qbf, parse_qdimacs, Lit, Qbf, Quantifier};

fn x(i: usize) -> String {
    format!("x{i}")
}

fn nx(i: usize) -> String {
    format!("nx{i}")
}

fn h(i: usize) -> String {
    format!("h{i}")
}

const DOLLAR: &str = "dollar";

/// Display form of an internal token: `x_1`, `x̄_1`, `#_1`, `$`.
pub fn pretty_token(tok: &str) -> String {
    if tok == DOLLAR {
        return "$".into();
    }
    for (prefix, shown) in [("nx", "x\u{304}_"), ("x", "x_"), ("h", "#_")] {
        if let Some(rest) = tok.strip_prefix(prefix) {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                return format!("{shown}{rest}");
            }
        }
    }
    tok.to_string()
}

/// `B_i`: all literal letters, then `#_1..#_i` and `$` when `i ≥ 1`.
pub fn qbf_alphabet_tokens(n: usize, i: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=n).map(x).chain((1..=n).map(nx)).collect();
    if i >= 1 {
        v.extend((1..=i).map(h));
        v.push(DOLLAR.into());
    }
    v
}

/// `(L_Ψ, L'_Ψ)` over `B_n`, with the expressions they were compiled from.
#[derive(Clone, Debug)]
pub struct QbfInstance {
    pub alphabet: Alphabet,
    pub l: Nfa,
    pub lprime: Nfa,
    pub l_regex: Regex,
    pub lprime_regex: Regex,
    /// Expression sizes of `(L_i, L'_i)` for `i = 0..=n`.
    pub level_sizes: Vec<(usize, usize)>,
}

/// Manifest data for a generated instance.
#[derive(Clone, Debug, Serialize)]
pub struct QbfManifest {
    pub alphabet: Vec<String>,
    pub alphabet_pretty: Vec<String>,
    /// `x_i` ↦ source variable number, for `i = 1..=n`.
    pub variable_map: Vec<(String, u32)>,
    pub quantifiers: Vec<String>,
    pub l_states: usize,
    pub lprime_states: usize,
    pub level_sizes: Vec<(usize, usize)>,
    /// Every state count is at most twice the expression size.
    pub state_bound: (usize, usize),
}

impl QbfInstance {
    pub fn manifest(&self, q: &Qbf) -> QbfManifest {
        let toks: Vec<String> = self.alphabet.letters().iter().map(|l| l.to_string()).collect();
        let (a, b) = *self.level_sizes.last().expect("level 0 exists");
        QbfManifest {
            alphabet_pretty: toks.iter().map(|t| pretty_token(t)).collect(),
            alphabet: toks,
            variable_map: q
                .names
                .iter()
                .enumerate()
                .map(|(i, &v)| (format!("x_{}", i + 1), v))
                .collect(),
            quantifiers: q
                .quantifiers
                .iter()
                .map(|q| match q {
                    Quantifier::Exists => "exists".to_string(),
                    Quantifier::Forall => "forall".to_string(),
                })
                .collect(),
            l_states: self.l.state_count(),
            lprime_states: self.lprime.state_count(),
            level_sizes: self.level_sizes.clone(),
            state_bound: (2 * a, 2 * b),
        }
    }
}

fn cat(parts: Vec<Regex>) -> Regex {
    Regex::Concat(parts)
}

fn alt(parts: Vec<Regex>) -> Regex {
    Regex::Union(parts)
}

fn lit(tok: &str) -> Regex {
    Regex::letter(tok)
}

/// `T_i` (positive) or `T̄_i`: `(#_i ℓ (B_{i-1} \ {ℓ̄})* $ ℓ)*`.
fn t_lang(n: usize, i: usize, positive: bool) -> Regex {
    let (own, other) = if positive { (x(i), nx(i)) } else { (nx(i), x(i)) };
    let rest: Vec<String> = qbf_alphabet_tokens(n, i - 1)
        .into_iter()
        .filter(|t| *t != other)
        .collect();
    cat(vec![lit(&h(i)), lit(&own), Regex::set(&rest).star(), lit(DOLLAR), lit(&own)]).star()
}

/// `(#_i (x_i + x̄_i) inner $ (x_i + x̄_i))* #_i`.
fn block_star(i: usize, inner: Regex) -> Regex {
    let choice = Regex::set(&[x(i), nx(i)]);
    cat(vec![
        cat(vec![lit(&h(i)), choice.clone(), inner, lit(DOLLAR), choice]).star(),
        lit(&h(i)),
    ])
}

/// Compiles `(L_Ψ, L'_Ψ)` by induction on `i`.
pub fn build_qbf_languages(q: &Qbf) -> Result<QbfInstance> {
    let n = q.var_count();
    let alphabet = Alphabet::new(qbf_alphabet_tokens(n, n))?;
    let mut l = Regex::set(&qbf_alphabet_tokens(n, 0)).star();
    let mut lp = cat(q
        .clauses
        .iter()
        .map(|c| {
            let toks: Vec<String> = c
                .iter()
                .map(|l| if l.positive { x(l.var) } else { nx(l.var) })
                .collect();
            Regex::set(&toks)
        })
        .collect());
    let mut sizes = vec![(l.size(), lp.size())];
    for i in 1..=n {
        let next_l = block_star(i, l);
        let core = block_star(i, lp);
        let (t, tbar) = (t_lang(n, i, true), t_lang(n, i, false));
        let next_lp = match q.quantifiers[i - 1] {
            Quantifier::Exists => cat(vec![
                core,
                lit(DOLLAR),
                alt(vec![cat(vec![t, lit(&h(i))]), cat(vec![tbar, lit(&h(i))])]),
            ]),
            Quantifier::Forall => cat(vec![
                tbar,
                lit(&h(i)),
                lit(DOLLAR),
                core,
                lit(DOLLAR),
                t,
                lit(&h(i)),
            ]),
        };
        l = next_l;
        lp = next_lp;
        sizes.push((l.size(), lp.size()));
    }
    let inst = QbfInstance {
        l: l.compile(&alphabet)?,
        lprime: lp.compile(&alphabet)?,
        alphabet,
        l_regex: l,
        lprime_regex: lp,
        level_sizes: sizes,
    };
    let (a, b) = *inst.level_sizes.last().expect("level 0 exists");
    if inst.l.state_count() > 2 * a || inst.lprime.state_count() > 2 * b {
        return Err(Error::Invariant("QBF automata exceed the size bound".into()));
    }
    Ok(inst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct QbfReport {
    pub truth: bool,
    /// `None` when the budget ran out.
    pub separable: Option<bool>,
    pub outcome: Outcome,
    pub l_states: usize,
    pub lprime_states: usize,
    pub monoid_size: Option<usize>,
    pub millis: u128,
}

/// Checks that `Ψ` is true iff `L_Ψ` is not level 3/2 separable from `L'_Ψ`.
pub fn check_qbf_reduction(q: &Qbf, budget: Duration, limits: &Limits) -> Result<QbfReport> {
    let start = Instant::now();
    let truth = eval_qbf(q);
    let inst = build_qbf_languages(q)?;
    let opts = SeparateOptions {
        limits: limits.clone().with_budget(budget),
        ..SeparateOptions::default()
    };
    let verdict = st_separates(
        &Level::StThreeHalf,
        &Input::Nfa(inst.l.clone()),
        &Input::Nfa(inst.lprime.clone()),
        Strategy::Tm,
        &opts,
    );
    let (separable, monoid_size, outcome) = match verdict {
        Ok(v) => {
            let ok = truth != v.separable;
            let out = if ok { Outcome::Pass } else { Outcome::Fail };
            (Some(v.separable), Some(v.stats.monoid_size), out)
        }
        Err(e) if e.is_resource() => (None, None, Outcome::Skipped),
        Err(e) => return Err(e),
    };
    Ok(QbfReport {
        truth,
        separable,
        outcome,
        l_states: inst.l.state_count(),
        lprime_states: inst.lprime.state_count(),
        monoid_size,
        millis: start.elapsed().as_millis(),
    })
}

/// `(L, L')` over `A ∪ {#, $}` for the level 2 transform.
#[derive(Clone, Debug)]
pub struct BpolredInstance {
    pub l: Nfa,
    pub lprime: Nfa,
    pub hash: Letter,
    pub dollar: Letter,
}

fn fresh(alphabet: &Alphabet, base: &str) -> Letter {
    let mut tok = base.to_string();
    while alphabet.contains(&tok) {
        tok.insert(0, '_');
    }
    if tok != base {
        warn!("letter `{base}` already used, renamed to `{tok}`");
    }
    Letter::new(&tok).expect("nonempty")
}

/// `L = #(H'#(A*$#)*)* H #(A*$#)*` and `L' = #(H'#(A*$#)*)*`.
pub fn build_bpolred_instance(h: &Nfa, hp: &Nfa) -> Result<BpolredInstance> {
    let a = h.alphabet();
    if !a.same_set(hp.alphabet()) {
        return Err(Error::AlphabetMismatch("H and H' use different alphabets".into()));
    }
    let hash = fresh(a, "#");
    let dollar = fresh(&a.extended(std::slice::from_ref(&hash)), "$");
    let b = a.extended(&[hash.clone(), dollar.clone()]);
    let hn = h.with_alphabet(&b)?;
    let hpn = hp.with_alphabet(&b)?;
    let one = |l: &Letter| Nfa::word(b.clone(), &[b.index(l).expect("letter")]);
    let a_star = Nfa::new(b.clone(), 1, [0], [0], (0..a.len()).map(|i| (0, i, 0)))?;
    let tail = a_star.concat(&one(&dollar))?.concat(&one(&hash))?.star()?;
    let loop_part = hpn.concat(&one(&hash))?.concat(&tail)?.star()?;
    let lprime = one(&hash).concat(&loop_part)?;
    let l = lprime.concat(&hn)?.concat(&one(&hash))?.concat(&tail)?;
    Ok(BpolredInstance {
        l,
        lprime,
        hash,
        dollar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_zero_clauses() {
        let q = Qbf::new(
            vec![Quantifier::Exists, Quantifier::Exists],
            vec![vec![Lit::pos(1), Lit::neg(2)], vec![Lit::pos(2)]],
        )
        .unwrap();
        assert_eq!(qbf_alphabet_tokens(2, 2).len(), 7);
        let b0 = Alphabet::new(qbf_alphabet_tokens(2, 0)).unwrap();
        let lp0 = Regex::Concat(vec![Regex::set(&["x1", "nx2"]), Regex::set(&["x2"])])
            .compile(&b0)
            .unwrap();
        let words: Vec<String> = b0
            .words_up_to(2)
            .into_iter()
            .filter(|w| lp0.accepts(w))
            .map(|w| b0.render(&w))
            .collect();
        assert_eq!(words, ["x1 x2", "nx2 x2"]);
        let inst = build_qbf_languages(&q).unwrap();
        let w = inst.alphabet.word(&["h2"]).unwrap();
        assert!(inst.l.accepts(&w));
    }

    #[test]
    fn pretty_tokens() {
        assert_eq!(pretty_token("nx12"), "x\u{304}_12");
        assert_eq!(pretty_token("x1"), "x_1");
        assert_eq!(pretty_token("h3"), "#_3");
        assert_eq!(pretty_token("dollar"), "$");
    }

    #[test]
    fn bpolred_spot_checks() {
        let a = Alphabet::new(["a"]).unwrap();
        let eps = Nfa::epsilon(a.clone());
        let inst = build_bpolred_instance(&eps, &eps).unwrap();
        let b = inst.lprime.alphabet().clone();
        for (w, expect) in [("#", true), ("# #", true), ("# # a $ #", true), ("# a", false)] {
            let toks: Vec<&str> = w.split(' ').collect();
            assert_eq!(inst.lprime.accepts(&b.word(&toks).unwrap()), expect, "{w}");
        }
        assert!(inst.l.accepts(&b.word(&["#", "#"]).unwrap()));
    }
}
