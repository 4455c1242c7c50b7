//! Symbolic-alphabet nondeterministic automata.

mod eps;
mod nfa;
mod regex;
mod serial;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use eps::EpsNfa;
pub use nfa::Nfa;
pub use regex::{parse_regex, Regex};
pub use serial::NfaFile;

/// A word, as a sequence of letter indices into some [`Alphabet`].
pub type Word = Vec<usize>;

/// A letter: an arbitrary nonempty token such as `a`, `#_1` or `x̄2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Letter(Arc<str>);

impl Letter {
    pub fn new(token: &str) -> Result<Self> {
        if token.is_empty() {
            return Err(Error::Invalid("empty letter token".into()));
        }
        Ok(Letter(Arc::from(token)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Letter {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Letter::new(&s)
    }
}

impl From<Letter> for String {
    fn from(l: Letter) -> String {
        l.0.to_string()
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered, duplicate-free set of letters. Cloning is cheap.
#[derive(Clone)]
pub struct Alphabet {
    letters: Arc<Vec<Letter>>,
    index: Arc<HashMap<Letter, usize>>,
}

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let letters = tokens
            .into_iter()
            .map(|t| Letter::new(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_letters(letters)
    }

    pub fn from_letters(letters: Vec<Letter>) -> Result<Self> {
        let mut index = HashMap::with_capacity(letters.len());
        for (i, l) in letters.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate letter `{l}`")));
            }
        }
        Ok(Alphabet {
            letters: Arc::new(letters),
            index: Arc::new(index),
        })
    }

    pub fn empty() -> Self {
        Self::from_letters(Vec::new()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> &Letter {
        &self.letters[i]
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        // HashMap<Letter, _> cannot be queried by &str without allocating.
        self.letters.iter().position(|l| l.as_str() == token)
    }

    pub fn index(&self, letter: &Letter) -> Option<usize> {
        self.index.get(letter).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index_of(token).is_some()
    }

    /// Same letters, possibly in a different order.
    pub fn same_set(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && other.letters.iter().all(|l| self.index.contains_key(l))
    }

    /// Parses a word given as a sequence of tokens.
    pub fn word<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Word> {
        tokens
            .iter()
            .map(|t| {
                self.index_of(t.as_ref())
                    .ok_or_else(|| Error::UnknownLetter(t.as_ref().to_string()))
            })
            .collect()
    }

    /// This alphabet followed by the letters of `extra` it does not contain.
    pub fn extended(&self, extra: &[Letter]) -> Alphabet {
        let mut letters = self.letters.as_ref().clone();
        for l in extra {
            if !self.index.contains_key(l) {
                letters.push(l.clone());
            }
        }
        Alphabet::from_letters(letters).expect("deduplicated")
    }

    pub fn render(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.iter()
            .map(|&a| self.letters[a].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// All words of length at most `max_len`, shortlex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for a in 0..self.len() {
                    let mut v = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.letters.iter()).finish()
    }
}
