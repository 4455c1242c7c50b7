use std::fmt;

use super::{Alphabet, EpsNfa, Letter, Nfa};
use crate::{Error, Result};

/// Regular expressions over symbolic letters.
///
/// Concrete syntax: union `+`, concatenation by juxtaposition, postfix `*`,
/// grouping `( )`, `_EPS_` for the empty word, `_EMPTY_` for the empty
/// language, `[x,y,z]` for a one-letter alternative. Bare letters are matched
/// greedily against the alphabet (longest token first); letters containing
/// reserved characters are written in double quotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Eps,
    Letter(Letter),
    Set(Vec<Letter>),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
}

const RESERVED: &[char] = &['+', '*', '(', ')', '[', ']', ',', '"'];

fn is_bare_char(c: char) -> bool {
    !c.is_whitespace() && !RESERVED.contains(&c)
}

/// Compiles `text` to an ε-free automaton over `alphabet`.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Nfa> {
    Regex::parse(text, alphabet)?.compile(alphabet)
}

impl Regex {
    pub fn letter(token: &str) -> Regex {
        Regex::Letter(Letter::new(token).expect("nonempty token"))
    }

    pub fn set<S: AsRef<str>>(tokens: &[S]) -> Regex {
        Regex::Set(
            tokens
                .iter()
                .map(|t| Letter::new(t.as_ref()).expect("nonempty token"))
                .collect(),
        )
    }

    pub fn star(self) -> Regex {
        Regex::Star(Box::new(self))
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Regex> {
        let mut p = Parser {
            chars: text.char_indices().collect(),
            pos: 0,
            alphabet,
        };
        let r = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.err("unexpected character"));
        }
        Ok(r)
    }

    /// Thompson construction followed by ε-elimination.
    /// Number of nodes of the expression tree.
    pub fn size(&self) -> usize {
        match self {
            Regex::Empty | Regex::Eps | Regex::Letter(_) | Regex::Set(_) => 1,
            Regex::Concat(v) | Regex::Union(v) => 1 + v.iter().map(Regex::size).sum::<usize>(),
            Regex::Star(r) => 1 + r.size(),
        }
    }

    pub fn compile(&self, alphabet: &Alphabet) -> Result<Nfa> {
        let mut b = EpsNfa::new(alphabet.clone());
        let (s, e) = self.build(&mut b)?;
        b.finish(s, e)
    }

    pub(crate) fn build(&self, b: &mut EpsNfa) -> Result<(u32, u32)> {
        let lookup = |b: &EpsNfa, l: &Letter| {
            b.alphabet()
                .index(l)
                .ok_or_else(|| Error::UnknownLetter(l.to_string()))
        };
        Ok(match self {
            Regex::Empty => b.nothing(),
            Regex::Eps => b.epsilon(),
            Regex::Letter(l) => {
                let a = lookup(b, l)?;
                b.letters(&[a])
            }
            Regex::Set(ls) => {
                let idx = ls.iter().map(|l| lookup(b, l)).collect::<Result<Vec<_>>>()?;
                b.letters(&idx)
            }
            Regex::Concat(parts) => {
                let frags = parts.iter().map(|r| r.build(b)).collect::<Result<Vec<_>>>()?;
                b.concat(&frags)
            }
            Regex::Union(parts) => {
                let frags = parts.iter().map(|r| r.build(b)).collect::<Result<Vec<_>>>()?;
                b.alt(&frags)
            }
            Regex::Star(inner) => {
                let (s, e) = inner.build(b)?;
                b.star(s, e)
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(v) if v.len() > 1 => 0,
            Regex::Concat(v) if v.len() > 1 => 1,
            _ => 2,
        }
    }
}

fn write_letter(f: &mut fmt::Formatter<'_>, l: &Letter) -> fmt::Result {
    if l.as_str().chars().all(is_bare_char) && !l.as_str().starts_with('_') {
        write!(f, "{l}")
    } else {
        write!(f, "\"{l}\"")
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |f: &mut fmt::Formatter<'_>, r: &Regex, min: u8| {
            if r.precedence() < min {
                write!(f, "({r})")
            } else {
                write!(f, "{r}")
            }
        };
        match self {
            Regex::Empty => write!(f, "_EMPTY_"),
            Regex::Eps => write!(f, "_EPS_"),
            Regex::Letter(l) => write_letter(f, l),
            Regex::Set(ls) => {
                write!(f, "[")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write_letter(f, l)?;
                }
                write!(f, "]")
            }
            Regex::Concat(parts) => {
                if parts.is_empty() {
                    return write!(f, "_EPS_");
                }
                for (i, r) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    paren(f, r, 2)?;
                }
                Ok(())
            }
            Regex::Union(parts) => {
                if parts.is_empty() {
                    return write!(f, "_EMPTY_");
                }
                for (i, r) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    paren(f, r, 1)?;
                }
                Ok(())
            }
            Regex::Star(inner) => {
                paren(f, inner, 3)?;
                write!(f, "*")
            }
        }
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        let at = self
            .chars
            .get(self.pos)
            .map(|&(b, _)| b)
            .unwrap_or_else(|| self.chars.last().map(|&(b, c)| b + c.len_utf8()).unwrap_or(0));
        Error::Syntax {
            pos: at,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Regex> {
        let mut alts = vec![self.term()?];
        while self.eat('+') {
            alts.push(self.term()?);
        }
        Ok(if alts.len() == 1 {
            alts.pop().unwrap()
        } else {
            Regex::Union(alts)
        })
    }

    fn term(&mut self) -> Result<Regex> {
        let mut parts = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some('+') | Some(')') => break,
                _ => parts.push(self.factor()?),
            }
        }
        match parts.len() {
            0 => Err(self.err("empty expression (use _EPS_ for the empty word)")),
            1 => Ok(parts.pop().unwrap()),
            _ => Ok(Regex::Concat(parts)),
        }
    }

    fn factor(&mut self) -> Result<Regex> {
        let mut r = self.atom()?;
        while self.eat('*') {
            r = Regex::Star(Box::new(r));
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let r = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(r)
            }
            Some('[') => {
                self.pos += 1;
                let mut ls = vec![self.letter()?];
                while self.eat(',') {
                    ls.push(self.letter()?);
                }
                if !self.eat(']') {
                    return Err(self.err("expected `]`"));
                }
                Ok(Regex::Set(ls))
            }
            Some(_) => {
                if self.keyword("_EPS_") {
                    return Ok(Regex::Eps);
                }
                if self.keyword("_EMPTY_") {
                    return Ok(Regex::Empty);
                }
                Ok(Regex::Letter(self.letter()?))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        let n = kw.chars().count();
        if self.pos + n > self.chars.len() {
            return false;
        }
        let s: String = self.chars[self.pos..self.pos + n].iter().map(|&(_, c)| c).collect();
        if s == kw {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn letter(&mut self) -> Result<Letter> {
        self.skip_ws();
        match self.peek() {
            Some('"') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c != '"') {
                    self.pos += 1;
                }
                if self.peek() != Some('"') {
                    return Err(self.err("unterminated quoted letter"));
                }
                let tok: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                self.pos += 1;
                self.known(&tok, start)
            }
            Some(c) if is_bare_char(c) => {
                let start = self.pos;
                let mut end = start;
                while end < self.chars.len() && is_bare_char(self.chars[end].1) {
                    end += 1;
                }
                let run: String = self.chars[start..end].iter().map(|&(_, c)| c).collect();
                // longest alphabet token that prefixes the bare run
                let best = self
                    .alphabet
                    .letters()
                    .iter()
                    .filter(|l| run.starts_with(l.as_str()))
                    .max_by_key(|l| l.as_str().len());
                match best {
                    Some(l) => {
                        self.pos += l.as_str().chars().count();
                        Ok(l.clone())
                    }
                    None => Err(Error::UnknownLetter(run)),
                }
            }
            _ => Err(self.err("expected a letter")),
        }
    }

    fn known(&self, tok: &str, _start: usize) -> Result<Letter> {
        let l = Letter::new(tok)?;
        if self.alphabet.index(&l).is_none() {
            return Err(Error::UnknownLetter(tok.to_string()));
        }
        Ok(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Limits;

    #[test]
    fn parity_language() {
        let a = Alphabet::new(["a"]).unwrap();
        let n = parse_regex("(aa)*", &a).unwrap();
        for len in 0..8 {
            assert_eq!(n.accepts(&vec![0; len]), len % 2 == 0);
        }
    }

    #[test]
    fn eps_only() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let n = parse_regex("_EPS_", &a).unwrap();
        for w in a.words_up_to(3) {
            assert_eq!(n.accepts(&w), w.is_empty());
        }
    }

    #[test]
    fn letter_set_alternative() {
        // enumerate all words of length <= 2: exactly aa and ba
        let a = Alphabet::new(["a", "b"]).unwrap();
        let n = parse_regex("[a,b]a", &a).unwrap();
        let accepted: Vec<String> = a
            .words_up_to(2)
            .into_iter()
            .filter(|w| n.accepts(w))
            .map(|w| a.render(&w))
            .collect();
        assert_eq!(accepted, vec!["a a", "b a"]);
    }

    #[test]
    fn multi_character_letters() {
        let a = Alphabet::new(["#_1", "x1", "x̄1", "$"]).unwrap();
        let n = parse_regex("(#_1 [x1,x̄1])* \"$\"", &a).unwrap();
        assert!(n.accepts_tokens(&["#_1", "x̄1", "$"]).unwrap());
        assert!(!n.accepts_tokens(&["#_1", "$"]).unwrap());
    }

    #[test]
    fn errors_carry_position() {
        let a = Alphabet::new(["a"]).unwrap();
        match Regex::parse("(a", &a) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Regex::parse("ab", &a), Err(Error::UnknownLetter(_))));
        assert!(matches!(Regex::parse("a+", &a), Err(Error::Syntax { .. })));
    }

    #[test]
    fn display_reparses() {
        let a = Alphabet::new(["a", "b", "ab"]).unwrap();
        let r = Regex::parse("(a b + ab)* [a,b] _EPS_", &a).unwrap();
        let again = Regex::parse(&r.to_string(), &a).unwrap();
        let l = Limits::default();
        assert!(r.compile(&a).unwrap().equivalent(&again.compile(&a).unwrap(), &l).unwrap());
    }
}
