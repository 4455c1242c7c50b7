use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// A literal over `x_1, ..., x_n` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Lit {
        Lit {
            var,
            positive: false,
        }
    }
}

/// A prenex CNF formula `Q_n x_n ... Q_1 x_1 φ`.
///
/// `quantifiers[i - 1]` is `Q_i`, so `x_1` is the innermost variable.
/// `names[i - 1]` is the variable number of `x_i` in the source file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qbf {
    pub quantifiers: Vec<Quantifier>,
    pub clauses: Vec<Vec<Lit>>,
    pub names: Vec<u32>,
}

impl Qbf {
    /// Builds a formula with identity variable names.
    pub fn new(quantifiers: Vec<Quantifier>, clauses: Vec<Vec<Lit>>) -> Result<Qbf> {
        let n = quantifiers.len();
        let q = Qbf {
            quantifiers,
            clauses,
            names: (1..=n as u32).collect(),
        };
        q.validate()?;
        Ok(q)
    }

    pub fn var_count(&self) -> usize {
        self.quantifiers.len()
    }

    fn validate(&self) -> Result<()> {
        for c in &self.clauses {
            if c.is_empty() {
                return Err(Error::Invalid("empty clause".into()));
            }
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var > self.var_count()) {
                return Err(Error::Invalid(format!("literal on undeclared variable {}", l.var)));
            }
        }
        Ok(())
    }

    /// QDIMACS text, quantifier blocks outermost first, using the source
    /// variable numbers.
    pub fn to_qdimacs(&self) -> String {
        let n = self.var_count();
        let max = self.names.iter().copied().max().unwrap_or(0);
        let mut out = format!("p cnf {max} {}\n", self.clauses.len());
        let mut i = n;
        while i > 0 {
            let q = self.quantifiers[i - 1];
            let mut line = String::from(match q {
                Quantifier::Exists => "e",
                Quantifier::Forall => "a",
            });
            while i > 0 && self.quantifiers[i - 1] == q {
                let _ = write!(line, " {}", self.names[i - 1]);
                i -= 1;
            }
            let _ = writeln!(out, "{line} 0");
        }
        for c in &self.clauses {
            for l in c {
                let v = self.names[l.var - 1] as i64;
                let _ = write!(out, "{} ", if l.positive { v } else { -v });
            }
            out.push_str("0\n");
        }
        out
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos: line,
        msg: msg.into(),
    }
}

/// Parses QDIMACS. Quantifier lines come outermost first; the last
/// quantified variable becomes `x_1`. Error positions are line numbers.
pub fn parse_qdimacs(text: &str) -> Result<Qbf> {
    let mut header: Option<(usize, usize)> = None;
    let mut order: Vec<(u32, Quantifier)> = Vec::new();
    let mut raw_clauses: Vec<Vec<i64>> = Vec::new();
    let mut pending: Vec<i64> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let no = no + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let first = toks.next().expect("nonempty line");
        match first {
            "p" => {
                if header.is_some() {
                    return Err(syntax(no, "duplicate header"));
                }
                let rest: Vec<&str> = toks.collect();
                if rest.len() != 3 || rest[0] != "cnf" {
                    return Err(syntax(no, "expected `p cnf <vars> <clauses>`"));
                }
                let v = rest[1].parse().map_err(|_| syntax(no, "bad variable count"))?;
                let c = rest[2].parse().map_err(|_| syntax(no, "bad clause count"))?;
                header = Some((v, c));
            }
            "e" | "a" => {
                if header.is_none() {
                    return Err(syntax(no, "quantifier before header"));
                }
                if !raw_clauses.is_empty() || !pending.is_empty() {
                    return Err(syntax(no, "quantifier after a clause: not prenex"));
                }
                let q = if first == "e" {
                    Quantifier::Exists
                } else {
                    Quantifier::Forall
                };
                let mut closed = false;
                for t in toks {
                    let v: u32 = t.parse().map_err(|_| syntax(no, format!("bad variable `{t}`")))?;
                    if v == 0 {
                        closed = true;
                        break;
                    }
                    order.push((v, q));
                }
                if !closed {
                    return Err(syntax(no, "quantifier line must end with 0"));
                }
            }
            _ => {
                if header.is_none() {
                    return Err(syntax(no, "clause before header"));
                }
                for t in std::iter::once(first).chain(toks) {
                    let x: i64 = t.parse().map_err(|_| syntax(no, format!("bad literal `{t}`")))?;
                    if x == 0 {
                        raw_clauses.push(std::mem::take(&mut pending));
                    } else {
                        pending.push(x);
                    }
                }
            }
        }
    }
    let (max_var, clause_count) = header.ok_or_else(|| syntax(0, "missing header"))?;
    if !pending.is_empty() {
        return Err(syntax(0, "unterminated clause"));
    }
    if raw_clauses.len() != clause_count {
        return Err(syntax(
            0,
            format!("header announces {clause_count} clauses, found {}", raw_clauses.len()),
        ));
    }
    let n = order.len();
    let mut index: BTreeMap<u32, usize> = BTreeMap::new();
    for (pos, &(v, _)) in order.iter().enumerate() {
        if v as usize > max_var {
            return Err(syntax(0, format!("variable {v} exceeds the header")));
        }
        if index.insert(v, n - pos).is_some() {
            return Err(syntax(0, format!("variable {v} quantified twice")));
        }
    }
    let clauses = raw_clauses
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|x| {
                    let v = x.unsigned_abs() as u32;
                    let var = *index
                        .get(&v)
                        .ok_or_else(|| Error::Invalid(format!("free variable {v}")))?;
                    Ok(Lit { var, positive: x > 0 })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let qbf = Qbf {
        quantifiers: order.iter().rev().map(|&(_, q)| q).collect(),
        clauses,
        names: order.iter().rev().map(|&(v, _)| v).collect(),
    };
    qbf.validate()?;
    Ok(qbf)
}

/// Truth value by expansion over all quantifiers.
pub fn eval_qbf(q: &Qbf) -> bool {
    assert!(q.var_count() <= 20, "brute force is limited to 20 variables");
    fn go(q: &Qbf, i: usize, val: &mut Vec<bool>) -> bool {
        if i == 0 {
            return q
                .clauses
                .iter()
                .all(|c| c.iter().any(|l| val[l.var - 1] == l.positive));
        }
        let branch = |b: bool, val: &mut Vec<bool>| {
            val[i - 1] = b;
            go(q, i - 1, val)
        };
        match q.quantifiers[i - 1] {
            Quantifier::Exists => branch(false, val) || branch(true, val),
            Quantifier::Forall => branch(false, val) && branch(true, val),
        }
    }
    go(q, q.var_count(), &mut vec![false; q.var_count()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple() {
        let q = parse_qdimacs("p cnf 1 1\ne 1 0\n1 0\n").unwrap();
        assert_eq!(q.quantifiers, [Quantifier::Exists]);
        assert_eq!(q.clauses, [vec![Lit::pos(1)]]);
        assert!(eval_qbf(&q));
        let q = parse_qdimacs("p cnf 1 1\na 1 0\n1 -1 0\n").unwrap();
        assert_eq!(q.clauses, [vec![Lit::pos(1), Lit::neg(1)]]);
        assert!(eval_qbf(&q));
    }

    #[test]
    fn outermost_first_is_reversed() {
        let q = parse_qdimacs("p cnf 2 1\na 2 0\ne 1 0\n1 -2 0\n").unwrap();
        // x_2 is the outer ∀ (source 2), x_1 the inner ∃ (source 1)
        assert_eq!(q.quantifiers, [Quantifier::Exists, Quantifier::Forall]);
        assert_eq!(q.names, [1, 2]);
        let q = parse_qdimacs("p cnf 2 1\ne 1 0\na 2 0\n1 0\n").unwrap();
        assert_eq!(q.names, [2, 1]);
        assert_eq!(q.clauses, [vec![Lit::pos(2)]]);
        // ∃x ∀y (x) is true
        assert!(eval_qbf(&q));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_qdimacs("p cnf 2 1\ne 1 0\n2 0\n").is_err());
        assert!(parse_qdimacs("p cnf 1 1\n1 0\ne 1 0\n").is_err());
        assert!(parse_qdimacs("p cnf 1 2\ne 1 0\n1 0\n").is_err());
        assert!(parse_qdimacs("e 1 0\n").is_err());
    }

    #[test]
    fn evaluation() {
        use Quantifier::*;
        let f = |q, c| eval_qbf(&Qbf::new(vec![q], c).unwrap());
        assert!(!f(Forall, vec![vec![Lit::pos(1)]]));
        assert!(!f(Exists, vec![vec![Lit::pos(1)], vec![Lit::neg(1)]]));
    }

    #[test]
    fn print_round_trip() {
        let text = "p cnf 3 2\ne 3 1 0\na 2 0\n1 -2 0\n3 0\n";
        let q = parse_qdimacs(text).unwrap();
        assert_eq!(q.to_qdimacs(), text);
        assert_eq!(parse_qdimacs(&q.to_qdimacs()).unwrap(), q);
    }
}
