use serde::{Deserialize, Serialize};

use super::{BasisSpec, Closure, Level};
use crate::algebra::{Elem, RecognizedLanguage};
use crate::automata::{Alphabet, Nfa};
use crate::{ElemSet, Error, Limits, Result};

/// One entry of a marked product: a block (union of basis classes, given by
/// basis-monoid elements) or a letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CertItem {
    Block(Vec<Elem>),
    Letter(String),
}

/// A separator candidate. `Pol` is a union of marked products
/// `[block, letter, block, ..., letter, block]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertExpr {
    Pol(Vec<Vec<CertItem>>),
    And(Vec<CertExpr>),
    Or(Vec<CertExpr>),
    Not(Box<CertExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub level: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub basis: Option<String>,
    pub expr: CertExpr,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(text)?)
    }

    fn level(&self) -> Result<Level> {
        let basis = self.basis.as_deref().map(BasisSpec::parse).transpose()?;
        let level = Level::parse(&self.level, basis)?;
        if let (Some(b), Level::StHalf | Level::StOne | Level::StThreeHalf | Level::StTwo) =
            (&self.basis, &level)
        {
            if *b != level.desugar().1.to_string() {
                return Err(Error::Invalid(format!(
                    "basis `{b}` does not match level `{}`",
                    self.level
                )));
            }
        }
        Ok(level)
    }

    /// The separator as an automaton over `alphabet`.
    pub fn to_nfa(&self, alphabet: &Alphabet, limits: &Limits) -> Result<Nfa> {
        let level = self.level()?;
        let (closure, spec) = level.desugar();
        if closure == Closure::Pol && !matches!(self.expr, CertExpr::Pol(_)) {
            return Err(Error::Invalid(
                "a polynomial level needs a union of marked products".into(),
            ));
        }
        let basis = spec.build(alphabet)?;
        let block = |ids: &[Elem]| -> Result<Nfa> {
            if ids.iter().any(|&c| c as usize >= basis.monoid().size()) {
                return Err(Error::Invalid(format!("block {ids:?} outside the basis monoid")));
            }
            let rl = RecognizedLanguage::new(
                basis.canonical().clone(),
                ElemSet::from_vec(ids.to_vec()),
            )?;
            Ok(rl.to_nfa().trim())
        };
        let letter = |tok: &str| -> Result<Nfa> {
            let a = alphabet
                .index_of(tok)
                .ok_or_else(|| Error::UnknownLetter(tok.to_string()))?;
            Ok(Nfa::word(alphabet.clone(), &[a]))
        };
        fn build(
            e: &CertExpr,
            alphabet: &Alphabet,
            limits: &Limits,
            block: &dyn Fn(&[Elem]) -> Result<Nfa>,
            letter: &dyn Fn(&str) -> Result<Nfa>,
        ) -> Result<Nfa> {
            match e {
                CertExpr::Pol(products) => {
                    let mut acc = Nfa::empty_language(alphabet.clone());
                    for p in products {
                        if p.len() % 2 == 0 {
                            return Err(Error::Invalid("a product must start and end with a block".into()));
                        }
                        let mut cur: Option<Nfa> = None;
                        for (i, item) in p.iter().enumerate() {
                            let part = match (i % 2, item) {
                                (0, CertItem::Block(ids)) => block(ids)?,
                                (1, CertItem::Letter(tok)) => letter(tok)?,
                                _ => {
                                    return Err(Error::Invalid(
                                        "products alternate blocks and letters".into(),
                                    ))
                                }
                            };
                            cur = Some(match cur {
                                None => part,
                                Some(c) => c.concat(&part)?,
                            });
                        }
                        acc = acc.union(&cur.expect("nonempty product"))?;
                    }
                    Ok(acc)
                }
                CertExpr::And(args) => {
                    let mut acc = Nfa::universal(alphabet.clone());
                    for a in args {
                        acc = acc.intersect(&build(a, alphabet, limits, block, letter)?)?.trim();
                    }
                    Ok(acc)
                }
                CertExpr::Or(args) => {
                    let mut acc = Nfa::empty_language(alphabet.clone());
                    for a in args {
                        acc = acc.union(&build(a, alphabet, limits, block, letter)?)?;
                    }
                    Ok(acc)
                }
                CertExpr::Not(a) => build(a, alphabet, limits, block, letter)?.complement(limits),
            }
        }
        build(&self.expr, alphabet, limits, &block, &letter)
    }
}

/// Whether the certificate denotes a language `K` with `L(n1) ⊆ K` and
/// `K ∩ L(n2) = ∅`.
pub fn verify_certificate(c: &Certificate, n1: &Nfa, n2: &Nfa, limits: &Limits) -> Result<bool> {
    let k = c.to_nfa(n1.alphabet(), limits)?;
    Ok(k.includes(n1, limits)? && k.intersect(n2)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::parse_regex;

    #[test]
    fn universal_separates_from_empty() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let c = Certificate {
            level: "st-1/2".into(),
            basis: None,
            expr: CertExpr::Pol(vec![vec![CertItem::Block(vec![0])]]),
        };
        let n1 = parse_regex("a b* a", &a).unwrap();
        let lim = Limits::default();
        assert!(verify_certificate(&c, &n1, &Nfa::empty_language(a.clone()), &lim).unwrap());
        assert!(!verify_certificate(&c, &n1, &n1, &lim).unwrap());
    }

    #[test]
    fn json_shape() {
        let text = r#"{"level":"st-3/2","expr":{"pol":[[[0],"a",[0,1,2,3]]]}}"#;
        let c = Certificate::from_json(text).unwrap();
        assert_eq!(c.to_json(), text);
        let a = Alphabet::new(["a", "b"]).unwrap();
        let lim = Limits::default();
        let n1 = parse_regex("a (a+b)*", &a).unwrap();
        let n2 = parse_regex("b (a+b)*", &a).unwrap();
        assert!(verify_certificate(&c, &n1, &n2, &lim).unwrap());
    }

    #[test]
    fn pol_level_rejects_complement() {
        let c = Certificate {
            level: "st-1/2".into(),
            basis: None,
            expr: CertExpr::Not(Box::new(CertExpr::Pol(vec![]))),
        };
        let a = Alphabet::new(["a"]).unwrap();
        assert!(c.to_nfa(&a, &Limits::default()).is_err());
    }
}
