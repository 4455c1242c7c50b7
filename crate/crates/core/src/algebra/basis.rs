use std::fmt;
use std::sync::Arc;

use super::{image, Elem, Monoid, Morphism};
use crate::automata::{Alphabet, Letter};
use crate::{Error, Result};

/// Which finite quotienting Boolean algebra a [`Basis`] stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// `{∅, A*}`.
    Triv,
    /// Alphabet testable languages: Boolean combinations of `A*aA*`.
    At,
    /// Alphabet testable over a sub-alphabet `A0`, letters outside `A0`
    /// erased first.
    AtRestricted(Vec<Letter>),
    /// A user-supplied canonical morphism (the string names its source).
    User(String),
}

/// A finite basis, represented by its canonical morphism `A* → A*/∼`.
#[derive(Clone, Debug)]
pub struct Basis {
    kind: BasisKind,
    canonical: Morphism,
}

/// The two letters of the tagging alphabet `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagLetters {
    pub zero: Letter,
    pub one: Letter,
}

impl TagLetters {
    /// `0` and `1`, or `_t0` and `_t1` (with more underscores as needed)
    /// when those collide with `alphabet`.
    pub fn for_alphabet(alphabet: &Alphabet) -> TagLetters {
        let mut prefix = String::new();
        loop {
            let (z, o) = if prefix.is_empty() {
                ("0".to_string(), "1".to_string())
            } else {
                (format!("{prefix}t0"), format!("{prefix}t1"))
            };
            if !alphabet.contains(&z) && !alphabet.contains(&o) {
                return TagLetters {
                    zero: Letter::new(&z).unwrap(),
                    one: Letter::new(&o).unwrap(),
                };
            }
            prefix.push('_');
        }
    }

    pub fn letters(&self) -> [Letter; 2] {
        [self.zero.clone(), self.one.clone()]
    }
}

fn subset_morphism(alphabet: &Alphabet, kept: &[Letter]) -> Result<Morphism> {
    if kept.len() > 16 {
        return Err(Error::Limit {
            what: "alphabet testable basis letters",
            cap: 16,
        });
    }
    let images = alphabet
        .letters()
        .iter()
        .map(|l| match kept.iter().position(|k| k == l) {
            Some(i) => 1 << i,
            None => 0,
        })
        .collect();
    Morphism::new(
        alphabet.clone(),
        Arc::new(Monoid::semilattice(kept.len())),
        images,
    )
}

impl Basis {
    pub fn triv(alphabet: &Alphabet) -> Basis {
        let images = vec![0; alphabet.len()];
        Basis {
            kind: BasisKind::Triv,
            canonical: Morphism::new(alphabet.clone(), Arc::new(Monoid::trivial()), images)
                .unwrap(),
        }
    }

    pub fn at(alphabet: &Alphabet) -> Result<Basis> {
        Ok(Basis {
            kind: BasisKind::At,
            canonical: subset_morphism(alphabet, alphabet.letters())?,
        })
    }

    pub fn at_restricted(alphabet: &Alphabet, kept: &[Letter]) -> Result<Basis> {
        if let Some(l) = kept.iter().find(|l| alphabet.index(l).is_none()) {
            return Err(Error::Invalid(format!(
                "restricted letter `{l}` not in the alphabet"
            )));
        }
        Ok(Basis {
            kind: BasisKind::AtRestricted(kept.to_vec()),
            canonical: subset_morphism(alphabet, kept)?,
        })
    }

    /// A user basis: any surjective morphism onto a finite monoid.
    pub fn user(source: &str, canonical: Morphism) -> Result<Basis> {
        canonical.monoid().validate()?;
        if image(&canonical).len() != canonical.monoid().size() {
            return Err(Error::InvalidMonoid(
                "basis morphism is not surjective".into(),
            ));
        }
        Ok(Basis {
            kind: BasisKind::User(source.to_string()),
            canonical,
        })
    }

    /// Parses `triv`, `at`, `at:a,b` (restricted). `user:` specs need file
    /// access and are resolved by the caller through [`Basis::user`].
    pub fn parse_spec(spec: &str, alphabet: &Alphabet) -> Result<Basis> {
        match spec {
            "triv" => Ok(Basis::triv(alphabet)),
            "at" => Basis::at(alphabet),
            _ => {
                if let Some(rest) = spec.strip_prefix("at:") {
                    let kept = rest
                        .split(',')
                        .filter(|s| !s.is_empty())
                        .map(Letter::new)
                        .collect::<Result<Vec<_>>>()?;
                    Basis::at_restricted(alphabet, &kept)
                } else {
                    Err(Error::Invalid(format!("unknown basis spec `{spec}`")))
                }
            }
        }
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn canonical(&self) -> &Morphism {
        &self.canonical
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        self.canonical.monoid()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.canonical.alphabet()
    }

    pub fn class_of_word(&self, w: &[usize]) -> Elem {
        self.canonical.eval(w)
    }

    /// AT-style bases, whose classes are letter contents.
    pub fn is_alphabet_testable(&self) -> bool {
        matches!(self.kind, BasisKind::At | BasisKind::AtRestricted(_))
    }

    /// Same basis over the same alphabet.
    pub fn same_as(&self, other: &Basis) -> bool {
        self.kind == other.kind && self.alphabet() == other.alphabet()
    }

    /// The same basis over a reordering of the alphabet.
    pub fn reindexed(&self, target: &Alphabet) -> Result<Basis> {
        Ok(Basis {
            kind: self.kind.clone(),
            canonical: self.canonical.reindexed(target)?,
        })
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::Triv => write!(f, "triv"),
            BasisKind::At => write!(f, "at"),
            BasisKind::AtRestricted(ls) => {
                let toks: Vec<&str> = ls.iter().map(|l| l.as_str()).collect();
                write!(f, "at:{}", toks.join(","))
            }
            BasisKind::User(src) => write!(f, "user:{src}"),
        }
    }
}

/// The canonical morphism of a built-in basis kind over `alphabet`.
pub fn canonical_basis_morphism(kind: &BasisKind, alphabet: &Alphabet) -> Result<Morphism> {
    let b = match kind {
        BasisKind::Triv => Basis::triv(alphabet),
        BasisKind::At => Basis::at(alphabet)?,
        BasisKind::AtRestricted(kept) => Basis::at_restricted(alphabet, kept)?,
        BasisKind::User(_) => {
            return Err(Error::Invalid(
                "user bases are loaded from their morphism file".into(),
            ))
        }
    };
    Ok(b.canonical)
}

/// The basis over `A ∪ E` whose classes are those of `b` after erasing the
/// tagging letters.
pub fn extend_basis_e(b: &Basis, tags: &TagLetters) -> Result<Basis> {
    let a = b.alphabet();
    for t in tags.letters() {
        if a.index(&t).is_some() {
            return Err(Error::Invalid(format!(
                "tagging letter `{t}` already in the alphabet"
            )));
        }
    }
    let ext = a.extended(&tags.letters());
    match b.kind() {
        BasisKind::Triv => Ok(Basis::triv(&ext)),
        BasisKind::At => Basis::at_restricted(&ext, a.letters()),
        BasisKind::AtRestricted(kept) => Basis::at_restricted(&ext, kept),
        BasisKind::User(_) => Err(Error::Invalid(
            "only triv and at bases can be extended".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn at_class_is_content() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let b = Basis::at(&a).unwrap();
        let abba = a.word(&["a", "b", "b", "a"]).unwrap();
        assert_eq!(b.class_of_word(&abba), 0b11);
        assert_eq!(b.monoid().j_depth(), 3);
    }

    #[test]
    fn restricted_erases_other_letters() {
        let a = Alphabet::new(["a", "b", "0", "1"]).unwrap();
        let kept = [Letter::new("a").unwrap(), Letter::new("b").unwrap()];
        let b = Basis::at_restricted(&a, &kept).unwrap();
        assert_eq!(b.class_of_word(&a.word(&["0", "a", "1"]).unwrap()), 0b01);
    }

    #[test]
    fn extension() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let tags = TagLetters::for_alphabet(&a);
        assert_eq!(tags.zero.as_str(), "0");
        let ext = extend_basis_e(&Basis::at(&a).unwrap(), &tags).unwrap();
        assert_eq!(ext.kind(), &BasisKind::AtRestricted(a.letters().to_vec()));
        let w = ext.alphabet().word(&["0", "1", "a"]).unwrap();
        assert_eq!(ext.class_of_word(&w), 0b01);

        let t = extend_basis_e(&Basis::triv(&Alphabet::new(["a"]).unwrap()), &tags).unwrap();
        assert_eq!(t.kind(), &BasisKind::Triv);
        assert_eq!(t.alphabet().len(), 3);
    }

    #[test]
    fn tag_letters_renamed_on_collision() {
        let a = Alphabet::new(["0", "a"]).unwrap();
        let tags = TagLetters::for_alphabet(&a);
        assert_eq!(tags.zero.as_str(), "_t0");
        assert!(extend_basis_e(&Basis::triv(&a), &TagLetters::for_alphabet(&Alphabet::empty())).is_err());
    }

    #[test]
    fn user_basis_must_be_surjective() {
        let a = Alphabet::new(["a"]).unwrap();
        let m = Morphism::new(a.clone(), Arc::new(Monoid::cyclic(2)), vec![0]).unwrap();
        assert!(Basis::user("x", m).is_err());
        let m = Morphism::new(a, Arc::new(Monoid::cyclic(2)), vec![1]).unwrap();
        assert!(Basis::user("parity", m).is_ok());
    }
}
