use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Elem, Monoid};
use crate::automata::{Alphabet, Nfa};
use crate::{ElemSet, Error, Result};

/// A monoid morphism `A* → M`, given by the images of the letters.
#[derive(Clone, Debug)]
pub struct Morphism {
    alphabet: Alphabet,
    monoid: Arc<Monoid>,
    images: Vec<Elem>,
}

impl Morphism {
    pub fn new(alphabet: Alphabet, monoid: Arc<Monoid>, images: Vec<Elem>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::Invalid(format!(
                "{} letter images for {} letters",
                images.len(),
                alphabet.len()
            )));
        }
        if images.iter().any(|&x| x as usize >= monoid.size()) {
            return Err(Error::Invalid("letter image out of range".into()));
        }
        Ok(Morphism {
            alphabet,
            monoid,
            images,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        &self.monoid
    }

    pub fn letter_image(&self, a: usize) -> Elem {
        self.images[a]
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn eval(&self, w: &[usize]) -> Elem {
        w.iter()
            .fold(self.monoid.unit(), |acc, &a| self.monoid.mul(acc, self.images[a]))
    }

    /// The same morphism over a reordering of its alphabet.
    pub fn reindexed(&self, target: &Alphabet) -> Result<Morphism> {
        if !self.alphabet.same_set(target) {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet, target
            )));
        }
        let images = target
            .letters()
            .iter()
            .map(|l| self.images[self.alphabet.index(l).unwrap()])
            .collect();
        Morphism::new(target.clone(), self.monoid.clone(), images)
    }
}

/// `α(A*)`: the submonoid generated by the letter images.
pub fn image(m: &Morphism) -> ElemSet {
    let monoid = m.monoid();
    let mut seen = vec![false; monoid.size()];
    let mut queue = VecDeque::from([monoid.unit()]);
    seen[monoid.unit() as usize] = true;
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        out.push(x);
        for &g in m.images() {
            let y = monoid.mul(x, g);
            if !seen[y as usize] {
                seen[y as usize] = true;
                queue.push_back(y);
            }
        }
    }
    ElemSet::from_vec(out)
}

/// A language `α^{-1}(F)`.
#[derive(Clone, Debug)]
pub struct RecognizedLanguage {
    pub morphism: Morphism,
    pub accept: ElemSet,
}

impl RecognizedLanguage {
    pub fn new(morphism: Morphism, accept: ElemSet) -> Result<Self> {
        if accept.iter().any(|x| x as usize >= morphism.monoid().size()) {
            return Err(Error::Invalid("accept set outside the monoid".into()));
        }
        Ok(RecognizedLanguage { morphism, accept })
    }

    pub fn accepts(&self, w: &[usize]) -> bool {
        self.accept.contains(self.morphism.eval(w))
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.morphism.alphabet()
    }

    pub fn to_nfa(&self) -> Nfa {
        morphism_to_nfa(self)
    }

    pub fn to_file(&self) -> MorphismFile {
        let monoid = self.morphism.monoid();
        MorphismFile {
            alphabet: self.alphabet().letters().iter().map(|l| l.to_string()).collect(),
            size: monoid.size(),
            unit: monoid.unit(),
            mul: monoid.table(),
            letters: self
                .alphabet()
                .letters()
                .iter()
                .zip(self.morphism.images())
                .map(|(l, &x)| (l.to_string(), x))
                .collect(),
            accept: self.accept.iter().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: MorphismFile = serde_json::from_str(text)?;
        f.into_language()
    }
}

/// The automaton with one state per monoid element: initial state `1_M`,
/// transitions `s --a--> s·α(a)`, final states the accept set.
pub fn morphism_to_nfa(rl: &RecognizedLanguage) -> Nfa {
    let m = &rl.morphism;
    let monoid = m.monoid();
    let k = m.alphabet().len();
    let trans = monoid
        .elements()
        .flat_map(|s| (0..k).map(move |a| (s, a)))
        .map(|(s, a)| (s, a, monoid.mul(s, m.letter_image(a))))
        .collect::<Vec<_>>();
    Nfa::new(
        m.alphabet().clone(),
        monoid.size(),
        [monoid.unit()],
        rl.accept.iter(),
        trans,
    )
    .expect("well-formed by construction")
}

/// On-disk morphism format.
///
/// ```json
/// {"alphabet":["a"],"size":2,"unit":0,"mul":[[0,1],[1,0]],"letters":{"a":1},"accept":[0]}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFile {
    pub alphabet: Vec<String>,
    pub size: usize,
    pub unit: Elem,
    pub mul: Vec<Vec<Elem>>,
    pub letters: BTreeMap<String, Elem>,
    #[serde(default)]
    pub accept: Vec<Elem>,
}

impl MorphismFile {
    pub fn into_language(self) -> Result<RecognizedLanguage> {
        let alphabet = Alphabet::new(&self.alphabet)?;
        if self.mul.len() != self.size {
            return Err(Error::InvalidMonoid(format!(
                "size {} but {} table rows",
                self.size,
                self.mul.len()
            )));
        }
        let monoid = Arc::new(Monoid::from_table(self.unit, self.mul)?);
        if self.letters.len() != alphabet.len() {
            return Err(Error::Invalid("letter images must be total on the alphabet".into()));
        }
        let images = alphabet
            .letters()
            .iter()
            .map(|l| {
                self.letters
                    .get(l.as_str())
                    .copied()
                    .ok_or_else(|| Error::Invalid(format!("no image for letter `{l}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let morphism = Morphism::new(alphabet, monoid, images)?;
        RecognizedLanguage::new(morphism, ElemSet::from_vec(self.accept))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::parse_regex;
    use crate::Limits;

    fn parity() -> RecognizedLanguage {
        let a = Alphabet::new(["a"]).unwrap();
        let m = Morphism::new(a, Arc::new(Monoid::cyclic(2)), vec![1]).unwrap();
        RecognizedLanguage::new(m, ElemSet::singleton(0)).unwrap()
    }

    #[test]
    fn trivial_monoid_accepts_everything() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let m = Morphism::new(a.clone(), Arc::new(Monoid::trivial()), vec![0, 0]).unwrap();
        let rl = RecognizedLanguage::new(m, ElemSet::singleton(0)).unwrap();
        let n = morphism_to_nfa(&rl);
        assert!(n.equivalent(&Nfa::universal(a), &Limits::default()).unwrap());
    }

    #[test]
    fn parity_morphism_nfa() {
        let rl = parity();
        let n = morphism_to_nfa(&rl);
        assert_eq!(n.state_count(), 2);
        let expected = parse_regex("(aa)*", rl.alphabet()).unwrap();
        assert!(n.equivalent(&expected, &Limits::default()).unwrap());
    }

    #[test]
    fn image_of_empty_alphabet_is_unit() {
        let m = Morphism::new(Alphabet::empty(), Arc::new(Monoid::cyclic(3)), vec![]).unwrap();
        assert_eq!(image(&m), ElemSet::singleton(0));
    }

    #[test]
    fn file_round_trip() {
        let rl = parity();
        let text = rl.to_json();
        assert_eq!(
            text,
            r#"{"alphabet":["a"],"size":2,"unit":0,"mul":[[0,1],[1,0]],"letters":{"a":1},"accept":[0]}"#
        );
        let back = RecognizedLanguage::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn file_rejects_non_associative() {
        let text = r#"{"alphabet":["a"],"size":3,"unit":0,"mul":[[0,1,2],[1,2,1],[2,2,1]],"letters":{"a":1},"accept":[]}"#;
        assert!(matches!(RecognizedLanguage::from_json(text), Err(Error::InvalidMonoid(_))));
    }
}
