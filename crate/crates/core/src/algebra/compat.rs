use std::collections::HashMap;
use std::sync::Arc;

use super::{generate, image, Basis, Elem, Monoid, Morphism, RecognizedLanguage};
use crate::automata::Alphabet;
use crate::{ElemSet, Error, Limits, Result};

/// A morphism together with a monoid morphism `s ↦ ⌈s⌉` onto the basis
/// monoid such that `⌈α(w)⌉` is the basis class of `w`.
#[derive(Clone, Debug)]
pub struct CompatibleMorphism {
    morphism: Morphism,
    classes: Classes,
    basis: Arc<Basis>,
}

#[derive(Clone, Debug)]
enum Classes {
    Table(Arc<Vec<Elem>>),
    /// On a square monoid `M × M`: the class of the first component.
    FirstOfSquare(Arc<Vec<Elem>>),
}

impl CompatibleMorphism {
    /// Checks exhaustively that `class_of` is a monoid morphism agreeing with
    /// the canonical morphism on letters.
    pub fn new(morphism: Morphism, class_of: Vec<Elem>, basis: Arc<Basis>) -> Result<Self> {
        if morphism.alphabet() != basis.alphabet() {
            return Err(Error::AlphabetMismatch(
                "morphism and basis alphabets differ".into(),
            ));
        }
        let m = morphism.monoid().clone();
        let b = basis.monoid().clone();
        if class_of.len() != m.size() || class_of.iter().any(|&c| c as usize >= b.size()) {
            return Err(Error::Invalid("class map has the wrong shape".into()));
        }
        if class_of[m.unit() as usize] != b.unit() {
            return Err(Error::Invalid("class map does not preserve the unit".into()));
        }
        for s in m.elements() {
            for t in m.elements() {
                let lhs = class_of[m.mul(s, t) as usize];
                let rhs = b.mul(class_of[s as usize], class_of[t as usize]);
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "class map is not a morphism on ({s}, {t})"
                    )));
                }
            }
        }
        for a in 0..morphism.alphabet().len() {
            if class_of[morphism.letter_image(a) as usize] != basis.canonical().letter_image(a) {
                return Err(Error::Invalid(format!(
                    "class of letter `{}` disagrees with the basis",
                    morphism.alphabet().letter(a)
                )));
            }
        }
        Ok(CompatibleMorphism {
            morphism,
            classes: Classes::Table(Arc::new(class_of)),
            basis,
        })
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        self.morphism.monoid()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.morphism.alphabet()
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    #[inline]
    pub fn class(&self, s: Elem) -> Elem {
        match &self.classes {
            Classes::Table(t) => t[s as usize],
            Classes::FirstOfSquare(t) => {
                let n = self.monoid().square_base().expect("square monoid").size() as Elem;
                t[(s / n) as usize]
            }
        }
    }

    /// The quotient of the image by the coarsest congruence that preserves
    /// classes and membership in each of `accepts`. Returns the quotient and
    /// the images of the accept sets.
    pub fn syntactic_quotient(&self, accepts: &[&ElemSet]) -> (CompatibleMorphism, Vec<ElemSet>) {
        let m = self.monoid();
        let img: Vec<Elem> = image(&self.morphism).iter().collect();
        let mut local = vec![u32::MAX; m.size()];
        for (i, &x) in img.iter().enumerate() {
            local[x as usize] = i as u32;
        }
        let gens: Vec<Elem> = self.morphism.images().to_vec();
        let mut block: Vec<u32> = renumber(img.iter().map(|&x| {
            let mut key = vec![self.class(x)];
            key.extend(accepts.iter().map(|f| f.contains(x) as u32));
            key
        }));
        let mut count = block.iter().max().map_or(0, |&b| b + 1);
        loop {
            let next = renumber(img.iter().enumerate().map(|(i, &x)| {
                let mut key = Vec::with_capacity(1 + 2 * gens.len());
                key.push(block[i]);
                for &g in &gens {
                    key.push(block[local[m.mul(x, g) as usize] as usize]);
                    key.push(block[local[m.mul(g, x) as usize] as usize]);
                }
                key
            }));
            let next_count = next.iter().max().map_or(0, |&b| b + 1);
            block = next;
            if next_count == count {
                break;
            }
            count = next_count;
        }
        let q = count as usize;
        let mut rep = vec![Elem::MAX; q];
        for (i, &x) in img.iter().enumerate() {
            let b = block[i] as usize;
            if rep[b] == Elem::MAX {
                rep[b] = x;
            }
        }
        let of = |x: Elem| block[local[x as usize] as usize];
        let mut flat = Vec::with_capacity(q * q);
        for &x in &rep {
            for &y in &rep {
                flat.push(of(m.mul(x, y)));
            }
        }
        let monoid = Arc::new(Monoid::from_flat(q, of(m.unit()), flat));
        let images = gens.iter().map(|&g| of(g)).collect();
        let morphism = Morphism::new(self.alphabet().clone(), monoid, images)
            .expect("quotient images in range");
        let classes = rep.iter().map(|&x| self.class(x)).collect();
        let lifted = accepts
            .iter()
            .map(|f| f.iter().filter(|&x| local[x as usize] != u32::MAX).map(of).collect())
            .collect();
        let cm = CompatibleMorphism {
            morphism,
            classes: Classes::Table(Arc::new(classes)),
            basis: self.basis.clone(),
        };
        (cm, lifted)
    }

    /// `β(w) = (α(w), α(w))` into `M × M`, with `⌈(s, t)⌉ = ⌈s⌉`.
    pub fn square(&self) -> CompatibleMorphism {
        let base = self.monoid().clone();
        let n = base.size() as Elem;
        let images = self
            .morphism
            .images()
            .iter()
            .map(|&x| x * n + x)
            .collect();
        let table = match &self.classes {
            Classes::Table(t) => t.clone(),
            Classes::FirstOfSquare(_) => panic!("square of a square monoid"),
        };
        CompatibleMorphism {
            morphism: Morphism::new(
                self.alphabet().clone(),
                Arc::new(Monoid::square(base)),
                images,
            )
            .expect("square images in range"),
            classes: Classes::FirstOfSquare(table),
            basis: self.basis.clone(),
        }
    }
}

/// Dense ids in order of first occurrence.
fn renumber(keys: impl Iterator<Item = Vec<u32>>) -> Vec<u32> {
    let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
    keys.map(|k| {
        let n = ids.len() as u32;
        *ids.entry(k).or_insert(n)
    })
    .collect()
}

/// A compatible morphism recognizing both `l1` and `l2`: the reachable part
/// of `M1 × M2 × (basis monoid)`, with the lifted accept sets.
pub fn compatible_product(
    l1: &RecognizedLanguage,
    l2: &RecognizedLanguage,
    basis: &Arc<Basis>,
    limits: &Limits,
) -> Result<(CompatibleMorphism, ElemSet, ElemSet)> {
    let alphabet = l1.alphabet().clone();
    let m1 = l1.morphism.clone();
    let m2 = l2.morphism.reindexed(&alphabet)?;
    let basis = if basis.alphabet() == &alphabet {
        basis.clone()
    } else {
        Arc::new(basis.reindexed(&alphabet)?)
    };
    let canon = basis.canonical();
    let (x1, x2, x3) = (m1.monoid().clone(), m2.monoid().clone(), basis.monoid().clone());
    let gens: Vec<(Elem, Elem, Elem)> = (0..alphabet.len())
        .map(|a| (m1.letter_image(a), m2.letter_image(a), canon.letter_image(a)))
        .collect();
    let gen = generate(
        (x1.unit(), x2.unit(), x3.unit()),
        &gens,
        |p, q| (x1.mul(p.0, q.0), x2.mul(p.1, q.1), x3.mul(p.2, q.2)),
        "compatible product size",
        limits.monoid_size,
        limits,
    )?;
    let table = gen.table(limits)?;
    let monoid = Arc::new(Monoid::from_flat(gen.len(), 0, table));
    let images = (0..alphabet.len()).map(|a| gen.right[a]).collect();
    let morphism = Morphism::new(alphabet, monoid, images)?;
    let classes: Vec<Elem> = gen.elems.iter().map(|t| t.2).collect();
    let accept0 = gen
        .elems
        .iter()
        .enumerate()
        .filter(|(_, t)| l1.accept.contains(t.0))
        .map(|(i, _)| i as Elem)
        .collect();
    let accept1 = gen
        .elems
        .iter()
        .enumerate()
        .filter(|(_, t)| l2.accept.contains(t.1))
        .map(|(i, _)| i as Elem)
        .collect();
    let cm = CompatibleMorphism {
        morphism,
        classes: Classes::Table(Arc::new(classes)),
        basis,
    };
    Ok((cm, accept0, accept1))
}

/// `S` contains `β(A*)` and is closed under multiplication.
pub fn is_good(s: &ElemSet, beta: &CompatibleMorphism) -> bool {
    let m = beta.monoid();
    if !image(beta.morphism()).is_subset(s) {
        return false;
    }
    s.iter()
        .all(|x| s.iter().all(|y| s.contains(m.mul(x, y))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{parse_regex, Nfa};
    use crate::transition_monoid;

    #[test]
    fn trivial_product() {
        let a = Alphabet::new(["a"]).unwrap();
        let l = transition_monoid(&Nfa::universal(a.clone()), &Limits::default()).unwrap();
        let basis = Arc::new(Basis::triv(&a));
        let (cm, f0, f1) = compatible_product(&l, &l, &basis, &Limits::default()).unwrap();
        assert_eq!(cm.monoid().size(), 1);
        assert_eq!(f0, f1);
    }

    #[test]
    fn lifted_accept_sets_recognize_inputs() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let lim = Limits::default();
        let n1 = parse_regex("a(a+b)*", &a).unwrap();
        let n2 = parse_regex("(a+b)*bb", &a).unwrap();
        let l1 = transition_monoid(&n1, &lim).unwrap();
        let l2 = transition_monoid(&n2, &lim).unwrap();
        let basis = Arc::new(Basis::at(&a).unwrap());
        let (cm, f0, f1) = compatible_product(&l1, &l2, &basis, &lim).unwrap();
        let r0 = RecognizedLanguage::new(cm.morphism().clone(), f0).unwrap();
        let r1 = RecognizedLanguage::new(cm.morphism().clone(), f1).unwrap();
        assert!(r0.to_nfa().equivalent(&n1, &lim).unwrap());
        assert!(r1.to_nfa().equivalent(&n2, &lim).unwrap());
        // the class map is the content
        for w in a.words_up_to(4) {
            assert_eq!(cm.class(cm.morphism().eval(&w)), basis.class_of_word(&w));
        }
        // and passes the exhaustive morphism check
        let classes: Vec<Elem> = cm.monoid().elements().map(|s| cm.class(s)).collect();
        assert!(CompatibleMorphism::new(cm.morphism().clone(), classes, basis.clone()).is_ok());
    }

    #[test]
    fn quotient_preserves_languages() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let lim = Limits::default();
        let n1 = parse_regex("(a+b)* a b (a+b)*", &a).unwrap();
        let n2 = parse_regex("b* + (ab)*", &a).unwrap();
        let l1 = transition_monoid(&n1, &lim).unwrap();
        let l2 = transition_monoid(&n2, &lim).unwrap();
        let basis = Arc::new(Basis::at(&a).unwrap());
        let (cm, f0, f1) = compatible_product(&l1, &l2, &basis, &lim).unwrap();
        let (q, fs) = cm.syntactic_quotient(&[&f0, &f1]);
        assert!(q.monoid().size() <= cm.monoid().size());
        q.monoid().validate().unwrap();
        let r0 = RecognizedLanguage::new(q.morphism().clone(), fs[0].clone()).unwrap();
        let r1 = RecognizedLanguage::new(q.morphism().clone(), fs[1].clone()).unwrap();
        assert!(r0.to_nfa().equivalent(&n1, &lim).unwrap());
        assert!(r1.to_nfa().equivalent(&n2, &lim).unwrap());
        let classes: Vec<Elem> = q.monoid().elements().map(|s| q.class(s)).collect();
        assert!(CompatibleMorphism::new(q.morphism().clone(), classes, basis).is_ok());
    }

    #[test]
    fn goodness() {
        let a = Alphabet::new(["a"]).unwrap();
        let m = Morphism::new(a.clone(), Arc::new(Monoid::cyclic(3)), vec![1]).unwrap();
        let basis = Arc::new(Basis::triv(&a));
        let cm = CompatibleMorphism::new(m, vec![0, 0, 0], basis).unwrap();
        assert!(is_good(&ElemSet::full(3), &cm));
        assert!(!is_good(&ElemSet::from_vec(vec![0, 2]), &cm));
        let sq = cm.square();
        assert!(is_good(&image(sq.morphism()).union(&ElemSet::singleton(sq.monoid().unit())), &sq));
    }
}
