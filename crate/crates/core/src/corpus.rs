//! Seeded instance generators shared by tests, the CLI self-test and the
//! benchmarks. Every generator is deterministic given its RNG.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{generate, image, Basis, CompatibleMorphism, Elem, Monoid, Morphism};
use crate::automata::{Alphabet, Letter, Nfa, Regex};
use crate::separation::{CertExpr, CertItem, Certificate};
use crate::{ElemSet, Limits};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).expect("valid alphabet")
}

/// A random automaton with at most `max_states` states (at least one).
/// Each of the `states × letters × states` transitions is present with
/// probability `density`; at most `max_transitions` are kept.
pub fn random_nfa(
    rng: &mut Rng8,
    alphabet: &Alphabet,
    max_states: usize,
    density: f64,
    max_transitions: Option<usize>,
) -> Nfa {
    let n = rng.gen_range(1..=max_states);
    let mut trans = Vec::new();
    for p in 0..n as u32 {
        for a in 0..alphabet.len() {
            for q in 0..n as u32 {
                if rng.gen_bool(density) {
                    trans.push((p, a, q));
                }
            }
        }
    }
    trans.shuffle(rng);
    if let Some(m) = max_transitions {
        trans.truncate(m);
    }
    let initial: Vec<u32> = vec![0];
    let finals: Vec<u32> = (0..n as u32).filter(|_| rng.gen_bool(0.5)).collect();
    Nfa::new(alphabet.clone(), n, initial, finals, trans).expect("valid random automaton")
}

/// A random expression of depth at most `depth` over the alphabet.
pub fn random_regex(rng: &mut Rng8, alphabet: &Alphabet, depth: usize) -> Regex {
    let leaf = |rng: &mut Rng8| match rng.gen_range(0..8) {
        0 => Regex::Eps,
        1 => Regex::Empty,
        2 => Regex::Set(alphabet.letters().to_vec()),
        _ => Regex::Letter(alphabet.letters().choose(rng).expect("letters").clone()),
    };
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    match rng.gen_range(0..3) {
        0 => Regex::Concat(
            (0..rng.gen_range(2..=3))
                .map(|_| random_regex(rng, alphabet, depth - 1))
                .collect(),
        ),
        1 => Regex::Union(
            (0..2)
                .map(|_| random_regex(rng, alphabet, depth - 1))
                .collect(),
        ),
        _ => random_regex(rng, alphabet, depth - 1).star(),
    }
}

fn is_associative(n: usize, t: &[Elem]) -> bool {
    (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| {
                t[t[x * n + y] as usize * n + z] == t[x * n + t[y * n + z] as usize]
            })
        })
    })
}

/// All monoids with at most `max_size ≤ 3` elements up to isomorphism, with
/// unit `0`.
pub fn small_monoids(max_size: usize) -> Vec<Monoid> {
    assert!(max_size <= 3, "exhaustive enumeration is limited to 3 elements");
    let mut out = Vec::new();
    for n in 1..=max_size {
        let free = (n - 1) * (n - 1);
        let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
        for code in 0..(n as u64).pow(free as u32) {
            let mut t = vec![0 as Elem; n * n];
            for i in 0..n {
                t[i] = i as Elem;
                t[i * n] = i as Elem;
            }
            let mut c = code;
            for x in 1..n {
                for y in 1..n {
                    t[x * n + y] = (c % n as u64) as Elem;
                    c /= n as u64;
                }
            }
            if !is_associative(n, &t) {
                continue;
            }
            // canonical form over permutations fixing the unit
            let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
            if n == 3 {
                perms.push(vec![0, 2, 1]);
            }
            let canon = perms
                .iter()
                .map(|p| {
                    let mut u = vec![0 as Elem; n * n];
                    for x in 0..n {
                        for y in 0..n {
                            u[p[x] * n + p[y]] = p[t[x * n + y] as usize] as Elem;
                        }
                    }
                    u
                })
                .min()
                .expect("one permutation");
            if seen.insert(canon.clone()) {
                out.push(Monoid::from_flat(n, 0, canon));
            }
        }
    }
    out
}

/// The transformation monoid generated by `gens` random maps on `points`
/// points, or `None` above `cap` elements.
pub fn random_transformation_monoid(
    rng: &mut Rng8,
    points: usize,
    gens: usize,
    cap: usize,
) -> Option<(Monoid, Vec<Elem>)> {
    let maps: Vec<Vec<u8>> = (0..gens)
        .map(|_| (0..points).map(|_| rng.gen_range(0..points) as u8).collect())
        .collect();
    let unit: Vec<u8> = (0..points as u8).collect();
    let g = generate(
        unit,
        &maps,
        |f, g| f.iter().map(|&i| g[i as usize]).collect(),
        "transformation monoid",
        cap,
        &Limits::default(),
    )
    .ok()?;
    let table = g.table(&Limits::default()).ok()?;
    let images = (0..gens).map(|i| g.right[i]).collect();
    Some((Monoid::from_flat(g.len(), 0, table), images))
}

/// The bases used by the random corpus, over `{a, b}`.
pub fn corpus_bases() -> Vec<Arc<Basis>> {
    let a = ab();
    let la = Letter::new("a").expect("letter");
    let parity = |k: usize| {
        let m = Morphism::new(a.clone(), Arc::new(Monoid::cyclic(k)), vec![1, 1])
            .expect("parity morphism");
        Arc::new(Basis::user(&format!("z{k}"), m).expect("surjective"))
    };
    vec![
        Arc::new(Basis::triv(&a)),
        Arc::new(Basis::at_restricted(&a, &[la]).expect("restricted basis")),
        Arc::new(Basis::at(&a).expect("basis")),
        parity(2),
        parity(3),
    ]
}

/// The reachable part of `M0 × (basis monoid)` under `a ↦ (images[a],
/// canonical(a))`, with class map the second projection.
pub fn lift_to_basis(m0: &Monoid, images: &[Elem], basis: &Arc<Basis>) -> CompatibleMorphism {
    let b = basis.monoid();
    let canon = basis.canonical();
    let gens: Vec<(Elem, Elem)> = images
        .iter()
        .enumerate()
        .map(|(a, &x)| (x, canon.letter_image(a)))
        .collect();
    let g = generate(
        (m0.unit(), b.unit()),
        &gens,
        |p, q| (m0.mul(p.0, q.0), b.mul(p.1, q.1)),
        "lifted monoid",
        usize::MAX,
        &Limits::default(),
    )
    .expect("finite");
    let table = g.table(&Limits::default()).expect("no deadline");
    let monoid = Arc::new(Monoid::from_flat(g.len(), 0, table));
    let imgs = (0..images.len()).map(|i| g.right[i]).collect();
    let morphism = Morphism::new(basis.alphabet().clone(), monoid, imgs).expect("images in range");
    let classes = g.elems.iter().map(|p| p.1).collect();
    CompatibleMorphism::new(morphism, classes, basis.clone()).expect("compatible by construction")
}

/// Every compatible morphism over `{a, b}` into a monoid of at most
/// `max_size ≤ 3` elements (monoids taken up to isomorphism), for `basis`.
pub fn all_compatible(basis: &Arc<Basis>, max_size: usize) -> Vec<CompatibleMorphism> {
    let a = basis.alphabet().clone();
    let b = basis.monoid();
    let mut out = Vec::new();
    for m in small_monoids(max_size) {
        let m = Arc::new(m);
        let n = m.size();
        for ia in 0..n as Elem {
            for ib in 0..n as Elem {
                let Ok(morphism) = Morphism::new(a.clone(), m.clone(), vec![ia, ib]) else {
                    continue;
                };
                for code in 0..b.size().pow(n as u32) {
                    let mut c = code;
                    let classes: Vec<Elem> = (0..n)
                        .map(|_| {
                            let x = (c % b.size()) as Elem;
                            c /= b.size();
                            x
                        })
                        .collect();
                    if let Ok(cm) = CompatibleMorphism::new(morphism.clone(), classes, basis.clone())
                    {
                        out.push(cm);
                    }
                }
            }
        }
    }
    out
}

/// Every good subset for `beta`.
pub fn all_good_subsets(beta: &CompatibleMorphism) -> Vec<ElemSet> {
    let n = beta.monoid().size();
    assert!(n <= 16);
    let img = image(beta.morphism());
    (0u32..1 << n)
        .map(|mask| (0..n as u32).filter(|i| mask >> i & 1 == 1).collect::<ElemSet>())
        .filter(|s| crate::is_good(s, beta))
        .filter(|s| img.is_subset(s))
        .collect()
}

/// The closure of `seed ∪ image(beta)` under multiplication.
pub fn good_closure(beta: &CompatibleMorphism, seed: &ElemSet) -> ElemSet {
    let m = beta.monoid();
    let mut s = image(beta.morphism()).union(seed);
    loop {
        let mut next = s.clone();
        for x in s.iter() {
            for y in s.iter() {
                next.insert(m.mul(x, y));
            }
        }
        if next == s {
            return s;
        }
        s = next;
    }
}

/// A random compatible morphism for `basis` whose monoid has at most
/// `max_size` elements.
pub fn random_compatible(
    rng: &mut Rng8,
    basis: &Arc<Basis>,
    max_size: usize,
) -> CompatibleMorphism {
    loop {
        let points = rng.gen_range(1..=3);
        let Some((m0, images)) = random_transformation_monoid(rng, points, 2, 64) else {
            continue;
        };
        let cm = lift_to_basis(&m0, &images, basis);
        if cm.monoid().size() <= max_size {
            return cm;
        }
    }
}

/// A random tree context `(alpha, beta, S)` within the given sizes.
pub fn random_context(
    rng: &mut Rng8,
    basis: &Arc<Basis>,
    max_m: usize,
    max_n: usize,
) -> crate::TreeContext {
    let alpha = random_compatible(rng, basis, max_m);
    let beta = random_compatible(rng, basis, max_n);
    let extra: ElemSet = beta
        .monoid()
        .elements()
        .filter(|_| rng.gen_bool(0.3))
        .collect();
    let s = good_closure(&beta, &extra);
    crate::TreeContext::new(alpha, beta, s).expect("valid context")
}

/// A random union of marked products over the AT basis of `{a, b}`.
pub fn random_at_certificate(rng: &mut Rng8) -> Certificate {
    let block = |rng: &mut Rng8| loop {
        let ids: Vec<Elem> = (0..4).filter(|_| rng.gen_bool(0.5)).collect();
        if !ids.is_empty() {
            return CertItem::Block(ids);
        }
    };
    let products = (0..rng.gen_range(1..=2))
        .map(|_| {
            let mut p = vec![block(rng)];
            for _ in 0..rng.gen_range(0..=2) {
                let l = if rng.gen_bool(0.5) { "a" } else { "b" };
                p.push(CertItem::Letter(l.into()));
                p.push(block(rng));
            }
            p
        })
        .collect();
    Certificate {
        level: "st-3/2".into(),
        basis: None,
        expr: CertExpr::Pol(products),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monoids_of_order_three() {
        let counts: Vec<usize> = (1..=3).map(|k| small_monoids(k).len()).collect();
        assert_eq!(counts, [1, 3, 10]);
    }
}
