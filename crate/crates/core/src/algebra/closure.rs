use std::collections::HashMap;
use std::hash::Hash;

use crate::{Limits, Result};

/// The submonoid generated by a list of generators, discovered breadth-first
/// from the unit by right multiplication.
pub(crate) struct Generated<G> {
    pub elems: Vec<G>,
    pub index: HashMap<G, u32>,
    /// `right[x * gens + i]` is `x · gen_i`.
    pub right: Vec<u32>,
    /// BFS tree: element `y > 0` is `parent(y) · gen_i`.
    pub parent: Vec<(u32, u32)>,
    pub gens: usize,
}

pub(crate) fn generate<G, F>(
    unit: G,
    gens: &[G],
    mul: F,
    what: &'static str,
    cap: usize,
    limits: &Limits,
) -> Result<Generated<G>>
where
    G: Clone + Eq + Hash,
    F: Fn(&G, &G) -> G,
{
    let k = gens.len();
    let mut elems = vec![unit.clone()];
    let mut index = HashMap::new();
    index.insert(unit, 0u32);
    let mut parent = vec![(0, 0)];
    let mut right = Vec::new();
    let mut i = 0;
    while i < elems.len() {
        if i % 512 == 0 {
            limits.check_deadline()?;
        }
        for (g, gen) in gens.iter().enumerate() {
            let next = mul(&elems[i], gen);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    limits.check(what, elems.len() + 1, cap)?;
                    let id = elems.len() as u32;
                    index.insert(next.clone(), id);
                    elems.push(next);
                    parent.push((i as u32, g as u32));
                    id
                }
            };
            right.push(id);
        }
        i += 1;
    }
    Ok(Generated {
        elems,
        index,
        right,
        parent,
        gens: k,
    })
}

impl<G> Generated<G> {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    /// Full multiplication table (row-major), using `x·y = (x·parent(y))·g`.
    pub fn table(&self, limits: &Limits) -> Result<Vec<u32>> {
        let n = self.len();
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            if x % 256 == 0 {
                limits.check_deadline()?;
            }
            mul[x * n] = x as u32;
            for y in 1..n {
                let (p, g) = self.parent[y];
                let xp = mul[x * n + p as usize];
                mul[x * n + y] = self.right[xp as usize * self.gens + g as usize];
            }
        }
        Ok(mul)
    }
}
