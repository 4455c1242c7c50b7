use std::fmt;
use std::sync::Arc;

use crate::{ElemSet, Error, Result};

/// Monoid elements are indices `0..size`.
pub type Elem = u32;

/// A finite monoid given by its multiplication.
///
/// Most monoids carry an explicit table. The square `M × M` used by the
/// `BPol` decider is kept implicit: its table would have `|M|^4` entries.
#[derive(Clone)]
pub struct Monoid {
    size: usize,
    unit: Elem,
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Table(Arc<Vec<Elem>>),
    /// Pairs `(s, t)` encoded as `s * |base| + t`, multiplied componentwise.
    Square(Arc<Monoid>),
}

impl Monoid {
    /// Builds and validates a monoid from a full table.
    pub fn from_table(unit: Elem, mul: Vec<Vec<Elem>>) -> Result<Self> {
        let size = mul.len();
        if size == 0 {
            return Err(Error::InvalidMonoid("empty monoid".into()));
        }
        if mul.iter().any(|row| row.len() != size) {
            return Err(Error::InvalidMonoid("table is not square".into()));
        }
        if mul.iter().flatten().any(|&x| x as usize >= size) || unit as usize >= size {
            return Err(Error::InvalidMonoid("element index out of range".into()));
        }
        let m = Monoid::from_flat(size, unit, mul.into_iter().flatten().collect());
        m.validate()?;
        Ok(m)
    }

    /// Trusted constructor for tables produced by internal constructions.
    pub(crate) fn from_flat(size: usize, unit: Elem, flat: Vec<Elem>) -> Self {
        debug_assert_eq!(flat.len(), size * size);
        Monoid {
            size,
            unit,
            repr: Repr::Table(Arc::new(flat)),
        }
    }

    pub fn trivial() -> Self {
        Monoid::from_flat(1, 0, vec![0])
    }

    /// `Z/kZ` with element `i` standing for `i mod k`.
    pub fn cyclic(k: usize) -> Self {
        assert!(k >= 1);
        let flat = (0..k)
            .flat_map(|i| (0..k).map(move |j| ((i + j) % k) as Elem))
            .collect();
        Monoid::from_flat(k, 0, flat)
    }

    /// `(2^B, ∪)` for `|B| = bits`, subsets encoded as bitmasks.
    pub fn semilattice(bits: usize) -> Self {
        assert!(bits <= 16, "subset monoid too large");
        let n = 1usize << bits;
        let flat = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i | j) as Elem))
            .collect();
        Monoid::from_flat(n, 0, flat)
    }

    /// `M × M` with componentwise multiplication, never materialized.
    pub fn square(base: Arc<Monoid>) -> Self {
        let n = base.size;
        let unit = base.unit as usize * n + base.unit as usize;
        Monoid {
            size: n * n,
            unit: unit as Elem,
            repr: Repr::Square(base),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self) -> Elem {
        self.unit
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::Table(t) => t[a as usize * self.size + b as usize],
            Repr::Square(base) => {
                let n = base.size as Elem;
                let (a1, a2) = (a / n, a % n);
                let (b1, b2) = (b / n, b % n);
                base.mul(a1, b1) * n + base.mul(a2, b2)
            }
        }
    }

    /// For a square monoid, the base monoid.
    pub fn square_base(&self) -> Option<&Arc<Monoid>> {
        match &self.repr {
            Repr::Square(b) => Some(b),
            Repr::Table(_) => None,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    pub fn table(&self) -> Vec<Vec<Elem>> {
        (0..self.size as Elem)
            .map(|a| (0..self.size as Elem).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Checks neutrality of the unit and associativity on all triples.
    pub fn validate(&self) -> Result<()> {
        let u = self.unit;
        for a in self.elements() {
            if self.mul(u, a) != a || self.mul(a, u) != a {
                return Err(Error::InvalidMonoid(format!("{u} is not neutral for {a}")));
            }
        }
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidMonoid(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_idempotent(&self, e: Elem) -> bool {
        self.mul(e, e) == e
    }

    pub fn idempotents(&self) -> ElemSet {
        self.elements().filter(|&e| self.is_idempotent(e)).collect()
    }

    pub fn power(&self, s: Elem, k: usize) -> Elem {
        (0..k).fold(self.unit, |acc, _| self.mul(acc, s))
    }

    /// The unique idempotent among the positive powers of `s`.
    pub fn omega_power(&self, s: Elem) -> Elem {
        let mut p = s;
        // s^k for k = 1, 2, ...; one of the first |M| powers is idempotent
        loop {
            if self.is_idempotent(p) {
                return p;
            }
            p = self.mul(p, s);
        }
    }

    /// Longest strictly descending chain of J-classes: the longest path, in
    /// nodes, of the condensation of `s → x·s·y`.
    pub fn j_depth(&self) -> usize {
        let (comp, count) = self.j_classes();
        self.longest_class_path(&comp, count, |_| 1)
    }

    /// Longest chain of pairwise distinct elements `s_1, ..., s_h` with each
    /// `s_{i+1}` a two-sided multiple of `s_i`. Equals [`Monoid::j_depth`] on
    /// J-trivial monoids.
    pub fn element_chain_depth(&self) -> usize {
        let (comp, count) = self.j_classes();
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        self.longest_class_path(&comp, count, |c| sizes[c])
    }

    fn successors(&self, s: Elem) -> Vec<Elem> {
        let mut out: Vec<Elem> = self
            .elements()
            .flat_map(|x| [self.mul(s, x), self.mul(x, s)])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Strongly connected components of `s → s·x, x·s` (the J-classes),
    /// via iterative Tarjan. Components come out in reverse topological
    /// order.
    fn j_classes(&self) -> (Vec<usize>, usize) {
        let n = self.size;
        let succ: Vec<Vec<Elem>> = self.elements().map(|s| self.successors(s)).collect();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![usize::MAX; n];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut count = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut i)) = call.last_mut() {
                if *i < succ[v].len() {
                    let w = succ[v][*i] as usize;
                    *i += 1;
                    if index[w] == usize::MAX {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(u, _)) = call.last() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp[w] = count;
                            if w == v {
                                break;
                            }
                        }
                        count += 1;
                    }
                }
            }
        }
        (comp, count)
    }

    fn longest_class_path(&self, comp: &[usize], count: usize, weight: impl Fn(usize) -> usize) -> usize {
        let mut dag: Vec<Vec<usize>> = vec![Vec::new(); count];
        for s in self.elements() {
            for t in self.successors(s) {
                let (a, b) = (comp[s as usize], comp[t as usize]);
                if a != b {
                    dag[a].push(b);
                }
            }
        }
        // Tarjan numbers components in reverse topological order, so every
        // edge goes from a higher to a lower component id.
        let mut best = vec![0usize; count];
        for c in 0..count {
            let below = dag[c].iter().map(|&d| best[d]).max().unwrap_or(0);
            best[c] = weight(c) + below;
        }
        best.into_iter().max().unwrap_or(0)
    }

}

impl fmt::Debug for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Table(_) if self.size <= 8 => f
                .debug_struct("Monoid")
                .field("size", &self.size)
                .field("unit", &self.unit)
                .field("mul", &self.table())
                .finish(),
            Repr::Table(_) => write!(f, "Monoid(size {})", self.size),
            Repr::Square(b) => write!(f, "Square({:?})", b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_depth_examples() {
        assert_eq!(Monoid::trivial().j_depth(), 1);
        for k in 1..6 {
            assert_eq!(Monoid::cyclic(k).j_depth(), 1);
        }
        for bits in 1..=3 {
            assert_eq!(Monoid::semilattice(bits).j_depth(), bits + 1);
            assert_eq!(Monoid::semilattice(bits).element_chain_depth(), bits + 1);
        }
        assert_eq!(Monoid::cyclic(4).element_chain_depth(), 4);
    }

    #[test]
    fn omega_power_in_group() {
        let z2 = Monoid::cyclic(2);
        assert_eq!(z2.omega_power(1), 0);
        assert_eq!(z2.omega_power(0), 0);
    }

    #[test]
    fn invalid_tables_rejected() {
        // unit 0 but 1·1 = 0 and 1·0 = 0 breaks neutrality
        assert!(Monoid::from_table(0, vec![vec![0, 1], vec![0, 0]]).is_err());
        // not associative: a left-zero on one side only
        let bad = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 1]];
        assert!(Monoid::from_table(0, bad).is_err());
        assert!(Monoid::from_table(0, vec![vec![0, 1], vec![1, 0]]).is_ok());
    }

    #[test]
    fn square_multiplies_componentwise() {
        let base = Arc::new(Monoid::cyclic(3));
        let sq = Monoid::square(base);
        assert_eq!(sq.size(), 9);
        // (1,2)·(2,2) = (0,1)
        assert_eq!(sq.mul(1 * 3 + 2, 2 * 3 + 2), 0 * 3 + 1);
        assert_eq!(sq.unit(), 0);
    }
}
