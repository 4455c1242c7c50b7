use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite set of small non-negative integers (monoid elements, states),
/// stored as a sorted, duplicate-free vector.
///
/// Equality, hashing and ordering are canonical, which is what the fixpoint
/// computations rely on for deduplication.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemSet(Vec<u32>);

impl ElemSet {
    pub fn new() -> Self {
        ElemSet(Vec::new())
    }

    pub fn singleton(x: u32) -> Self {
        ElemSet(vec![x])
    }

    /// Builds a set from an already sorted, duplicate-free vector.
    pub(crate) fn from_sorted(v: Vec<u32>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        ElemSet(v)
    }

    pub fn from_vec(mut v: Vec<u32>) -> Self {
        v.sort_unstable();
        v.dedup();
        ElemSet(v)
    }

    pub fn full(n: usize) -> Self {
        ElemSet((0..n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn insert(&mut self, x: u32) -> bool {
        match self.0.binary_search(&x) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, x);
                true
            }
        }
    }

    pub fn remove(&mut self, x: u32) -> bool {
        match self.0.binary_search(&x) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut j = 0;
        for &x in &self.0 {
            while j < other.0.len() && other.0[j] < x {
                j += 1;
            }
            if j == other.0.len() || other.0[j] != x {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a < b {
                out.push(a);
                i += 1;
            } else if b < a {
                out.push(b);
                j += 1;
            } else {
                out.push(a);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        ElemSet(out)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        ElemSet(self.0.iter().copied().filter(|&x| other.contains(x)).collect())
    }

    pub fn retain(&mut self, f: impl FnMut(&u32) -> bool) {
        self.0.retain(f);
    }
}

impl FromIterator<u32> for ElemSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        ElemSet::from_vec(iter.into_iter().collect())
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_and_union() {
        let a = ElemSet::from_vec(vec![3, 1, 1]);
        let b = ElemSet::from_vec(vec![1, 2, 3]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(a.union(&b), b);
        assert!(ElemSet::new().is_subset(&a));
    }
}
