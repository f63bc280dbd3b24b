use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::sets::BitSet;
use super::Error;

/// A binary relation on the universe `0..n`, stored as an `n*n` bit pattern.
///
/// The composition order follows `A ∘ B = {(x, z) : ∃y, (x, y) ∈ A and
/// (y, z) ∈ B}` — the middle element is reached through `A` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rel {
    n: usize,
    bits: BitSet,
}

impl Rel {
    pub fn empty(n: usize) -> Self {
        Rel { n, bits: BitSet::new(n * n) }
    }

    pub fn full(n: usize) -> Self {
        Rel { n, bits: BitSet::full(n * n) }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n {
            r.insert(x, x);
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (x, y) in pairs {
            r.insert(x, y);
        }
        r
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits.contains(x * self.n + y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        assert!(x < self.n && y < self.n);
        self.bits.insert(x * self.n + y);
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        assert!(x < self.n && y < self.n);
        self.bits.remove(x * self.n + y);
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count(&self) -> usize {
        self.bits.count()
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.bits.iter().map(move |i| (i / n, i % n))
    }

    pub fn inverse(&self) -> Rel {
        let mut r = Rel::empty(self.n);
        for (x, y) in self.pairs() {
            r.insert(y, x);
        }
        r
    }

    /// `self ∘ other`: pairs `(x, z)` with `(x, y) ∈ self`, `(y, z) ∈ other`.
    pub fn compose(&self, other: &Rel) -> Rel {
        assert_eq!(self.n, other.n);
        let mut r = Rel::empty(self.n);
        for (x, y) in self.pairs() {
            for z in 0..self.n {
                if other.contains(y, z) {
                    r.insert(x, z);
                }
            }
        }
        r
    }

    pub fn union(&self, other: &Rel) -> Rel {
        assert_eq!(self.n, other.n);
        Rel { n: self.n, bits: self.bits.union(&other.bits) }
    }

    pub fn inter(&self, other: &Rel) -> Rel {
        assert_eq!(self.n, other.n);
        Rel { n: self.n, bits: self.bits.inter(&other.bits) }
    }

    pub fn is_subset_of(&self, other: &Rel) -> bool {
        assert_eq!(self.n, other.n);
        self.bits.is_subset_of(&other.bits)
    }

    /// Elements related from `x`, i.e. `{y : (x, y) ∈ R}`.
    pub fn successors(&self, x: usize) -> BitSet {
        BitSet::from_iter(self.n, (0..self.n).filter(|&y| self.contains(x, y)))
    }

    /// First element `x` with `(x, x) ∉ R`, if any.
    pub fn reflexivity_witness(&self) -> Option<usize> {
        (0..self.n).find(|&x| !self.contains(x, x))
    }

    /// First pair `(x, y) ∈ R` with `(y, x) ∉ R`, if any.
    pub fn symmetry_witness(&self) -> Option<(usize, usize)> {
        self.pairs().find(|&(x, y)| !self.contains(y, x))
    }

    /// First chain `x ≤ y ≤ z` with `(x, z) ∉ R`, if any.
    pub fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        for x in 0..self.n {
            for y in 0..self.n {
                if !self.contains(x, y) {
                    continue;
                }
                for z in 0..self.n {
                    if self.contains(y, z) && !self.contains(x, z) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// First pair with no common upper bound, if any.
    pub fn directedness_witness(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in i..self.n {
                if !(0..self.n).any(|k| self.contains(i, k) && self.contains(j, k)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_reflexive(&self) -> bool {
        self.reflexivity_witness().is_none()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_witness().is_none()
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_witness().is_none()
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_preorder() && self.is_symmetric()
    }

    pub fn reflexive_closure(&self) -> Rel {
        self.union(&Rel::identity(self.n))
    }

    pub fn symmetric_closure(&self) -> Rel {
        self.union(&self.inverse())
    }

    pub fn transitive_closure(&self) -> Rel {
        let mut r = self.clone();
        for k in 0..self.n {
            for x in 0..self.n {
                if !r.contains(x, k) {
                    continue;
                }
                for z in 0..self.n {
                    if r.contains(k, z) {
                        r.insert(x, z);
                    }
                }
            }
        }
        r
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, y)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({x},{y})")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Rel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.count()))?;
        for pair in self.pairs() {
            seq.serialize_element(&pair)?;
        }
        seq.end()
    }
}

/// A finite directed pre-order: reflexive, transitive, and any two elements
/// have a common upper bound. Serves as the index set of a net. Always
/// nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[allow(clippy::len_without_is_empty)]
pub struct DirectedPreorder {
    rel: Rel,
}

impl DirectedPreorder {
    pub fn new(rel: Rel) -> Result<Self, Error> {
        if rel.universe() == 0 {
            return Err(Error::EmptyCarrier);
        }
        if let Some(x) = rel.reflexivity_witness() {
            return Err(Error::NotReflexive(x));
        }
        if let Some((x, y, z)) = rel.transitivity_witness() {
            return Err(Error::NotTransitive(x, y, z));
        }
        if let Some((i, j)) = rel.directedness_witness() {
            return Err(Error::NotDirected(i, j));
        }
        Ok(DirectedPreorder { rel })
    }

    /// The one-point index.
    pub fn singleton() -> Self {
        DirectedPreorder { rel: Rel::identity(1) }
    }

    /// The total order `0 ≤ 1 ≤ … ≤ len-1`.
    pub fn chain(len: usize) -> Self {
        assert!(len >= 1);
        let mut rel = Rel::empty(len);
        for i in 0..len {
            for j in i..len {
                rel.insert(i, j);
            }
        }
        DirectedPreorder { rel }
    }

    pub fn len(&self) -> usize {
        self.rel.universe()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.rel.contains(i, j)
    }

    pub fn rel(&self) -> &Rel {
        &self.rel
    }

    /// Elements above everything. Nonempty for any finite directed pre-order.
    pub fn tops(&self) -> Vec<usize> {
        let tops: Vec<usize> = (0..self.len())
            .filter(|&k| (0..self.len()).all(|i| self.le(i, k)))
            .collect();
        assert!(!tops.is_empty(), "finite directed pre-order must have a top cluster");
        tops
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_compose() {
        let a = Rel::from_pairs(2, [(0, 1)]);
        assert_eq!(a.inverse(), Rel::from_pairs(2, [(1, 0)]));
        // chain through y = 1
        assert_eq!(a.compose(&a.inverse()), Rel::from_pairs(2, [(0, 0)]));
        // no matching middle element
        assert!(a.compose(&a).is_empty());
    }

    #[test]
    fn closures() {
        let r = Rel::from_pairs(3, [(0, 1), (1, 2)]);
        let t = r.transitive_closure();
        assert!(t.contains(0, 2));
        assert!(r.reflexive_closure().is_reflexive());
        assert!(r.symmetric_closure().is_symmetric());
    }

    #[test]
    fn directedness() {
        // two incomparable points with no upper bound
        let r = Rel::identity(2);
        assert_eq!(r.directedness_witness(), Some((0, 1)));
        assert!(DirectedPreorder::new(r).is_err());
        let chain = DirectedPreorder::chain(3);
        assert_eq!(chain.tops(), vec![2]);
        // a two-element cluster at the top
        let mut rel = Rel::identity(2);
        rel.insert(0, 1);
        rel.insert(1, 0);
        let p = DirectedPreorder::new(rel).unwrap();
        assert_eq!(p.tops(), vec![0, 1]);
    }
}
