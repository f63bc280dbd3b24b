use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::Error;

/// Hard cap on carrier size. Tables indexed by all subsets of the carrier
/// are doubly exponential further up, so enumeration work caps out earlier.
pub const MAX_CARRIER: usize = 16;

/// A finite carrier set; its elements are the indices `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Carrier(usize);

impl Carrier {
    pub fn new(size: usize) -> Result<Self, Error> {
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        if size > MAX_CARRIER {
            return Err(Error::CarrierTooLarge { size, max: MAX_CARRIER });
        }
        Ok(Carrier(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn elements(self) -> std::ops::Range<usize> {
        0..self.0
    }

    /// Number of subsets, `2^size`.
    pub fn subset_count(self) -> usize {
        1usize << self.0
    }

    pub fn full_mask(self) -> u32 {
        ((1u64 << self.0) - 1) as u32
    }

    pub fn check_element(self, x: usize) -> Result<(), Error> {
        if x < self.0 {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { element: x, size: self.0 })
        }
    }

    pub fn check_same(self, other: Carrier) -> Result<(), Error> {
        if self == other {
            Ok(())
        } else {
            Err(Error::CarrierMismatch { left: self.0, right: other.0 })
        }
    }
}

impl Serialize for Carrier {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(self.0 as u64)
    }
}

/// A subset of a carrier, stored as a bit mask.
///
/// `Ord` sorts by mask value, which is the canonical enumeration order used
/// everywhere (reports pick the first, i.e. smallest, witness).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    carrier: Carrier,
    mask: u32,
}

impl Subset {
    pub fn empty(carrier: Carrier) -> Self {
        Subset { carrier, mask: 0 }
    }

    pub fn full(carrier: Carrier) -> Self {
        Subset { carrier, mask: carrier.full_mask() }
    }

    pub fn singleton(carrier: Carrier, x: usize) -> Self {
        assert!(x < carrier.size());
        Subset { carrier, mask: 1 << x }
    }

    pub fn from_mask(carrier: Carrier, mask: u32) -> Self {
        assert_eq!(mask & !carrier.full_mask(), 0, "mask out of carrier range");
        Subset { carrier, mask }
    }

    pub fn from_members(
        carrier: Carrier,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self, Error> {
        let mut mask = 0u32;
        for x in members {
            carrier.check_element(x)?;
            mask |= 1 << x;
        }
        Ok(Subset { carrier, mask })
    }

    pub fn carrier(self) -> Carrier {
        self.carrier
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn contains(self, x: usize) -> bool {
        x < self.carrier.size() && self.mask & (1 << x) != 0
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn union(self, other: Subset) -> Subset {
        assert_eq!(self.carrier, other.carrier);
        Subset { carrier: self.carrier, mask: self.mask | other.mask }
    }

    pub fn inter(self, other: Subset) -> Subset {
        assert_eq!(self.carrier, other.carrier);
        Subset { carrier: self.carrier, mask: self.mask & other.mask }
    }

    pub fn minus(self, other: Subset) -> Subset {
        assert_eq!(self.carrier, other.carrier);
        Subset { carrier: self.carrier, mask: self.mask & !other.mask }
    }

    pub fn complement(self) -> Subset {
        Subset { carrier: self.carrier, mask: self.carrier.full_mask() & !self.mask }
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        assert_eq!(self.carrier, other.carrier);
        self.mask & !other.mask == 0
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.mask;
        let size = self.carrier.size();
        (0..size).filter(move |x| mask & (1 << x) != 0)
    }

    /// All subsets of the carrier in mask order.
    pub fn all(carrier: Carrier) -> impl Iterator<Item = Subset> {
        (0..carrier.subset_count() as u32).map(move |mask| Subset { carrier, mask })
    }

    /// All nonempty subsets of the carrier in mask order.
    pub fn all_nonempty(carrier: Carrier) -> impl Iterator<Item = Subset> {
        Self::all(carrier).skip(1)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.members().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for x in self.members() {
            seq.serialize_element(&x)?;
        }
        seq.end()
    }
}

/// A dense bit set over an arbitrary finite universe `0..len`.
///
/// Used for token sets (the universe may be much larger than a carrier, e.g.
/// all subsets of a token set) and for families of subsets indexed by mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for x in 0..len {
            s.insert(x);
        }
        s
    }

    pub fn from_iter(len: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(len);
        for x in members {
            s.insert(x);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.len && self.words[x / 64] & (1 << (x % 64)) != 0
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < self.len);
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn remove(&mut self, x: usize) {
        assert!(x < self.len);
        self.words[x / 64] &= !(1 << (x % 64));
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        assert_eq!(self.len, other.len);
        BitSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn inter(&self, other: &BitSet) -> BitSet {
        assert_eq!(self.len, other.len);
        BitSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn minus(&self, other: &BitSet) -> BitSet {
        assert_eq!(self.len, other.len);
        BitSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &BitSet) -> bool {
        assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&x| self.contains(x))
    }
}

impl fmt::Display for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for BitSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.count()))?;
        for x in self.iter() {
            seq.serialize_element(&x)?;
        }
        seq.end()
    }
}
