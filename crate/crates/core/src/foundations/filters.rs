use std::fmt;

use serde::Serialize;

use super::relations::Rel;
use super::sets::{Carrier, Subset};
use super::Error;

/// A filter on a finite carrier, represented canonically by its core: the
/// filter is the family of all supersets of the core. On a finite carrier
/// this is a bijection between nonempty subsets and filters, so the carrier
/// of size `n` has exactly `2^n - 1` filters.
///
/// Filters are indexed as tokens by `core mask - 1`, which is the canonical
/// token numbering used by the filter-based structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrincipalFilter {
    core: Subset,
}

impl PrincipalFilter {
    pub fn new(core: Subset) -> Result<Self, Error> {
        if core.is_empty() {
            return Err(Error::EmptyCore);
        }
        Ok(PrincipalFilter { core })
    }

    /// The filter generated by the one-point set `{x}`.
    pub fn point(carrier: Carrier, x: usize) -> Self {
        PrincipalFilter { core: Subset::singleton(carrier, x) }
    }

    pub fn core(self) -> Subset {
        self.core
    }

    pub fn carrier(self) -> Carrier {
        self.core.carrier()
    }

    /// Canonical token index of this filter, `core mask - 1`.
    pub fn token_index(self) -> usize {
        self.core.mask() as usize - 1
    }

    pub fn from_token_index(carrier: Carrier, token: usize) -> Self {
        PrincipalFilter { core: Subset::from_mask(carrier, token as u32 + 1) }
    }

    /// Number of filters on the carrier.
    pub fn count(carrier: Carrier) -> usize {
        carrier.subset_count() - 1
    }

    /// All filters in token order.
    pub fn all(carrier: Carrier) -> impl Iterator<Item = PrincipalFilter> {
        Subset::all_nonempty(carrier).map(|core| PrincipalFilter { core })
    }

    /// The member family, materialized for display and tests only.
    pub fn members(self) -> impl Iterator<Item = Subset> {
        let core = self.core;
        Subset::all(self.carrier()).filter(move |a| core.is_subset_of(*a))
    }

    /// Refinement: `self` refines `other` iff every member of `other` is a
    /// member of `self`, equivalently `core(self) ⊆ core(other)`.
    pub fn refines(self, other: PrincipalFilter) -> Result<bool, Error> {
        self.carrier().check_same(other.carrier())?;
        Ok(self.core.is_subset_of(other.core))
    }

    /// The family intersection of the two filters; the coarsest filter
    /// refined by both. For principal filters the core is the union of cores.
    pub fn meet(self, other: PrincipalFilter) -> Result<PrincipalFilter, Error> {
        self.carrier().check_same(other.carrier())?;
        Ok(PrincipalFilter { core: self.core.union(other.core) })
    }

    /// The product filter on the pair universe, with core `A × B`.
    pub fn product(self, other: PrincipalFilter) -> Result<RelationFilter, Error> {
        self.carrier().check_same(other.carrier())?;
        let n = self.carrier().size();
        let mut core = Rel::empty(n);
        for x in self.core.members() {
            for y in other.core.members() {
                core.insert(x, y);
            }
        }
        RelationFilter::new(self.carrier(), core)
    }
}

impl fmt::Display for PrincipalFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "↑{}", self.core)
    }
}

/// A filter on `E × E`, represented by its nonempty core relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RelationFilter {
    carrier: Carrier,
    core: Rel,
}

impl RelationFilter {
    pub fn new(carrier: Carrier, core: Rel) -> Result<Self, Error> {
        assert_eq!(core.universe(), carrier.size());
        if core.is_empty() {
            return Err(Error::EmptyRelationCore);
        }
        Ok(RelationFilter { carrier, core })
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn core(&self) -> &Rel {
        &self.core
    }

    /// `(↑R)⁻¹ = ↑(R⁻¹)`.
    pub fn inverse(&self) -> RelationFilter {
        RelationFilter { carrier: self.carrier, core: self.core.inverse() }
    }
}

impl fmt::Display for RelationFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "↑{}", self.core)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filt(c: Carrier, members: &[usize]) -> PrincipalFilter {
        PrincipalFilter::new(Subset::from_members(c, members.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn construction_rejects_empty_core() {
        let c = Carrier::new(2).unwrap();
        assert_eq!(PrincipalFilter::new(Subset::empty(c)), Err(Error::EmptyCore));
    }

    #[test]
    fn member_families() {
        let c = Carrier::new(2).unwrap();
        let members: Vec<_> = filt(c, &[0]).members().collect();
        assert_eq!(
            members,
            vec![Subset::singleton(c, 0), Subset::full(c)],
        );
        let coarsest: Vec<_> = filt(c, &[0, 1]).members().collect();
        assert_eq!(coarsest, vec![Subset::full(c)]);
    }

    #[test]
    fn refinement_is_reversed_core_inclusion() {
        let c = Carrier::new(2).unwrap();
        assert!(filt(c, &[0]).refines(filt(c, &[0, 1])).unwrap());
        assert!(!filt(c, &[0]).refines(filt(c, &[1])).unwrap());
        assert!(filt(c, &[0]).refines(filt(c, &[0])).unwrap());
        let d = Carrier::new(3).unwrap();
        assert!(filt(c, &[0]).refines(filt(d, &[0])).is_err());
    }

    #[test]
    fn meets() {
        let c = Carrier::new(2).unwrap();
        assert_eq!(filt(c, &[0]).meet(filt(c, &[1])).unwrap(), filt(c, &[0, 1]));
        assert_eq!(filt(c, &[0]).meet(filt(c, &[0])).unwrap(), filt(c, &[0]));
        assert_eq!(filt(c, &[0]).meet(filt(c, &[0, 1])).unwrap(), filt(c, &[0, 1]));
    }

    #[test]
    fn products() {
        let c = Carrier::new(2).unwrap();
        let p = filt(c, &[0]).product(filt(c, &[1])).unwrap();
        assert_eq!(p.core().pairs().collect::<Vec<_>>(), vec![(0, 1)]);
        let q = filt(c, &[0, 1]).product(filt(c, &[0, 1])).unwrap();
        assert_eq!(q.core().count(), 4);
        // the point filter squared is the diagonal point-pair filter
        let u = PrincipalFilter::point(c, 1);
        assert_eq!(
            u.product(u).unwrap().core().pairs().collect::<Vec<_>>(),
            vec![(1, 1)]
        );
    }

    #[test]
    fn token_indexing_is_a_bijection() {
        let c = Carrier::new(3).unwrap();
        let all: Vec<_> = PrincipalFilter::all(c).collect();
        assert_eq!(all.len(), PrincipalFilter::count(c));
        for (i, f) in all.iter().enumerate() {
            assert_eq!(f.token_index(), i);
            assert_eq!(PrincipalFilter::from_token_index(c, i), *f);
        }
    }
}
