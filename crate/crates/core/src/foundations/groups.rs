use serde::Serialize;

use crate::check::Check;

use super::filters::PrincipalFilter;
use super::sets::{Carrier, Subset};
use super::Error;

/// A validated group operation table on a carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    carrier: Carrier,
    table: Vec<usize>,
    identity: usize,
}

impl GroupTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(carrier: Carrier, table: Vec<usize>) -> Result<Self, Error> {
        let n = carrier.size();
        if table.len() != n * n {
            return Err(Error::NotAGroup { reason: format!("table has {} entries, expected {}", table.len(), n * n) });
        }
        if let Some(&v) = table.iter().find(|&&v| v >= n) {
            return Err(Error::NotAGroup { reason: format!("entry {v} out of range") });
        }
        let op = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if op(op(a, b), c) != op(a, op(b, c)) {
                        return Err(Error::NotAGroup {
                            reason: format!("not associative at ({a},{b},{c})"),
                        });
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| op(e, a) == a && op(a, e) == a))
            .ok_or_else(|| Error::NotAGroup { reason: "no identity element".into() })?;
        for a in 0..n {
            if !(0..n).any(|b| op(a, b) == identity && op(b, a) == identity) {
                return Err(Error::NotAGroup { reason: format!("element {a} has no inverse") });
            }
        }
        Ok(GroupTable { carrier, table, identity })
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        let carrier = Carrier::new(n).expect("cyclic group order within carrier cap");
        let table = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        GroupTable::new(carrier, table).expect("modular addition is a group")
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.carrier.size() + b]
    }

    /// Setwise product `A ∘ B = {a ∘ b : a ∈ A, b ∈ B}`.
    pub fn set_op(&self, a: Subset, b: Subset) -> Subset {
        let mut mask = 0u32;
        for x in a.members() {
            for y in b.members() {
                mask |= 1 << self.op(x, y);
            }
        }
        Subset::from_mask(self.carrier, mask)
    }

    /// The group operation extended to filters: the filter generated by the
    /// setwise products of members, which for principal filters is the filter
    /// whose core is the setwise product of cores.
    pub fn extend_op(
        &self,
        f: PrincipalFilter,
        g: PrincipalFilter,
    ) -> Result<PrincipalFilter, Error> {
        self.carrier.check_same(f.carrier())?;
        self.carrier.check_same(g.carrier())?;
        PrincipalFilter::new(self.set_op(f.core(), g.core()))
    }
}

/// Result of auditing the extended operation on the set of all filters.
#[derive(Debug, Clone, Serialize)]
pub struct GroupAxiomAudit {
    pub filter_count: usize,
    /// Setwise products of nonempty cores are nonempty, so this always holds.
    pub closure: Check<(PrincipalFilter, PrincipalFilter)>,
    pub associativity: Check<(PrincipalFilter, PrincipalFilter, PrincipalFilter)>,
    /// A two-sided identity filter, if one exists.
    pub identity: Option<PrincipalFilter>,
    /// First filter (in token order) with no two-sided inverse.
    pub inverses: Check<PrincipalFilter>,
    pub is_group: bool,
}

/// Checks whether the group operation extended to the `2^n - 1` filters on
/// the carrier is still a group. It is one exactly when the carrier has a
/// single element: larger cores can never multiply down to the singleton
/// identity core, so the inverse axiom fails.
pub fn group_axiom_audit(group: &GroupTable) -> GroupAxiomAudit {
    let carrier = group.carrier();
    let filters: Vec<PrincipalFilter> = PrincipalFilter::all(carrier).collect();
    let fop = |f: &PrincipalFilter, g: &PrincipalFilter| {
        PrincipalFilter::new(group.set_op(f.core(), g.core())).expect("nonempty product core")
    };

    let closure = Check::Pass;

    let mut associativity = Check::Pass;
    'assoc: for f in &filters {
        for g in &filters {
            for h in &filters {
                if fop(&fop(f, g), h) != fop(f, &fop(g, h)) {
                    associativity = Check::Fail((*f, *g, *h));
                    break 'assoc;
                }
            }
        }
    }

    let identity = filters
        .iter()
        .copied()
        .find(|e| filters.iter().all(|f| fop(e, f) == *f && fop(f, e) == *f));

    let inverses = match identity {
        None => Check::Fail(filters[0]),
        Some(e) => Check::from_witness(
            filters
                .iter()
                .copied()
                .find(|f| !filters.iter().any(|g| fop(f, g) == e && fop(g, f) == e)),
        ),
    };

    let is_group =
        closure.passed() && associativity.passed() && identity.is_some() && inverses.passed();
    GroupAxiomAudit {
        filter_count: filters.len(),
        closure,
        associativity,
        identity,
        inverses,
        is_group,
    }
}
