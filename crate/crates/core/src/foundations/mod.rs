//! Finite-set substrate: subsets, relations, directed pre-orders and the
//! principal-filter calculus every other module is built on.
//!
//! On a finite carrier every filter is principal, so filters are represented
//! canonically by their core subset; the member family is materialized only
//! for display. Subsets and relations are fixed-width bit patterns.

mod filters;
mod groups;
mod relations;
mod sets;

pub use filters::{PrincipalFilter, RelationFilter};
pub use groups::{group_axiom_audit, GroupAxiomAudit, GroupTable};
pub use relations::{DirectedPreorder, Rel};
pub use sets::{BitSet, Carrier, Subset, MAX_CARRIER};

/// Errors raised by the substrate operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("carrier must have at least one element")]
    EmptyCarrier,
    #[error("carrier size {size} exceeds the hard cap {max}")]
    CarrierTooLarge { size: usize, max: usize },
    #[error("carrier mismatch: size {left} vs size {right}")]
    CarrierMismatch { left: usize, right: usize },
    #[error("a filter core must be nonempty")]
    EmptyCore,
    #[error("a relation-filter core must be nonempty")]
    EmptyRelationCore,
    #[error("element {element} out of range for carrier of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("operation table is not a group: {reason}")]
    NotAGroup { reason: String },
    #[error("relation is not reflexive (element {0})")]
    NotReflexive(usize),
    #[error("relation is not transitive (chain {0} <= {1} <= {2})")]
    NotTransitive(usize, usize, usize),
    #[error("pre-order is not directed: {0} and {1} have no common upper bound")]
    NotDirected(usize, usize),
}
