//! Finite-model calculus for topological type structures.
//!
//! Everything here lives on small finite carriers, where every filter is
//! principal and every quantifier is a loop. The crate provides:
//!
//! * [`foundations`] — subsets, relations, directed pre-orders and the
//!   principal-filter calculus.
//! * [`tts`] — topological type structures (a carrier, a token set of
//!   abstract "processes", a localization map and a symmetric Cauchy
//!   relation), their axioms, and the Cauchy/convergent token sets.
//! * [`derived_topology`] — σ-closed sets, closure/interior operators,
//!   compatibility with token pre-orders, and derivation of an ordinary
//!   open-set topology from a strongly compatible structure.
//! * [`associations`] — the power-set association and the support order,
//!   two ways of attaching a compatible pre-order to an arbitrary structure.
//! * [`convergence`] — filter convergence structures, the bridges to and
//!   from topologies, continuous convergence and the exponential law.
//! * [`uniform`] — uniform convergence structures and finite uniformities.
//! * [`moore_smith`] — nets over finite directed pre-orders, subnets, and
//!   the four classical net-convergence conditions under bounded search.

pub mod check;
pub mod foundations;

pub mod tts;

pub mod derived_topology;

pub mod associations;

pub mod convergence;

pub mod uniform;

pub mod moore_smith;
