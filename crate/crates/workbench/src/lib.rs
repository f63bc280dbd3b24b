//! Workbench machinery around the core calculus: the JSON document format,
//! exhaustive enumeration of small structures, seeded random generation,
//! counterexample search, and audits of general claims over enumerated
//! universes.

pub mod audit;
pub mod document;
pub mod enumerate;
pub mod generate;
pub mod search;
