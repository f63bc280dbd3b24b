//! Pass/fail outcomes that carry a witness on failure.

use serde::Serialize;

/// Outcome of a single checked condition. `Fail` carries the
/// lexicographically smallest witness found, so reports are deterministic
/// regardless of evaluation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "witness")]
pub enum Check<W> {
    Pass,
    Fail(W),
}

impl<W> Check<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Pass => None,
            Check::Fail(w) => Some(w),
        }
    }

    pub fn from_witness(witness: Option<W>) -> Self {
        match witness {
            None => Check::Pass,
            Some(w) => Check::Fail(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Check<V> {
        match self {
            Check::Pass => Check::Pass,
            Check::Fail(w) => Check::Fail(f(w)),
        }
    }
}

impl<W: std::fmt::Display> std::fmt::Display for Check<W> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Check::Pass => write!(f, "pass"),
            Check::Fail(w) => write!(f, "FAIL  witness {w}"),
        }
    }
}
