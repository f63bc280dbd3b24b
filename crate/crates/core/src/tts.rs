//! Topological type structures: a carrier `E`, an abstract token set `E'`
//! of "topological type processes", a localization map `T : P(E) -> P(E')`,
//! and a symmetric Cauchy relation `Ξ` on tokens.
//!
//! A token is Cauchy when it is Ξ-related to itself; it converges to a point
//! `x` when it is Ξ-related to some token based at `x`. The whole calculus
//! downstream (closed sets, derived topologies, completeness) is phrased in
//! terms of these two sets.

use serde::Serialize;

use crate::check::Check;
use crate::foundations::{BitSet, Carrier, Rel, Subset};

/// Errors raised while building or extending structures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TtsError {
    #[error("incomplete T table: {got} rows, expected one per subset ({expected})")]
    IncompleteTable { got: usize, expected: usize },
    #[error("T table row {row} is over {got} tokens, expected {expected}")]
    TokenUniverseMismatch { row: usize, got: usize, expected: usize },
    #[error("T(∅) must be empty")]
    NonEmptyImageOfEmpty,
    #[error("token count must be at least one")]
    NoTokens,
    #[error("Cauchy relation is over {got} tokens, expected {expected}")]
    XiUniverseMismatch { got: usize, expected: usize },
    #[error("pre-order is over {got} tokens, expected {expected}")]
    LeqUniverseMismatch { got: usize, expected: usize },
    #[error("point {point} out of range for carrier of size {size}")]
    PointOutOfRange { point: usize, size: usize },
    #[error("extension must contain the base Cauchy relation; missing pair ({0}, {1})")]
    ExtensionNotCoarser(usize, usize),
    #[error("extended structure fails axiom {0}")]
    ExtensionFailsAxioms(AxiomId),
}

/// The localization map: one token set per subset of the carrier, monotone
/// on nonempty subsets, with the full carrier mapped onto every token.
///
/// The table is stored in full, indexed by subset mask; `T(∅) = ∅` is fixed
/// at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtpAssignment {
    carrier: Carrier,
    tokens: usize,
    table: Vec<BitSet>,
}

impl TtpAssignment {
    pub fn new(carrier: Carrier, tokens: usize, table: Vec<BitSet>) -> Result<Self, TtsError> {
        if tokens == 0 {
            return Err(TtsError::NoTokens);
        }
        if table.len() != carrier.subset_count() {
            return Err(TtsError::IncompleteTable {
                got: table.len(),
                expected: carrier.subset_count(),
            });
        }
        for (row, set) in table.iter().enumerate() {
            if set.len() != tokens {
                return Err(TtsError::TokenUniverseMismatch {
                    row,
                    got: set.len(),
                    expected: tokens,
                });
            }
        }
        if !table[0].is_empty() {
            return Err(TtsError::NonEmptyImageOfEmpty);
        }
        Ok(TtpAssignment { carrier, tokens, table })
    }

    /// The standard filter support: tokens are the `2^n - 1` filters on the
    /// carrier (token index = core mask - 1) and `T(A)` is the set of filters
    /// containing `A`, i.e. the filters whose core lies inside `A`.
    pub fn standard_filter_support(carrier: Carrier) -> Self {
        let tokens = carrier.subset_count() - 1;
        let table = Subset::all(carrier)
            .map(|a| {
                BitSet::from_iter(
                    tokens,
                    Subset::all_nonempty(carrier)
                        .filter(|b| b.is_subset_of(a))
                        .map(|b| b.mask() as usize - 1),
                )
            })
            .collect();
        TtpAssignment { carrier, tokens, table }
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn tokens(&self) -> usize {
        self.tokens
    }

    pub fn of(&self, a: Subset) -> &BitSet {
        assert_eq!(a.carrier(), self.carrier);
        &self.table[a.mask() as usize]
    }

    pub fn of_point(&self, x: usize) -> &BitSet {
        &self.table[1usize << x]
    }

    pub fn rows(&self) -> impl Iterator<Item = (Subset, &BitSet)> {
        Subset::all(self.carrier).map(|a| (a, &self.table[a.mask() as usize]))
    }
}

/// Axiom identifiers for structure reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AxiomId {
    /// Nonempty monotone localization: `∅ ≠ A ⊆ B` implies `∅ ≠ T(A) ⊆ T(B)`.
    Ttp1,
    /// No redundant tokens: `T(E)` is the full token set.
    Ttp2,
    /// `T(A)` is up-closed under the token pre-order.
    Ttp3,
    /// Tokens based at a common point are Cauchy related.
    Tts1,
    /// The Cauchy relation is symmetric.
    Tts2,
    /// Cauchy-related tokens are Cauchy related to themselves.
    Tts3,
    /// The Cauchy relation is up-closed under the token pre-order, componentwise.
    Tts4,
    LeqReflexive,
    LeqTransitive,
}

impl std::fmt::Display for AxiomId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            AxiomId::Ttp1 => "TTP1",
            AxiomId::Ttp2 => "TTP2",
            AxiomId::Ttp3 => "TTP3",
            AxiomId::Tts1 => "TTS1",
            AxiomId::Tts2 => "TTS2",
            AxiomId::Tts3 => "TTS3",
            AxiomId::Tts4 => "TTS4",
            AxiomId::LeqReflexive => "LEQ-REFLEXIVE",
            AxiomId::LeqTransitive => "LEQ-TRANSITIVE",
        };
        f.write_str(name)
    }
}

/// Minimal witnesses for axiom failures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "shape")]
pub enum TtsWitness {
    /// `A ⊆ B` but `T(A) ⊄ T(B)`; `token` is the smallest escapee.
    NotMonotone { a: Subset, b: Subset, token: usize },
    /// Nonempty `A` with `T(A) = ∅`.
    EmptyImage { a: Subset },
    /// Token missing from `T(E)`.
    MissingToken { token: usize },
    /// `lower ∈ T(A)`, `lower ≤ upper`, but `upper ∉ T(A)`.
    NotUpClosed { a: Subset, lower: usize, upper: usize },
    /// Tokens based at `point` that are not Cauchy related.
    PointPairUnrelated { point: usize, x: usize, y: usize },
    /// `(x, y) ∈ Ξ` but `(y, x) ∉ Ξ`.
    Asymmetric { x: usize, y: usize },
    /// `(x, y) ∈ Ξ` but `(x, x) ∉ Ξ`.
    DiagonalMissing { x: usize, y: usize },
    /// `(x, y) ∈ Ξ`, `x ≤ u`, `y ≤ v`, but `(u, v) ∉ Ξ`.
    XiNotUpClosed { x: usize, y: usize, u: usize, v: usize },
    /// A set (Cauchy, or convergent-to-`point`) not up-closed at `lower ≤ upper`.
    SetNotUpClosed { point: Option<usize>, lower: usize, upper: usize },
    NotReflexive { x: usize },
    NotTransitive { x: usize, y: usize, z: usize },
}

impl std::fmt::Display for TtsWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TtsWitness::NotMonotone { a, b, token } => {
                write!(f, "A={a} B={b} token {token} in T(A) but not T(B)")
            }
            TtsWitness::EmptyImage { a } => write!(f, "T({a}) is empty"),
            TtsWitness::MissingToken { token } => write!(f, "token {token} not in T(E)"),
            TtsWitness::NotUpClosed { a, lower, upper } => {
                write!(f, "A={a}: {lower} in T(A), {lower} ≤ {upper}, {upper} not in T(A)")
            }
            TtsWitness::PointPairUnrelated { point, x, y } => {
                write!(f, "tokens ({x},{y}) based at point {point} not related")
            }
            TtsWitness::Asymmetric { x, y } => write!(f, "({x},{y}) related, ({y},{x}) not"),
            TtsWitness::DiagonalMissing { x, y } => {
                write!(f, "({x},{y}) related but ({x},{x}) missing")
            }
            TtsWitness::XiNotUpClosed { x, y, u, v } => {
                write!(f, "({x},{y}) related, {x}≤{u}, {y}≤{v}, ({u},{v}) not related")
            }
            TtsWitness::SetNotUpClosed { point, lower, upper } => match point {
                Some(p) => write!(f, "convergent-to-{p} has {lower} but not {upper} ≥ {lower}"),
                None => write!(f, "Cauchy set has {lower} but not {upper} ≥ {lower}"),
            },
            TtsWitness::NotReflexive { x } => write!(f, "({x},{x}) missing"),
            TtsWitness::NotTransitive { x, y, z } => write!(f, "{x}≤{y}≤{z} but not {x}≤{z}"),
        }
    }
}

/// Per-axiom outcomes, in a fixed order with minimal witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<(AxiomId, Check<TtsWitness>)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, c)| c.passed())
    }

    pub fn outcome(&self, id: AxiomId) -> Option<&Check<TtsWitness>> {
        self.checks.iter().find(|(a, _)| *a == id).map(|(_, c)| c)
    }

    pub fn first_failure(&self) -> Option<(AxiomId, &TtsWitness)> {
        self.checks.iter().find_map(|(a, c)| c.witness().map(|w| (*a, w)))
    }
}

impl std::fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (id, check) in &self.checks {
            writeln!(f, "{id:<14} {check}")?;
        }
        write!(f, "result: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

/// A topological type structure `(E, E', T, Ξ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tts {
    support: TtpAssignment,
    xi: Rel,
}

impl Tts {
    pub fn new(support: TtpAssignment, xi: Rel) -> Result<Self, TtsError> {
        if xi.universe() != support.tokens() {
            return Err(TtsError::XiUniverseMismatch {
                got: xi.universe(),
                expected: support.tokens(),
            });
        }
        Ok(Tts { support, xi })
    }

    pub fn support(&self) -> &TtpAssignment {
        &self.support
    }

    pub fn carrier(&self) -> Carrier {
        self.support.carrier()
    }

    pub fn tokens(&self) -> usize {
        self.support.tokens()
    }

    pub fn xi(&self) -> &Rel {
        &self.xi
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.xi.contains(x, y)
    }

    /// Checks TTP1, TTP2 and TTS1–TTS3, reporting the smallest witness for
    /// each failed axiom.
    pub fn check_axioms(&self) -> AxiomReport {
        AxiomReport {
            checks: vec![
                (AxiomId::Ttp1, self.check_ttp1()),
                (AxiomId::Ttp2, self.check_ttp2()),
                (AxiomId::Tts1, self.check_tts1()),
                (AxiomId::Tts2, self.check_tts2()),
                (AxiomId::Tts3, self.check_tts3()),
            ],
        }
    }

    fn check_ttp1(&self) -> Check<TtsWitness> {
        for a in Subset::all_nonempty(self.carrier()) {
            let ta = self.support.of(a);
            if ta.is_empty() {
                return Check::Fail(TtsWitness::EmptyImage { a });
            }
            for b in Subset::all_nonempty(self.carrier()) {
                if !a.is_subset_of(b) {
                    continue;
                }
                let tb = self.support.of(b);
                if !ta.is_subset_of(tb) {
                    let token = ta.minus(tb).first().expect("nonempty difference");
                    return Check::Fail(TtsWitness::NotMonotone { a, b, token });
                }
            }
        }
        Check::Pass
    }

    fn check_ttp2(&self) -> Check<TtsWitness> {
        let te = self.support.of(Subset::full(self.carrier()));
        Check::from_witness(
            (0..self.tokens())
                .find(|t| !te.contains(*t))
                .map(|token| TtsWitness::MissingToken { token }),
        )
    }

    fn check_tts1(&self) -> Check<TtsWitness> {
        for point in self.carrier().elements() {
            let based = self.support.of_point(point);
            for x in based.iter() {
                for y in based.iter() {
                    if !self.xi.contains(x, y) {
                        return Check::Fail(TtsWitness::PointPairUnrelated { point, x, y });
                    }
                }
            }
        }
        Check::Pass
    }

    fn check_tts2(&self) -> Check<TtsWitness> {
        Check::from_witness(
            self.xi.symmetry_witness().map(|(x, y)| TtsWitness::Asymmetric { x, y }),
        )
    }

    fn check_tts3(&self) -> Check<TtsWitness> {
        Check::from_witness(
            self.xi
                .pairs()
                .find(|&(x, _)| !self.xi.contains(x, x))
                .map(|(x, y)| TtsWitness::DiagonalMissing { x, y }),
        )
    }

    /// The set of Cauchy tokens: those Ξ-related to themselves. Ξ restricted
    /// to this set is reflexive by construction.
    pub fn cauchy(&self) -> BitSet {
        BitSet::from_iter(self.tokens(), (0..self.tokens()).filter(|&t| self.xi.contains(t, t)))
    }

    /// The tokens convergent to `x`: those Ξ-related to some token based
    /// at `x`.
    pub fn convergent_to(&self, x: usize) -> Result<BitSet, TtsError> {
        let n = self.carrier().size();
        if x >= n {
            return Err(TtsError::PointOutOfRange { point: x, size: n });
        }
        let based = self.support.of_point(x);
        Ok(BitSet::from_iter(
            self.tokens(),
            (0..self.tokens()).filter(|&t| based.iter().any(|b| self.xi.contains(t, b))),
        ))
    }

    /// The union of the convergent sets over all points.
    pub fn convergent_anywhere(&self) -> BitSet {
        let mut acc = BitSet::new(self.tokens());
        for x in self.carrier().elements() {
            acc = acc.union(&self.convergent_to(x).expect("point in range"));
        }
        acc
    }

    /// Complete means every Cauchy token converges somewhere. The reverse
    /// inclusion (convergent tokens are Cauchy) holds for every structure
    /// satisfying the axioms, and is asserted unconditionally here.
    pub fn is_complete(&self) -> bool {
        let cauchy = self.cauchy();
        let conver = self.convergent_anywhere();
        assert!(
            conver.is_subset_of(&cauchy),
            "convergent tokens must be Cauchy; axioms violated"
        );
        cauchy == conver
    }

    /// Verifies, for every point, the containment chain
    /// `∅ ≠ T({x}) ⊆ Conver(σ, x) ⊆ Cauchy(σ) ⊆ E'`.
    pub fn check_containment_chain(&self) -> ChainReport {
        let cauchy = self.cauchy();
        let mut first_violation = None;
        for x in self.carrier().elements() {
            let based = self.support.of_point(x);
            let conver = self.convergent_to(x).expect("point in range");
            let stage = if based.is_empty() {
                Some(ChainStage::BasedNonEmpty)
            } else if !based.is_subset_of(&conver) {
                Some(ChainStage::BasedInConvergent)
            } else if !conver.is_subset_of(&cauchy) {
                Some(ChainStage::ConvergentInCauchy)
            } else {
                None
            };
            if let Some(stage) = stage {
                first_violation = Some(ChainViolation { point: x, stage });
                break;
            }
        }
        ChainReport { first_violation }
    }

    /// Extends the Cauchy relation on the same support and reports how the
    /// Cauchy and convergent sets grew. The extension must contain the base
    /// relation and must itself satisfy the axioms. Both inclusion checks
    /// (Cauchy sets, and convergent sets per point) are evaluated explicitly
    /// rather than trusted.
    pub fn extend_cauchy(&self, xi: Rel) -> Result<CauchyExtension, TtsError> {
        if xi.universe() != self.tokens() {
            return Err(TtsError::XiUniverseMismatch {
                got: xi.universe(),
                expected: self.tokens(),
            });
        }
        if let Some((x, y)) = self.xi.pairs().find(|&(x, y)| !xi.contains(x, y)) {
            return Err(TtsError::ExtensionNotCoarser(x, y));
        }
        let extended = Tts::new(self.support.clone(), xi)?;
        let report = extended.check_axioms();
        if let Some((id, _)) = report.first_failure() {
            return Err(TtsError::ExtensionFailsAxioms(id));
        }
        let base_cauchy = self.cauchy();
        let ext_cauchy = extended.cauchy();
        let cauchy_preserved = base_cauchy.is_subset_of(&ext_cauchy);
        let cauchy_strictly_grew = cauchy_preserved && ext_cauchy != base_cauchy;
        let mut conver_preserved = true;
        let mut conver_strict_points = Vec::new();
        for x in self.carrier().elements() {
            let base = self.convergent_to(x).expect("in range");
            let ext = extended.convergent_to(x).expect("in range");
            if !base.is_subset_of(&ext) {
                conver_preserved = false;
            } else if ext != base {
                conver_strict_points.push(x);
            }
        }
        Ok(CauchyExtension {
            extended,
            cauchy_preserved,
            cauchy_strictly_grew,
            conver_preserved,
            conver_strict_points,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChainStage {
    BasedNonEmpty,
    BasedInConvergent,
    ConvergentInCauchy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainViolation {
    pub point: usize,
    pub stage: ChainStage,
}

/// Outcome of the containment-chain check. A violation can only appear when
/// the axioms were forced off.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub first_violation: Option<ChainViolation>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Result of extending the Cauchy relation: the new structure plus the
/// inclusion report for its Cauchy and convergent sets.
#[derive(Debug, Clone)]
pub struct CauchyExtension {
    pub extended: Tts,
    pub cauchy_preserved: bool,
    pub cauchy_strictly_grew: bool,
    pub conver_preserved: bool,
    pub conver_strict_points: Vec<usize>,
}

/// A structure whose token set carries a pre-order, with the localization
/// map and Cauchy relation both up-closed under it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ttsr {
    base: Tts,
    leq: Rel,
}

impl Ttsr {
    pub fn new(base: Tts, leq: Rel) -> Result<Self, TtsError> {
        if leq.universe() != base.tokens() {
            return Err(TtsError::LeqUniverseMismatch {
                got: leq.universe(),
                expected: base.tokens(),
            });
        }
        Ok(Ttsr { base, leq })
    }

    pub fn base(&self) -> &Tts {
        &self.base
    }

    pub fn leq(&self) -> &Rel {
        &self.leq
    }

    pub fn carrier(&self) -> Carrier {
        self.base.carrier()
    }

    pub fn tokens(&self) -> usize {
        self.base.tokens()
    }

    /// All base axioms, plus pre-order validity, TTP3 and TTS4.
    pub fn check_axioms(&self) -> AxiomReport {
        let mut report = self.base.check_axioms();
        report.checks.push((
            AxiomId::LeqReflexive,
            Check::from_witness(
                self.leq.reflexivity_witness().map(|x| TtsWitness::NotReflexive { x }),
            ),
        ));
        report.checks.push((
            AxiomId::LeqTransitive,
            Check::from_witness(
                self.leq
                    .transitivity_witness()
                    .map(|(x, y, z)| TtsWitness::NotTransitive { x, y, z }),
            ),
        ));
        report.checks.push((AxiomId::Ttp3, self.check_ttp3()));
        report.checks.push((AxiomId::Tts4, self.check_tts4()));
        report
    }

    fn check_ttp3(&self) -> Check<TtsWitness> {
        for a in Subset::all(self.carrier()) {
            let ta = self.base.support().of(a);
            for lower in ta.iter() {
                for upper in 0..self.tokens() {
                    if self.leq.contains(lower, upper) && !ta.contains(upper) {
                        return Check::Fail(TtsWitness::NotUpClosed { a, lower, upper });
                    }
                }
            }
        }
        Check::Pass
    }

    fn check_tts4(&self) -> Check<TtsWitness> {
        let m = self.tokens();
        for x in 0..m {
            for y in 0..m {
                if !self.base.related(x, y) {
                    continue;
                }
                for u in 0..m {
                    if !self.leq.contains(x, u) {
                        continue;
                    }
                    for v in 0..m {
                        if self.leq.contains(y, v) && !self.base.related(u, v) {
                            return Check::Fail(TtsWitness::XiNotUpClosed { x, y, u, v });
                        }
                    }
                }
            }
        }
        Check::Pass
    }

    /// The Cauchy set and every convergent set are up-closed under the token
    /// pre-order. Both follow from TTS4 and can only fail when the axioms do.
    pub fn refine_monotonicity(&self) -> RefinementReport {
        let m = self.tokens();
        let cauchy = self.base.cauchy();
        let mut cauchy_up_closed = Check::Pass;
        'cauchy: for t in cauchy.iter() {
            for u in 0..m {
                if self.leq.contains(t, u) && !cauchy.contains(u) {
                    cauchy_up_closed =
                        Check::Fail(TtsWitness::SetNotUpClosed { point: None, lower: t, upper: u });
                    break 'cauchy;
                }
            }
        }
        let mut conver_up_closed = Check::Pass;
        'conver: for x in self.carrier().elements() {
            let conver = self.base.convergent_to(x).expect("in range");
            for t in conver.iter() {
                for u in 0..m {
                    if self.leq.contains(t, u) && !conver.contains(u) {
                        conver_up_closed = Check::Fail(TtsWitness::SetNotUpClosed {
                            point: Some(x),
                            lower: t,
                            upper: u,
                        });
                        break 'conver;
                    }
                }
            }
        }
        RefinementReport { cauchy_up_closed, conver_up_closed }
    }
}

/// Up-closure of the Cauchy and convergent sets under the token pre-order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefinementReport {
    pub cauchy_up_closed: Check<TtsWitness>,
    pub conver_up_closed: Check<TtsWitness>,
}

impl RefinementReport {
    pub fn passed(&self) -> bool {
        self.cauchy_up_closed.passed() && self.conver_up_closed.passed()
    }
}
