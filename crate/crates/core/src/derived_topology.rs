//! From a structure's Cauchy calculus to ordinary topology: σ-closed and
//! σ-open sets, closure and interior operators, neighbourhoods, the
//! adherence operator, compatibility with a token pre-order, and the
//! derivation of an open-set topology once strong compatibility holds.
//!
//! Closed-set computation iterates all subsets directly; carriers are capped
//! small enough that the definitional loop is the clearest implementation.

use serde::Serialize;

use crate::check::Check;
use crate::foundations::{BitSet, Carrier, PrincipalFilter, Rel, Subset};
use crate::tts::{Tts, Ttsr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("the empty set must be open")]
    MissingEmpty,
    #[error("the whole carrier must be open")]
    MissingFull,
    #[error("opens not closed under union: {0} ∪ {1}")]
    NotUnionClosed(Subset, Subset),
    #[error("opens not closed under intersection: {0} ∩ {1}")]
    NotIntersectionClosed(Subset, Subset),
}

/// An ordinary open-set topology on a finite carrier. The family contains
/// the empty set and the carrier and is closed under pairwise union and
/// intersection, which on a finite carrier is full closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Topology {
    carrier: Carrier,
    opens: BitSet, // indexed by subset mask
}

impl Topology {
    pub fn new(
        carrier: Carrier,
        opens: impl IntoIterator<Item = Subset>,
    ) -> Result<Self, TopologyError> {
        let mut family = BitSet::new(carrier.subset_count());
        for s in opens {
            assert_eq!(s.carrier(), carrier);
            family.insert(s.mask() as usize);
        }
        Self::from_family(carrier, family)
    }

    pub fn from_family(carrier: Carrier, opens: BitSet) -> Result<Self, TopologyError> {
        assert_eq!(opens.len(), carrier.subset_count());
        if !opens.contains(0) {
            return Err(TopologyError::MissingEmpty);
        }
        if !opens.contains(carrier.subset_count() - 1) {
            return Err(TopologyError::MissingFull);
        }
        let members: Vec<usize> = opens.iter().collect();
        for &a in &members {
            for &b in &members {
                if !opens.contains(a | b) {
                    return Err(TopologyError::NotUnionClosed(
                        Subset::from_mask(carrier, a as u32),
                        Subset::from_mask(carrier, b as u32),
                    ));
                }
                if !opens.contains(a & b) {
                    return Err(TopologyError::NotIntersectionClosed(
                        Subset::from_mask(carrier, a as u32),
                        Subset::from_mask(carrier, b as u32),
                    ));
                }
            }
        }
        Ok(Topology { carrier, opens })
    }

    pub fn discrete(carrier: Carrier) -> Self {
        Topology { carrier, opens: BitSet::full(carrier.subset_count()) }
    }

    pub fn indiscrete(carrier: Carrier) -> Self {
        let mut opens = BitSet::new(carrier.subset_count());
        opens.insert(0);
        opens.insert(carrier.subset_count() - 1);
        Topology { carrier, opens }
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn is_open(&self, a: Subset) -> bool {
        assert_eq!(a.carrier(), self.carrier);
        self.opens.contains(a.mask() as usize)
    }

    pub fn is_closed(&self, a: Subset) -> bool {
        self.is_open(a.complement())
    }

    pub fn opens(&self) -> impl Iterator<Item = Subset> + '_ {
        self.opens.iter().map(|m| Subset::from_mask(self.carrier, m as u32))
    }

    pub fn closeds(&self) -> Vec<Subset> {
        let mut v: Vec<Subset> = self.opens().map(|a| a.complement()).collect();
        v.sort();
        v
    }

    pub fn open_count(&self) -> usize {
        self.opens.count()
    }

    /// The smallest open set containing `x`; open because the carrier is
    /// finite.
    pub fn minimal_neighbourhood(&self, x: usize) -> Subset {
        let mut acc = Subset::full(self.carrier);
        for a in self.opens() {
            if a.contains(x) {
                acc = acc.inter(a);
            }
        }
        debug_assert!(self.is_open(acc));
        acc
    }

    /// The neighbourhood filter of `x`, principal with the minimal open
    /// neighbourhood as core.
    pub fn neighbourhood_filter(&self, x: usize) -> PrincipalFilter {
        PrincipalFilter::new(self.minimal_neighbourhood(x)).expect("x in its own neighbourhood")
    }
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "topology[")?;
        for (i, a) in self.opens().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Topology {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.open_count()))?;
        for a in self.opens() {
            seq.serialize_element(&a)?;
        }
        seq.end()
    }
}

/// Is `a` σ-closed: every token based in `a` converges only to points of `a`.
pub fn is_sigma_closed(sigma: &Tts, a: Subset) -> bool {
    let ta = sigma.support().of(a);
    for x in sigma.carrier().elements() {
        if a.contains(x) {
            continue;
        }
        let conver = sigma.convergent_to(x).expect("point in range");
        if ta.iter().any(|t| conver.contains(t)) {
            return false;
        }
    }
    true
}

/// All σ-closed subsets in mask order. Always contains the empty set and the
/// carrier and is closed under intersections.
pub fn sigma_closed_sets(sigma: &Tts) -> Vec<Subset> {
    Subset::all(sigma.carrier()).filter(|a| is_sigma_closed(sigma, *a)).collect()
}

pub fn is_sigma_open(sigma: &Tts, a: Subset) -> bool {
    is_sigma_closed(sigma, a.complement())
}

/// Intersection of the σ-closed supersets of `a`.
pub fn sigma_closure(sigma: &Tts, a: Subset) -> Subset {
    let mut acc = Subset::full(sigma.carrier());
    for b in Subset::all(sigma.carrier()) {
        if a.is_subset_of(b) && is_sigma_closed(sigma, b) {
            acc = acc.inter(b);
        }
    }
    acc
}

/// Union of the σ-open subsets of `a`.
pub fn sigma_interior(sigma: &Tts, a: Subset) -> Subset {
    let mut acc = Subset::empty(sigma.carrier());
    for b in Subset::all(sigma.carrier()) {
        if b.is_subset_of(a) && is_sigma_open(sigma, b) {
            acc = acc.union(b);
        }
    }
    acc
}

/// The σ-neighbourhoods of `x`: sets containing a σ-open set around `x`.
pub fn sigma_neighbourhoods(sigma: &Tts, x: usize) -> Result<Vec<Subset>, crate::tts::TtsError> {
    let n = sigma.carrier().size();
    if x >= n {
        return Err(crate::tts::TtsError::PointOutOfRange { point: x, size: n });
    }
    let opens: Vec<Subset> =
        Subset::all(sigma.carrier()).filter(|b| b.contains(x) && is_sigma_open(sigma, *b)).collect();
    Ok(Subset::all(sigma.carrier())
        .filter(|a| opens.iter().any(|b| b.is_subset_of(*a)))
        .collect())
}

/// The adherence operator: tokens of `T(b)` dominated by a token of `T(a)`.
pub fn adherence(sigma: &Tts, leq: &Rel, a: Subset, b: Subset) -> BitSet {
    let ta = sigma.support().of(a);
    let tb = sigma.support().of(b);
    BitSet::from_iter(
        sigma.tokens(),
        tb.iter().filter(|&t| ta.iter().any(|u| leq.contains(t, u))),
    )
}

/// Witnesses for compatibility failures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "shape")]
pub enum CompatWitness {
    /// `lower ∈ T(a)`, `lower ≤ upper`, `upper ∉ T(a)`.
    TNotUpClosed { a: Subset, lower: usize, upper: usize },
    /// `lower` converges to `point`, `lower ≤ upper`, `upper` does not.
    ConverNotUpClosed { point: usize, lower: usize, upper: usize },
    /// `lower` Cauchy, `lower ≤ upper`, but `upper` not Cauchy or the pair
    /// is not Ξ-related.
    CauchyNotUpClosed { lower: usize, upper: usize, pair_related: bool },
    /// `T(a ∪ b)` not covered by the two adherences.
    UnionNotCovered { a: Subset, b: Subset, token: usize },
}

impl std::fmt::Display for CompatWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CompatWitness::TNotUpClosed { a, lower, upper } => {
                write!(f, "T({a}) has {lower} but not {upper} ≥ {lower}")
            }
            CompatWitness::ConverNotUpClosed { point, lower, upper } => {
                write!(f, "convergent-to-{point} has {lower} but not {upper} ≥ {lower}")
            }
            CompatWitness::CauchyNotUpClosed { lower, upper, pair_related } => {
                if *pair_related {
                    write!(f, "Cauchy set has {lower} but not {upper} ≥ {lower}")
                } else {
                    write!(f, "Cauchy {lower} ≤ {upper} but the pair is not Ξ-related")
                }
            }
            CompatWitness::UnionNotCovered { a, b, token } => {
                write!(f, "token {token} in T({a} ∪ {b}) dominated by neither side")
            }
        }
    }
}

/// The three compatibility conditions between a structure and a token
/// pre-order, plus the two implications that tie them back to the structure
/// axioms (recorded as consistency cross-checks).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    /// Every `T(a)` is up-closed under the pre-order.
    pub t_up_closed: Check<CompatWitness>,
    /// Every convergent set is up-closed.
    pub conver_up_closed: Check<CompatWitness>,
    /// The Cauchy set is up-closed and dominating tokens stay Ξ-related to
    /// what they dominate.
    pub cauchy_up_closed: Check<CompatWitness>,
    /// `t_up_closed` is the same condition as the TTP3 axiom; both
    /// evaluations must agree.
    pub matches_ttp3: bool,
    /// If TTS4 and TTS3 hold for the pair then `cauchy_up_closed` must pass.
    pub implied_by_tts4: bool,
}

impl CompatibilityReport {
    pub fn compatible(&self) -> bool {
        self.t_up_closed.passed() && self.conver_up_closed.passed() && self.cauchy_up_closed.passed()
    }

    pub fn cross_checks_ok(&self) -> bool {
        self.matches_ttp3 && self.implied_by_tts4
    }
}

pub fn check_compatibility(sigma: &Tts, leq: &Rel) -> CompatibilityReport {
    assert_eq!(leq.universe(), sigma.tokens());
    let m = sigma.tokens();

    let mut t_up_closed = Check::Pass;
    't: for a in Subset::all(sigma.carrier()) {
        let ta = sigma.support().of(a);
        for lower in ta.iter() {
            for upper in 0..m {
                if leq.contains(lower, upper) && !ta.contains(upper) {
                    t_up_closed = Check::Fail(CompatWitness::TNotUpClosed { a, lower, upper });
                    break 't;
                }
            }
        }
    }

    let mut conver_up_closed = Check::Pass;
    'c: for point in sigma.carrier().elements() {
        let conver = sigma.convergent_to(point).expect("in range");
        for lower in conver.iter() {
            for upper in 0..m {
                if leq.contains(lower, upper) && !conver.contains(upper) {
                    conver_up_closed =
                        Check::Fail(CompatWitness::ConverNotUpClosed { point, lower, upper });
                    break 'c;
                }
            }
        }
    }

    let cauchy = sigma.cauchy();
    let mut cauchy_up_closed = Check::Pass;
    'k: for lower in cauchy.iter() {
        for upper in 0..m {
            if !leq.contains(lower, upper) {
                continue;
            }
            if !cauchy.contains(upper) {
                cauchy_up_closed = Check::Fail(CompatWitness::CauchyNotUpClosed {
                    lower,
                    upper,
                    pair_related: true,
                });
                break 'k;
            }
            if !sigma.related(lower, upper) {
                cauchy_up_closed = Check::Fail(CompatWitness::CauchyNotUpClosed {
                    lower,
                    upper,
                    pair_related: false,
                });
                break 'k;
            }
        }
    }

    // cross-check 1: the first condition is a restatement of TTP3
    let ttsr = Ttsr::new(sigma.clone(), leq.clone()).expect("universe checked");
    let ttp3 = ttsr.check_axioms().outcome(crate::tts::AxiomId::Ttp3).unwrap().passed();
    let matches_ttp3 = ttp3 == t_up_closed.passed();

    // cross-check 2: TTS4 together with TTS3 forces the Cauchy condition
    let tts4 = ttsr.check_axioms().outcome(crate::tts::AxiomId::Tts4).unwrap().passed();
    let tts3 = sigma.check_axioms().outcome(crate::tts::AxiomId::Tts3).unwrap().passed();
    let implied_by_tts4 = !(tts4 && tts3) || cauchy_up_closed.passed();

    CompatibilityReport {
        t_up_closed,
        conver_up_closed,
        cauchy_up_closed,
        matches_ttp3,
        implied_by_tts4,
    }
}

/// Compatibility plus the covering condition: every token of `T(a ∪ b)` is
/// dominated inside one of the two adherences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongCompatibilityReport {
    pub compatibility: CompatibilityReport,
    pub union_covered: Check<CompatWitness>,
}

impl StrongCompatibilityReport {
    pub fn strongly_compatible(&self) -> bool {
        self.compatibility.compatible() && self.union_covered.passed()
    }
}

pub fn check_strong_compatibility(sigma: &Tts, leq: &Rel) -> StrongCompatibilityReport {
    let compatibility = check_compatibility(sigma, leq);
    let mut union_covered = Check::Pass;
    'u: for a in Subset::all(sigma.carrier()) {
        for b in Subset::all(sigma.carrier()) {
            let ab = a.union(b);
            let tab = sigma.support().of(ab);
            let adh_a = adherence(sigma, leq, a, ab);
            let adh_b = adherence(sigma, leq, b, ab);
            let covered = adh_a.union(&adh_b);
            if !tab.is_subset_of(&covered) {
                let token = tab.minus(&covered).first().expect("nonempty difference");
                union_covered = Check::Fail(CompatWitness::UnionNotCovered { a, b, token });
                break 'u;
            }
        }
    }
    StrongCompatibilityReport { compatibility, union_covered }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeriveError {
    #[error("structure and pre-order are not strongly compatible: {witness}")]
    NotStronglyCompatible { witness: String },
}

/// Witness for the neighbourhood-refinement property of the derivation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighbourhoodWitness {
    pub point: usize,
    pub token: usize,
    pub neighbourhood: Subset,
}

impl std::fmt::Display for NeighbourhoodWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "token {token} converges to {point} but is dominated by nothing convergent in T({nbhd})",
            token = self.token,
            point = self.point,
            nbhd = self.neighbourhood
        )
    }
}

/// The consequences of strong compatibility, re-verified on every derivation
/// as a self-test even though the precondition already guarantees them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropositionReport {
    /// Unions of σ-closed pairs are σ-closed.
    pub unions_closed: Check<(Subset, Subset)>,
    /// Intersections of σ-open pairs are σ-open.
    pub intersections_closed: Check<(Subset, Subset)>,
    /// Every token convergent to `x` is dominated, inside each σ-neighbourhood
    /// image, by a token still convergent to `x`.
    pub neighbourhood_refinement: Check<NeighbourhoodWitness>,
}

impl PropositionReport {
    pub fn passed(&self) -> bool {
        self.unions_closed.passed()
            && self.intersections_closed.passed()
            && self.neighbourhood_refinement.passed()
    }
}

/// A derived topology: the open-set topology whose closed sets are exactly
/// the σ-closed sets, with per-point minimal neighbourhoods as a convenience
/// output, plus the re-verified proposition report.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub topology: Topology,
    pub closed_sets: Vec<Subset>,
    pub minimal_neighbourhoods: Vec<Subset>,
    pub proposition: PropositionReport,
}

/// Derives the open-set topology from a strongly compatible pair. Refuses,
/// returning the covering-condition witness, when strong compatibility
/// fails.
pub fn derive_topology(sigma: &Tts, leq: &Rel) -> Result<Derivation, DeriveError> {
    let strong = check_strong_compatibility(sigma, leq);
    if !strong.strongly_compatible() {
        let witness = strong
            .union_covered
            .witness()
            .map(|w| w.to_string())
            .or_else(|| strong.compatibility.t_up_closed.witness().map(|w| w.to_string()))
            .or_else(|| strong.compatibility.conver_up_closed.witness().map(|w| w.to_string()))
            .or_else(|| strong.compatibility.cauchy_up_closed.witness().map(|w| w.to_string()))
            .unwrap_or_else(|| "unknown".into());
        return Err(DeriveError::NotStronglyCompatible { witness });
    }

    let closed_sets = sigma_closed_sets(sigma);
    let closed_family: Vec<Subset> = closed_sets.clone();

    let mut unions_closed = Check::Pass;
    'u: for &a in &closed_family {
        for &b in &closed_family {
            if !is_sigma_closed(sigma, a.union(b)) {
                unions_closed = Check::Fail((a, b));
                break 'u;
            }
        }
    }

    let opens: Vec<Subset> = closed_family.iter().map(|a| a.complement()).collect();
    let mut intersections_closed = Check::Pass;
    'i: for &a in &opens {
        for &b in &opens {
            if !is_sigma_open(sigma, a.inter(b)) {
                intersections_closed = Check::Fail((a, b));
                break 'i;
            }
        }
    }

    let mut neighbourhood_refinement = Check::Pass;
    'n: for x in sigma.carrier().elements() {
        let conver = sigma.convergent_to(x).expect("in range");
        let nbhds = sigma_neighbourhoods(sigma, x).expect("in range");
        for token in conver.iter() {
            for &a in &nbhds {
                let ta = sigma.support().of(a);
                let dominated = ta
                    .iter()
                    .any(|u| conver.contains(u) && leq.contains(token, u));
                if !dominated {
                    neighbourhood_refinement = Check::Fail(NeighbourhoodWitness {
                        point: x,
                        token,
                        neighbourhood: a,
                    });
                    break 'n;
                }
            }
        }
    }

    let proposition =
        PropositionReport { unions_closed, intersections_closed, neighbourhood_refinement };

    let topology = Topology::new(sigma.carrier(), opens)
        .expect("strongly compatible derivation yields a topology");
    let minimal_neighbourhoods =
        sigma.carrier().elements().map(|x| topology.minimal_neighbourhood(x)).collect();

    Ok(Derivation { topology, closed_sets, minimal_neighbourhoods, proposition })
}
