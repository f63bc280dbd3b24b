//! Uniform convergence structures on finite carriers, and finite
//! uniformities.
//!
//! A uniform convergence structure is a family of filters on `E × E`; with
//! every filter principal it is stored as the family of nonempty core
//! relations. The filter-level closure conditions translate to core level
//! as: `↑R ⊇ ↑S ⇔ R ⊆ S`, `↑R ∩ ↑S = ↑(R ∪ S)`, `↑R ∘ ↑S = ↑(R ∘ S)` when
//! the composite is nonempty, and `(↑R)⁻¹ = ↑(R⁻¹)`.
//!
//! A finite uniformity is identified with an equivalence relation: a
//! principal uniformity's minimal entourage contains the diagonal, equals
//! its own inverse, and absorbs its own composition, which on a finite
//! carrier makes it reflexive, symmetric and transitive.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::check::Check;
use crate::convergence::{embed_topology, refinement_order, Embedding, TopologyEmbedding};
use crate::derived_topology::Topology;
use crate::foundations::{Carrier, PrincipalFilter, Rel, Subset};
use crate::tts::Ttsr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UniformError {
    #[error("generator {0} is over universe {1}, expected carrier size {2}")]
    GeneratorUniverseMismatch(usize, usize, usize),
    #[error("generator {0} has an empty core")]
    EmptyGenerator(usize),
    #[error("empty generator family")]
    EmptyFamily,
    #[error("entourage is not an equivalence relation: {0}")]
    NotEquivalence(String),
    #[error("down-closure of an entourage with {pairs} pairs exceeds the cap {cap}")]
    DownClosureTooLarge { pairs: usize, cap: usize },
}

/// A uniform convergence structure, stored as the set of generator cores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformConvergence {
    carrier: Carrier,
    generators: BTreeSet<Rel>,
}

impl UniformConvergence {
    pub fn new(
        carrier: Carrier,
        generators: impl IntoIterator<Item = Rel>,
    ) -> Result<Self, UniformError> {
        let mut set = BTreeSet::new();
        for (i, r) in generators.into_iter().enumerate() {
            if r.universe() != carrier.size() {
                return Err(UniformError::GeneratorUniverseMismatch(
                    i,
                    r.universe(),
                    carrier.size(),
                ));
            }
            if r.is_empty() {
                return Err(UniformError::EmptyGenerator(i));
            }
            set.insert(r);
        }
        if set.is_empty() {
            return Err(UniformError::EmptyFamily);
        }
        Ok(UniformConvergence { carrier, generators: set })
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn contains(&self, r: &Rel) -> bool {
        self.generators.contains(r)
    }

    pub fn generators(&self) -> impl Iterator<Item = &Rel> {
        self.generators.iter()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Witnesses for the closure conditions of a uniform convergence structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "shape")]
pub enum UcsWitness {
    /// `↑{(x, x)}` missing for this point.
    MissingPointPair { point: usize },
    /// A member with a nonempty subrelation (refinement) outside the family.
    RefinementEscapes { member: Rel, refinement: Rel },
    /// Two members whose union (filter meet) escapes.
    MeetEscapes { a: Rel, b: Rel },
    /// A member whose inverse escapes.
    InverseEscapes { member: Rel },
    /// Two members with nonempty composite outside the family.
    CompositionEscapes { a: Rel, b: Rel },
}

impl std::fmt::Display for UcsWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UcsWitness::MissingPointPair { point } => {
                write!(f, "↑{{({point},{point})}} missing")
            }
            UcsWitness::RefinementEscapes { member, refinement } => {
                write!(f, "{refinement} ⊆ {member} missing from the family")
            }
            UcsWitness::MeetEscapes { a, b } => write!(f, "{a} ∪ {b} missing from the family"),
            UcsWitness::InverseEscapes { member } => write!(f, "inverse of {member} missing"),
            UcsWitness::CompositionEscapes { a, b } => {
                write!(f, "composite of {a} and {b} missing")
            }
        }
    }
}

/// Closure-condition outcomes for a generator family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UcsAxioms {
    pub point_pairs: Check<UcsWitness>,
    pub meet_closed: Check<UcsWitness>,
    pub refinement_closed: Check<UcsWitness>,
    pub inverse_closed: Check<UcsWitness>,
    pub composition_closed: Check<UcsWitness>,
}

impl UcsAxioms {
    pub fn passed(&self) -> bool {
        self.point_pairs.passed()
            && self.meet_closed.passed()
            && self.refinement_closed.passed()
            && self.inverse_closed.passed()
            && self.composition_closed.passed()
    }
}

/// For down-closed families, pairwise checks reduce to the maximum member;
/// direct quadratic scans are kept below this family size.
const DIRECT_CHECK_LIMIT: usize = 4096;

pub fn check_ucs_axioms(ucs: &UniformConvergence) -> UcsAxioms {
    let n = ucs.carrier().size();

    let point_pairs = Check::from_witness(
        (0..n)
            .find(|&x| !ucs.contains(&Rel::from_pairs(n, [(x, x)])))
            .map(|point| UcsWitness::MissingPointPair { point }),
    );

    // refinement closure: removing one pair at a time reaches every nonempty
    // subrelation, so the single-removal check is complete
    let mut refinement_closed = Check::Pass;
    'refine: for member in ucs.generators() {
        if member.count() < 2 {
            continue;
        }
        for (x, y) in member.pairs() {
            let mut sub = member.clone();
            sub.remove(x, y);
            if !ucs.contains(&sub) {
                refinement_closed =
                    Check::Fail(UcsWitness::RefinementEscapes { member: member.clone(), refinement: sub });
                break 'refine;
            }
        }
    }

    let small = ucs.len() <= DIRECT_CHECK_LIMIT;
    let down_closed = refinement_closed.passed();

    let mut meet_closed = Check::Pass;
    let mut composition_closed = Check::Pass;
    if small || !down_closed {
        'meet: for a in ucs.generators() {
            for b in ucs.generators() {
                if !ucs.contains(&a.union(b)) {
                    meet_closed = Check::Fail(UcsWitness::MeetEscapes { a: a.clone(), b: b.clone() });
                    break 'meet;
                }
            }
        }
        'comp: for a in ucs.generators() {
            for b in ucs.generators() {
                let ab = a.compose(b);
                if !ab.is_empty() && !ucs.contains(&ab) {
                    composition_closed =
                        Check::Fail(UcsWitness::CompositionEscapes { a: a.clone(), b: b.clone() });
                    break 'comp;
                }
            }
        }
    } else {
        // down-closed: the family is the set of nonempty subrelations of its
        // union, so both closures reduce to the union member
        let max = ucs
            .generators()
            .fold(Rel::empty(n), |acc, r| acc.union(r));
        if !ucs.contains(&max) {
            meet_closed = Check::Fail(UcsWitness::MeetEscapes { a: max.clone(), b: max.clone() });
        }
        let mm = max.compose(&max);
        if !mm.is_empty() && !ucs.contains(&mm) {
            composition_closed =
                Check::Fail(UcsWitness::CompositionEscapes { a: max.clone(), b: max });
        }
    }

    let inverse_closed = Check::from_witness(
        ucs.generators()
            .find(|r| !ucs.contains(&r.inverse()))
            .map(|r| UcsWitness::InverseEscapes { member: r.clone() }),
    );

    UcsAxioms { point_pairs, meet_closed, refinement_closed, inverse_closed, composition_closed }
}

/// Embeds a uniform convergence structure over the standard filter support:
/// two filters are Cauchy related when the product of their cores belongs to
/// the generator family. The refinement-ordered variant is included.
pub fn embed_ucs(ucs: &UniformConvergence) -> Embedding {
    let carrier = ucs.carrier();
    let support = crate::tts::TtpAssignment::standard_filter_support(carrier);
    let count = PrincipalFilter::count(carrier);
    let mut xi = Rel::empty(count);
    for f in PrincipalFilter::all(carrier) {
        for g in PrincipalFilter::all(carrier) {
            let core = f.product(g).expect("same carrier");
            if ucs.contains(core.core()) {
                xi.insert(f.token_index(), g.token_index());
            }
        }
    }
    let tts = crate::tts::Tts::new(support, xi).expect("matching universes");
    let ttsr = Ttsr::new(tts.clone(), refinement_order(carrier)).expect("matching universes");
    Embedding { tts, ttsr }
}

/// A finite uniformity: an equivalence-relation entourage on the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteUniformity {
    carrier: Carrier,
    entourage: Rel,
}

impl FiniteUniformity {
    pub fn new(carrier: Carrier, entourage: Rel) -> Result<Self, UniformError> {
        assert_eq!(entourage.universe(), carrier.size());
        if let Some(x) = entourage.reflexivity_witness() {
            return Err(UniformError::NotEquivalence(format!("({x},{x}) missing")));
        }
        if let Some((x, y)) = entourage.symmetry_witness() {
            return Err(UniformError::NotEquivalence(format!("({x},{y}) without ({y},{x})")));
        }
        if let Some((x, y, z)) = entourage.transitivity_witness() {
            return Err(UniformError::NotEquivalence(format!("chain {x},{y},{z} breaks")));
        }
        Ok(FiniteUniformity { carrier, entourage })
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn entourage(&self) -> &Rel {
        &self.entourage
    }

    pub fn class_of(&self, x: usize) -> Subset {
        Subset::from_members(self.carrier, self.entourage.successors(x).iter())
            .expect("in range")
    }

    /// Equivalence classes in order of their least member.
    pub fn classes(&self) -> Vec<Subset> {
        let mut seen = Subset::empty(self.carrier);
        let mut out = Vec::new();
        for x in self.carrier.elements() {
            if !seen.contains(x) {
                let class = self.class_of(x);
                seen = seen.union(class);
                out.push(class);
            }
        }
        out
    }

    /// The uniform topology: opens are unions of classes, so the minimal
    /// neighbourhood of a point is its class.
    pub fn topology(&self) -> Topology {
        let carrier = self.carrier;
        let opens = Subset::all(carrier)
            .filter(|a| a.members().all(|x| self.class_of(x).is_subset_of(*a)));
        Topology::new(carrier, opens).expect("class unions form a topology")
    }

    /// The generator family of all nonempty subrelations of the entourage.
    pub fn down_closure_ucs(&self) -> Result<UniformConvergence, UniformError> {
        let pairs: Vec<(usize, usize)> = self.entourage.pairs().collect();
        if pairs.len() > 16 {
            return Err(UniformError::DownClosureTooLarge { pairs: pairs.len(), cap: 16 });
        }
        let n = self.carrier.size();
        let gens = (1u32..1 << pairs.len()).map(|mask| {
            Rel::from_pairs(
                n,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, p)| *p),
            )
        });
        UniformConvergence::new(self.carrier, gens)
    }
}

/// Embedding report for a uniformity: the induced structure (built through
/// the uniform topology, since two filters are Cauchy related exactly when
/// they share a limit in it), the Cauchy criterion, completeness, and the
/// transitivity audit.
#[derive(Debug, Clone)]
pub struct UniformityEmbedding {
    pub embedding: Embedding,
    pub complete: bool,
    /// Cauchy filters are exactly those whose core squares into the
    /// entourage, i.e. sits inside a single class.
    pub cauchy_matches_square_criterion: bool,
    pub xi_transitive: Check<(usize, usize, usize)>,
}

/// Builds the token structure of a finite uniformity. The carrier is its own
/// completion at finite scale, so the shared-limit relation is evaluated in
/// the uniform topology directly; limits may be non-unique within a class.
pub fn embed_uniformity(upsilon: &FiniteUniformity) -> UniformityEmbedding {
    let TopologyEmbedding { embedding, complete, xi_transitive } =
        embed_topology(&upsilon.topology());
    let carrier = upsilon.carrier();
    let cauchy = embedding.tts.cauchy();
    let cauchy_matches_square_criterion = PrincipalFilter::all(carrier).all(|f| {
        let square = f.product(f).expect("same carrier");
        let squares_in = square.core().is_subset_of(upsilon.entourage());
        cauchy.contains(f.token_index()) == squares_in
    });
    UniformityEmbedding { embedding, complete, cauchy_matches_square_criterion, xi_transitive }
}
