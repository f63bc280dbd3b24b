//! Filter convergence structures: an assignment of convergent filters to
//! each point, closed under refinement and finite meets and containing the
//! point filter. Includes the bridges to and from topologies, the embedding
//! into token structures over the standard filter support, continuous
//! convergence on function spaces, and the exponential law.
//!
//! Filters are identified with their tokens (core mask - 1), so a structure
//! stores one token set per point.

use serde::Serialize;

use crate::check::Check;
use crate::derived_topology::Topology;
use crate::foundations::{BitSet, Carrier, PrincipalFilter, Rel, Subset};
use crate::tts::{Tts, TtpAssignment, Ttsr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConvergenceError {
    #[error("lambda has {got} rows, expected one per point ({expected})")]
    WrongPointCount { got: usize, expected: usize },
    #[error("lambda row {row} ranges over {got} filters, expected {expected}")]
    WrongFilterUniverse { row: usize, got: usize, expected: usize },
}

/// A convergence structure: for each point, the set of filters convergent
/// to it, stored by filter token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConvergenceStructure {
    carrier: Carrier,
    lambda: Vec<BitSet>,
}

impl ConvergenceStructure {
    pub fn new(carrier: Carrier, lambda: Vec<BitSet>) -> Result<Self, ConvergenceError> {
        if lambda.len() != carrier.size() {
            return Err(ConvergenceError::WrongPointCount {
                got: lambda.len(),
                expected: carrier.size(),
            });
        }
        let filters = PrincipalFilter::count(carrier);
        for (row, set) in lambda.iter().enumerate() {
            if set.len() != filters {
                return Err(ConvergenceError::WrongFilterUniverse {
                    row,
                    got: set.len(),
                    expected: filters,
                });
            }
        }
        Ok(ConvergenceStructure { carrier, lambda })
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn filter_count(&self) -> usize {
        PrincipalFilter::count(self.carrier)
    }

    /// The filters convergent to `x`, as a token set.
    pub fn at(&self, x: usize) -> &BitSet {
        &self.lambda[x]
    }

    pub fn converges(&self, f: PrincipalFilter, x: usize) -> bool {
        self.lambda[x].contains(f.token_index())
    }

    /// Points the filter converges to.
    pub fn limits(&self, f: PrincipalFilter) -> Subset {
        Subset::from_members(
            self.carrier,
            self.carrier.elements().filter(|&x| self.converges(f, x)),
        )
        .expect("points in range")
    }
}

/// Witnesses for convergence-axiom failures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "shape")]
pub enum ConvergenceWitness {
    /// The point filter of `point` does not converge to it.
    MissingPointFilter { point: usize },
    /// Two convergent filters whose meet does not converge.
    MeetEscapes { point: usize, a: Subset, b: Subset },
    /// A refinement of a convergent filter that does not converge.
    RefinementEscapes { point: usize, coarse: Subset, fine: Subset },
}

impl std::fmt::Display for ConvergenceWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConvergenceWitness::MissingPointFilter { point } => {
                write!(f, "↑{{{point}}} missing from λ({point})")
            }
            ConvergenceWitness::MeetEscapes { point, a, b } => {
                write!(f, "↑{a} and ↑{b} converge to {point} but their meet does not")
            }
            ConvergenceWitness::RefinementEscapes { point, coarse, fine } => {
                write!(f, "↑{coarse} converges to {point} but its refinement ↑{fine} does not")
            }
        }
    }
}

/// Per-axiom outcomes for a convergence structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceAxioms {
    /// Each point filter converges to its point.
    pub point_filter: Check<ConvergenceWitness>,
    /// Convergent sets are closed under pairwise meets.
    pub meet_closed: Check<ConvergenceWitness>,
    /// Convergent sets are up-closed under refinement.
    pub refinement_closed: Check<ConvergenceWitness>,
}

impl ConvergenceAxioms {
    pub fn passed(&self) -> bool {
        self.point_filter.passed() && self.meet_closed.passed() && self.refinement_closed.passed()
    }
}

pub fn check_convergence_axioms(lambda: &ConvergenceStructure) -> ConvergenceAxioms {
    let carrier = lambda.carrier();

    let point_filter = Check::from_witness(
        carrier
            .elements()
            .find(|&x| !lambda.converges(PrincipalFilter::point(carrier, x), x))
            .map(|point| ConvergenceWitness::MissingPointFilter { point }),
    );

    let mut meet_closed = Check::Pass;
    'meets: for x in carrier.elements() {
        for a in lambda.at(x).iter() {
            let fa = PrincipalFilter::from_token_index(carrier, a);
            for b in lambda.at(x).iter() {
                let fb = PrincipalFilter::from_token_index(carrier, b);
                let meet = fa.meet(fb).expect("same carrier");
                if !lambda.converges(meet, x) {
                    meet_closed = Check::Fail(ConvergenceWitness::MeetEscapes {
                        point: x,
                        a: fa.core(),
                        b: fb.core(),
                    });
                    break 'meets;
                }
            }
        }
    }

    let mut refinement_closed = Check::Pass;
    'refs: for x in carrier.elements() {
        for a in lambda.at(x).iter() {
            let fa = PrincipalFilter::from_token_index(carrier, a);
            for fine in PrincipalFilter::all(carrier) {
                if fine.refines(fa).expect("same carrier") && !lambda.converges(fine, x) {
                    refinement_closed = Check::Fail(ConvergenceWitness::RefinementEscapes {
                        point: x,
                        coarse: fa.core(),
                        fine: fine.core(),
                    });
                    break 'refs;
                }
            }
        }
    }

    ConvergenceAxioms { point_filter, meet_closed, refinement_closed }
}

/// The convergence structure of a topology: a filter converges to `x` when
/// it refines the neighbourhood filter of `x`.
pub fn topology_to_convergence(topology: &Topology) -> ConvergenceStructure {
    let carrier = topology.carrier();
    let lambda = carrier
        .elements()
        .map(|x| {
            let nbhd = topology.neighbourhood_filter(x);
            BitSet::from_iter(
                PrincipalFilter::count(carrier),
                PrincipalFilter::all(carrier)
                    .filter(|f| f.refines(nbhd).expect("same carrier"))
                    .map(|f| f.token_index()),
            )
        })
        .collect();
    ConvergenceStructure { carrier, lambda }
}

/// The finest topology whose convergence contains the structure's: a set is
/// open when every filter convergent to one of its points contains it.
pub fn induced_topology(lambda: &ConvergenceStructure) -> Topology {
    let carrier = lambda.carrier();
    let opens = Subset::all(carrier).filter(|a| {
        a.members().all(|x| {
            lambda.at(x).iter().all(|t| {
                let core = PrincipalFilter::from_token_index(carrier, t).core();
                core.is_subset_of(*a)
            })
        })
    });
    Topology::new(carrier, opens).expect("induced family is a topology")
}

/// A structure is topological when it is the convergence of its induced
/// topology. This settles, exactly and at filter level, whether the
/// structure comes from an ordinary topology.
pub fn is_topological(lambda: &ConvergenceStructure) -> bool {
    &topology_to_convergence(&induced_topology(lambda)) == lambda
}

/// A token structure over the standard filter support, together with its
/// refinement-ordered variant. Filter tokens are ordered by "is refined
/// by": `f ≤ g` when `g` refines `f`.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub tts: Tts,
    pub ttsr: Ttsr,
}

/// The refinement pre-order (in fact a partial order) on filter tokens.
pub fn refinement_order(carrier: Carrier) -> Rel {
    let count = PrincipalFilter::count(carrier);
    let mut leq = Rel::empty(count);
    for f in PrincipalFilter::all(carrier) {
        for g in PrincipalFilter::all(carrier) {
            if g.refines(f).expect("same carrier") {
                leq.insert(f.token_index(), g.token_index());
            }
        }
    }
    leq
}

/// Embeds a convergence structure as a token structure: tokens are the
/// filters, the localization map is the standard filter support, and two
/// filters are Cauchy related when they share a limit point.
pub fn embed_convergence(lambda: &ConvergenceStructure) -> Embedding {
    let carrier = lambda.carrier();
    let support = TtpAssignment::standard_filter_support(carrier);
    let count = PrincipalFilter::count(carrier);
    let mut xi = Rel::empty(count);
    for x in carrier.elements() {
        let at = lambda.at(x);
        for a in at.iter() {
            for b in at.iter() {
                xi.insert(a, b);
            }
        }
    }
    let tts = Tts::new(support, xi).expect("matching universes");
    let ttsr = Ttsr::new(tts.clone(), refinement_order(carrier)).expect("matching universes");
    Embedding { tts, ttsr }
}

/// Embedding report for a topology: the token structure, its completeness,
/// and an explicit transitivity audit of the Cauchy relation (transitivity
/// is not an axiom; the audit reports a witness triple when it fails).
#[derive(Debug, Clone)]
pub struct TopologyEmbedding {
    pub embedding: Embedding,
    pub complete: bool,
    pub xi_transitive: Check<(usize, usize, usize)>,
}

pub fn embed_topology(topology: &Topology) -> TopologyEmbedding {
    let embedding = embed_convergence(&topology_to_convergence(topology));
    let complete = embedding.tts.is_complete();
    let xi_transitive = Check::from_witness(embedding.tts.xi().transitivity_witness());
    TopologyEmbedding { embedding, complete, xi_transitive }
}

/// A total map between carriers, the points of a function space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PointMap {
    pub domain: Carrier,
    pub codomain: Carrier,
    pub values: Vec<usize>,
}

impl PointMap {
    pub fn new(domain: Carrier, codomain: Carrier, values: Vec<usize>) -> Self {
        assert_eq!(values.len(), domain.size());
        assert!(values.iter().all(|&v| v < codomain.size()));
        PointMap { domain, codomain, values }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn image_of(&self, a: Subset) -> Subset {
        Subset::from_members(self.codomain, a.members().map(|x| self.values[x]))
            .expect("values in range")
    }

    pub fn identity(carrier: Carrier) -> Self {
        PointMap { domain: carrier, codomain: carrier, values: carrier.elements().collect() }
    }

    /// All total maps between the carriers, in lexicographic value order.
    pub fn all(domain: Carrier, codomain: Carrier) -> Vec<PointMap> {
        let n = domain.size();
        let m = codomain.size();
        let mut out = Vec::with_capacity(m.pow(n as u32));
        let mut values = vec![0usize; n];
        loop {
            out.push(PointMap { domain, codomain, values: values.clone() });
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                values[i] += 1;
                if values[i] < m {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
        }
    }
}

impl std::fmt::Display for PointMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// The image of a principal filter is the principal filter over the setwise
/// image of the core.
pub fn image_filter(f: &PointMap, filter: PrincipalFilter) -> PrincipalFilter {
    PrincipalFilter::new(f.image_of(filter.core())).expect("image of nonempty is nonempty")
}

/// Is `f` continuous: images of convergent filters converge to the image
/// point. Quantified over every convergent filter directly.
pub fn is_continuous(f: &PointMap, lx: &ConvergenceStructure, lz: &ConvergenceStructure) -> bool {
    let domain = lx.carrier();
    domain.elements().all(|x| {
        lx.at(x).iter().all(|t| {
            let filter = PrincipalFilter::from_token_index(domain, t);
            lz.converges(image_filter(f, filter), f.apply(x))
        })
    })
}

/// All continuous maps, in lexicographic value order.
pub fn continuous_maps(lx: &ConvergenceStructure, lz: &ConvergenceStructure) -> Vec<PointMap> {
    PointMap::all(lx.carrier(), lz.carrier())
        .into_iter()
        .filter(|f| is_continuous(f, lx, lz))
        .collect()
}

/// A function space under continuous convergence: the carrier is the set of
/// continuous maps; a filter of map-sets converges to `f` when all its
/// evaluations on convergent filters converge to the evaluated image point.
#[derive(Debug, Clone)]
pub struct FunctionSpace {
    pub maps: Vec<PointMap>,
    pub structure: ConvergenceStructure,
}

impl FunctionSpace {
    pub fn index_of(&self, f: &PointMap) -> Option<usize> {
        self.maps.iter().position(|g| g == f)
    }
}

/// The continuous-convergence predicate on a function space given by an
/// explicit list of maps: does the filter of map-sets `↑{maps[i] : i ∈
/// group}` converge to `maps[target]`? It does when, for every point and
/// every filter convergent to it, the joint evaluation image converges to
/// the target's image point. Works for arbitrarily many maps; nothing is
/// materialized.
pub fn function_space_converges(
    lx: &ConvergenceStructure,
    lz: &ConvergenceStructure,
    maps: &[PointMap],
    group: &[usize],
    target: usize,
) -> bool {
    assert!(!group.is_empty());
    let domain = lx.carrier();
    domain.elements().all(|x| {
        lx.at(x).iter().all(|t| {
            let core = PrincipalFilter::from_token_index(domain, t).core();
            let image = Subset::from_members(
                lz.carrier(),
                group.iter().flat_map(|&g| core.members().map(move |a| maps[g].apply(a))),
            )
            .expect("values in range");
            let image_filter = PrincipalFilter::new(image).expect("nonempty");
            lz.converges(image_filter, maps[target].apply(x))
        })
    })
}

/// Continuous convergence on the continuous maps from one structure to
/// another, materialized as a convergence structure whose carrier is the map
/// set. With principal filters, a filter of map-sets is `↑G` for a nonempty
/// set `G` of maps, and its evaluation on `↑A` is the principal filter over
/// `{g(a) : g ∈ G, a ∈ A}`. The map set must fit in a carrier; for larger
/// function spaces use [`function_space_converges`] directly.
pub fn continuous_convergence(
    lx: &ConvergenceStructure,
    lz: &ConvergenceStructure,
) -> FunctionSpace {
    let maps = continuous_maps(lx, lz);
    let space = Carrier::new(maps.len()).expect("at least one continuous map, within caps");
    let filters = PrincipalFilter::count(space);
    let lambda = (0..maps.len())
        .map(|fi| {
            BitSet::from_iter(
                filters,
                PrincipalFilter::all(space).filter_map(|phi| {
                    let group: Vec<usize> = phi.core().members().collect();
                    function_space_converges(lx, lz, &maps, &group, fi)
                        .then_some(phi.token_index())
                }),
            )
        })
        .collect();
    let structure = ConvergenceStructure::new(space, lambda).expect("one row per map");
    FunctionSpace { maps, structure }
}

/// Pairing convention for product carriers: `(x, y) -> x * |Y| + y`.
pub fn pair_index(x: usize, y: usize, ny: usize) -> usize {
    x * ny + y
}

pub fn unpair_index(p: usize, ny: usize) -> (usize, usize) {
    (p / ny, p % ny)
}

/// The product convergence structure: a filter on the pair carrier converges
/// to `(x, y)` exactly when its two projections converge componentwise.
pub fn product(lx: &ConvergenceStructure, ly: &ConvergenceStructure) -> ConvergenceStructure {
    let nx = lx.carrier().size();
    let ny = ly.carrier().size();
    let carrier = Carrier::new(nx * ny).expect("product carrier within caps");
    let filters = PrincipalFilter::count(carrier);
    let lambda = (0..nx * ny)
        .map(|p| {
            let (x, y) = unpair_index(p, ny);
            BitSet::from_iter(
                filters,
                PrincipalFilter::all(carrier).filter_map(|f| {
                    let core = f.core();
                    let proj_x = Subset::from_members(
                        lx.carrier(),
                        core.members().map(|q| unpair_index(q, ny).0),
                    )
                    .expect("in range");
                    let proj_y = Subset::from_members(
                        ly.carrier(),
                        core.members().map(|q| unpair_index(q, ny).1),
                    )
                    .expect("in range");
                    let fx = PrincipalFilter::new(proj_x).expect("nonempty projection");
                    let fy = PrincipalFilter::new(proj_y).expect("nonempty projection");
                    (lx.converges(fx, x) && ly.converges(fy, y)).then_some(f.token_index())
                }),
            )
        })
        .collect();
    ConvergenceStructure::new(carrier, lambda).expect("one row per pair")
}

/// The transpose of a map on a product: `transpose(f)(y)(x) = f(x, y)`.
pub fn transpose_map(f: &PointMap, nx: usize, ny: usize) -> Vec<Vec<usize>> {
    (0..ny)
        .map(|y| (0..nx).map(|x| f.apply(pair_index(x, y, ny))).collect())
        .collect()
}

/// Result of checking the exponential law between `C(X × Y, Z)` and
/// `C(Y, C(X, Z))` with the function space under continuous convergence.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentialReport {
    /// Number of continuous maps on the product side.
    pub product_side: usize,
    /// Number of continuous maps into the function space.
    pub curried_side: usize,
    /// Transposition is injective on the full (not only continuous)
    /// function space.
    pub injective_on_all_maps: bool,
    /// Every continuous product map transposes to a continuous map into the
    /// function space.
    pub image_in_curried: Check<PointMap>,
    /// Every continuous map into the function space arises as a transpose.
    /// A witness is the index vector of a curried map with no preimage.
    pub surjective: Check<Vec<usize>>,
}

impl ExponentialReport {
    pub fn bijective(&self) -> bool {
        self.product_side == self.curried_side
            && self.injective_on_all_maps
            && self.image_in_curried.passed()
            && self.surjective.passed()
    }
}

/// Verifies elementwise that transposition restricts to a bijection between
/// continuous maps on the product and continuous maps into the continuously
/// converging function space.
pub fn exponential_check(
    lx: &ConvergenceStructure,
    ly: &ConvergenceStructure,
    lz: &ConvergenceStructure,
) -> ExponentialReport {
    let nx = lx.carrier().size();
    let ny = ly.carrier().size();
    let prod = product(lx, ly);
    let cxy = continuous_maps(&prod, lz);
    let cx = continuous_maps(lx, lz);

    // curried maps are index vectors into the continuous maps; continuity
    // into the function space is the continuous-convergence predicate on
    // every evaluation image, so no function-space carrier is materialized
    let curried_continuous = |g: &[usize]| -> bool {
        ly.carrier().elements().all(|y| {
            ly.at(y).iter().all(|t| {
                let core = PrincipalFilter::from_token_index(ly.carrier(), t).core();
                let mut group: Vec<usize> = core.members().map(|b| g[b]).collect();
                group.sort_unstable();
                group.dedup();
                function_space_converges(lx, lz, &cx, &group, g[y])
            })
        })
    };

    let mut cy_cc: Vec<Vec<usize>> = Vec::new();
    let mut g = vec![0usize; ny];
    if !cx.is_empty() {
        loop {
            if curried_continuous(&g) {
                cy_cc.push(g.clone());
            }
            let mut i = 0;
            loop {
                if i == ny {
                    g.clear();
                    break;
                }
                g[i] += 1;
                if g[i] < cx.len() {
                    break;
                }
                g[i] = 0;
                i += 1;
            }
            if g.is_empty() {
                break;
            }
        }
    }

    // set-level injectivity over all maps on the product
    let all_maps = PointMap::all(prod.carrier(), lz.carrier());
    let mut transposes: Vec<Vec<Vec<usize>>> =
        all_maps.iter().map(|f| transpose_map(f, nx, ny)).collect();
    let before = transposes.len();
    transposes.sort();
    transposes.dedup();
    let injective_on_all_maps = transposes.len() == before;

    // transpose of a continuous product map, as indices into the map list
    let transpose_indices = |f: &PointMap| -> Option<Vec<usize>> {
        transpose_map(f, nx, ny)
            .into_iter()
            .map(|col| {
                let g = PointMap::new(lx.carrier(), lz.carrier(), col);
                cx.iter().position(|m| *m == g)
            })
            .collect()
    };

    let mut image_in_curried = Check::Pass;
    for f in &cxy {
        match transpose_indices(f) {
            Some(t) if cy_cc.contains(&t) => {}
            _ => {
                image_in_curried = Check::Fail(f.clone());
                break;
            }
        }
    }

    let mut surjective = Check::Pass;
    'surj: for g in &cy_cc {
        // untranspose: f(x, y) = cx[g(y)](x)
        let mut values = vec![0usize; nx * ny];
        for (y, &gi) in g.iter().enumerate() {
            for x in 0..nx {
                values[pair_index(x, y, ny)] = cx[gi].apply(x);
            }
        }
        let f = PointMap::new(prod.carrier(), lz.carrier(), values);
        if !cxy.contains(&f) {
            surjective = Check::Fail(g.clone());
            break 'surj;
        }
    }

    ExponentialReport {
        product_side: cxy.len(),
        curried_side: cy_cc.len(),
        injective_on_all_maps,
        image_in_curried,
        surjective,
    }
}
