//! Nets over finite directed pre-orders, subnets, and the four classical
//! conditions characterizing when a net-convergence class comes from an
//! ordinary topology — checked over a bounded universe of nets.
//!
//! Finite directed pre-orders always have a top cluster, so "eventually"
//! degenerates to "on the top cluster" and every net has a principal tail
//! filter. Net-level verdicts are therefore evidence up to the stated
//! bound, never a proof of topologicity; the exact question is settled at
//! filter level by `convergence::is_topological`.

use serde::Serialize;

use crate::convergence::ConvergenceStructure;
use crate::derived_topology::Topology;
use crate::foundations::{Carrier, DirectedPreorder, PrincipalFilter, Rel, Subset};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MsError {
    #[error("net has {got} values, expected one per index ({expected})")]
    WrongValueCount { got: usize, expected: usize },
    #[error("net value {value} out of range for carrier of size {size}")]
    ValueOutOfRange { value: usize, size: usize },
    #[error("index bound {got} exceeds the cap {cap}")]
    IndexBoundExceedsCap { got: usize, cap: usize },
    #[error("frame bound {got} exceeds the cap {cap}")]
    FrameBoundExceedsCap { got: usize, cap: usize },
    #[error("frame slot {slot}: net index does not match the declared pre-order")]
    FrameIndexMismatch { slot: usize },
    #[error("frame has {got} slots, expected {expected}")]
    FrameSlotCount { got: usize, expected: usize },
    #[error("class is not given by filters; top bounds need a filter-representable class")]
    NotFilterRepresentable,
}

/// Hard caps on the bounded-universe sweeps.
pub const MAX_INDEX_BOUND: usize = 4;
pub const MAX_FRAME_BOUND: usize = 2;

/// A net: a total map from a finite directed pre-order into the carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Net {
    pub index: DirectedPreorder,
    pub carrier: Carrier,
    pub values: Vec<usize>,
}

impl Net {
    pub fn new(index: DirectedPreorder, carrier: Carrier, values: Vec<usize>) -> Result<Self, MsError> {
        if values.len() != index.len() {
            return Err(MsError::WrongValueCount { got: values.len(), expected: index.len() });
        }
        if let Some(&v) = values.iter().find(|&&v| v >= carrier.size()) {
            return Err(MsError::ValueOutOfRange { value: v, size: carrier.size() });
        }
        Ok(Net { index, carrier, values })
    }

    pub fn constant(index: DirectedPreorder, carrier: Carrier, value: usize) -> Self {
        let len = index.len();
        Net::new(index, carrier, vec![value; len]).expect("constant value in range")
    }

    /// Values over the top cluster: the minimal tail of the net.
    pub fn minimal_tail(&self) -> Subset {
        Subset::from_members(self.carrier, self.index.tops().into_iter().map(|i| self.values[i]))
            .expect("values in range")
    }
}

impl std::fmt::Display for Net {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "net(|I|={}, values=[", self.index.len())?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "])")
    }
}

/// The filter generated by the tails of the net. The tails are downward
/// directed and the finite index has a top cluster, so the filter is
/// principal over the minimal tail.
pub fn tail_filter(net: &Net) -> PrincipalFilter {
    PrincipalFilter::new(net.minimal_tail()).expect("top cluster is nonempty")
}

/// Which subnet notion the bounded sweeps use.
///
/// `Willard`: a monotone map with cofinal image. `Kelley`: any map that
/// eventually dominates every index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum SubnetNotion {
    #[default]
    Willard,
    Kelley,
}

/// All labeled directed pre-orders on `1..=max` elements, in deterministic
/// order (size, then relation bits).
pub fn directed_preorders(max: usize) -> Vec<DirectedPreorder> {
    let mut out = Vec::new();
    for m in 1..=max {
        let off_diagonal: Vec<(usize, usize)> =
            (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| i != j).collect();
        let bits = off_diagonal.len();
        for mask in 0u32..1 << bits {
            let mut rel = Rel::identity(m);
            for (b, &(i, j)) in off_diagonal.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    rel.insert(i, j);
                }
            }
            if let Ok(p) = DirectedPreorder::new(rel) {
                out.push(p);
            }
        }
    }
    out
}

/// All nets on the carrier with index size at most `bound`, in deterministic
/// order.
pub fn all_nets(carrier: Carrier, bound: usize) -> Vec<Net> {
    let mut out = Vec::new();
    for index in directed_preorders(bound) {
        let len = index.len();
        let n = carrier.size();
        let mut values = vec![0usize; len];
        loop {
            out.push(Net::new(index.clone(), carrier, values.clone()).expect("in range"));
            let mut i = 0;
            loop {
                if i == len {
                    break;
                }
                values[i] += 1;
                if values[i] < n {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
            if values.iter().all(|&v| v == 0) {
                break;
            }
        }
    }
    out
}

fn reindex_maps(from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut map = vec![0usize; from];
    loop {
        out.push(map.clone());
        let mut i = 0;
        loop {
            if i == from {
                return out;
            }
            map[i] += 1;
            if map[i] < to {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}

fn is_admissible_reindex(
    phi: &[usize],
    sub_index: &DirectedPreorder,
    index: &DirectedPreorder,
    notion: SubnetNotion,
) -> bool {
    match notion {
        SubnetNotion::Willard => {
            let monotone = (0..phi.len()).all(|i| {
                (0..phi.len()).all(|j| !sub_index.le(i, j) || index.le(phi[i], phi[j]))
            });
            let cofinal =
                (0..index.len()).all(|i| phi.iter().any(|&pj| index.le(i, pj)));
            monotone && cofinal
        }
        SubnetNotion::Kelley => {
            // eventually dominating: for each original index there is a point
            // past which the reindex map stays above it
            (0..index.len()).all(|i| {
                (0..phi.len()).any(|j0| {
                    (0..phi.len()).all(|j| !sub_index.le(j0, j) || index.le(i, phi[j]))
                })
            })
        }
    }
}

/// All subnets of `net` with index size at most `bound`, deduplicated and in
/// deterministic order. A subnet is `net ∘ φ` for an admissible reindexing
/// map `φ`.
pub fn subnets(net: &Net, bound: usize, notion: SubnetNotion) -> Vec<Net> {
    let mut out = Vec::new();
    for sub_index in directed_preorders(bound) {
        for phi in reindex_maps(sub_index.len(), net.index.len()) {
            if !is_admissible_reindex(&phi, &sub_index, &net.index, notion) {
                continue;
            }
            let values = phi.iter().map(|&i| net.values[i]).collect();
            out.push(Net::new(sub_index.clone(), net.carrier, values).expect("in range"));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Is `candidate` a subnet of `net` (any admissible reindexing works)?
pub fn is_subnet(candidate: &Net, net: &Net, notion: SubnetNotion) -> bool {
    reindex_maps(candidate.index.len(), net.index.len()).into_iter().any(|phi| {
        is_admissible_reindex(&phi, &candidate.index, &net.index, notion)
            && phi.iter().map(|&i| net.values[i]).collect::<Vec<_>>() == candidate.values
    })
}

/// A convergence class: a decidable predicate "net converges to x".
#[derive(Debug, Clone)]
pub enum NetClass {
    /// Tail filter refines the neighbourhood filter.
    FromTopology(Topology),
    /// Tail filter belongs to the structure at the point.
    FromConvergence(ConvergenceStructure),
    /// Synthetic: converges to `x` iff the index has at least `min_index`
    /// elements and the net is eventually constant at `x`.
    EventuallyMinIndex { carrier: Carrier, min_index: usize },
    /// Synthetic: converges to `x` iff the net attains the value `x`
    /// somewhere.
    AttainsValue { carrier: Carrier },
}

impl NetClass {
    pub fn carrier(&self) -> Carrier {
        match self {
            NetClass::FromTopology(t) => t.carrier(),
            NetClass::FromConvergence(l) => l.carrier(),
            NetClass::EventuallyMinIndex { carrier, .. } => *carrier,
            NetClass::AttainsValue { carrier } => *carrier,
        }
    }

    pub fn converges(&self, net: &Net, x: usize) -> bool {
        match self {
            NetClass::FromTopology(t) => {
                net.minimal_tail().is_subset_of(t.minimal_neighbourhood(x))
            }
            NetClass::FromConvergence(l) => l.converges(tail_filter(net), x),
            NetClass::EventuallyMinIndex { min_index, .. } => {
                net.index.len() >= *min_index
                    && net.minimal_tail() == Subset::singleton(net.carrier, x)
            }
            NetClass::AttainsValue { .. } => net.values.contains(&x),
        }
    }
}

/// Bounds for the bounded-universe sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MsBounds {
    /// Maximum index size for nets and subnets.
    pub index: usize,
    /// Maximum size of the outer pre-order in diagonal frames.
    pub frame_outer: usize,
    /// Maximum size of each inner pre-order in diagonal frames.
    pub frame_inner: usize,
    pub notion: SubnetNotion,
}

impl Default for MsBounds {
    fn default() -> Self {
        MsBounds { index: 3, frame_outer: 2, frame_inner: 2, notion: SubnetNotion::Willard }
    }
}

/// A bounded verdict: either a violation with an explicit witness, or no
/// violation anywhere in the universe up to the bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict<W> {
    Violated { witness: W },
    NoViolationUpToBound,
}

impl<W> Verdict<W> {
    pub fn violated(&self) -> bool {
        matches!(self, Verdict::Violated { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Violated { witness } => Some(witness),
            Verdict::NoViolationUpToBound => None,
        }
    }
}

impl<W: std::fmt::Display> std::fmt::Display for Verdict<W> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Violated { witness } => write!(f, "VIOLATED  witness {witness}"),
            Verdict::NoViolationUpToBound => write!(f, "no violation up to bound"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstantsWitness {
    pub net: Net,
    pub point: usize,
}

impl std::fmt::Display for ConstantsWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "constant {} does not converge to {}", self.net, self.point)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubnetWitness {
    pub net: Net,
    pub point: usize,
    pub subnet: Net,
}

impl std::fmt::Display for SubnetWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} → {} but subnet {} does not", self.net, self.point, self.subnet)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivergenceWitness {
    pub net: Net,
    pub point: usize,
}

impl std::fmt::Display for DivergenceWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} does not converge to {} yet every subnet has a convergent subnet",
            self.net, self.point
        )
    }
}

/// A diagonal frame: an outer pre-order, one inner pre-order per outer
/// index, a convergent net per slot, the net of their limits, and an outer
/// limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalFrame {
    pub outer: DirectedPreorder,
    pub inner: Vec<DirectedPreorder>,
    pub nets: Vec<Net>,
    pub limits: Vec<usize>,
    pub outer_limit: usize,
    pub carrier: Carrier,
}

impl DiagonalFrame {
    pub fn new(
        outer: DirectedPreorder,
        inner: Vec<DirectedPreorder>,
        nets: Vec<Net>,
        limits: Vec<usize>,
        outer_limit: usize,
        carrier: Carrier,
    ) -> Result<Self, MsError> {
        if inner.len() != outer.len() || nets.len() != outer.len() || limits.len() != outer.len() {
            return Err(MsError::FrameSlotCount { got: inner.len(), expected: outer.len() });
        }
        for (slot, (net, idx)) in nets.iter().zip(&inner).enumerate() {
            if &net.index != idx || net.carrier != carrier {
                return Err(MsError::FrameIndexMismatch { slot });
            }
        }
        Ok(DiagonalFrame { outer, inner, nets, limits, outer_limit, carrier })
    }

    /// The outer net of limits.
    pub fn outer_net(&self) -> Net {
        Net::new(self.outer.clone(), self.carrier, self.limits.clone()).expect("in range")
    }
}

impl std::fmt::Display for DiagonalFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "frame(|Λ|={}, inner sizes [{}], limits {:?} → {})",
            self.outer.len(),
            self.inner.iter().map(|i| i.len().to_string()).collect::<Vec<_>>().join(","),
            self.limits,
            self.outer_limit
        )
    }
}

/// Builds the combined net of a frame over the product index
/// `Λ × Π I_ν`, ordered componentwise: `(λ, f) ≤ (μ, g)` iff `λ ≤ μ` and
/// `f(ν) ≤ g(ν)` for every slot. The value at `(λ, f)` is the slot net `λ`
/// evaluated at `f(λ)`.
pub fn diagonal_net(frame: &DiagonalFrame) -> Net {
    let slots = frame.outer.len();
    let sizes: Vec<usize> = frame.inner.iter().map(|i| i.len()).collect();
    let tuple_count: usize = sizes.iter().product();
    let total = slots * tuple_count;

    // tuple rank: mixed radix, slot 0 least significant
    let tuple_of_rank = |mut rank: usize| -> Vec<usize> {
        let mut tuple = Vec::with_capacity(slots);
        for &s in &sizes {
            tuple.push(rank % s);
            rank /= s;
        }
        tuple
    };

    let mut rel = Rel::empty(total);
    for li in 0..slots {
        for lj in 0..slots {
            if !frame.outer.le(li, lj) {
                continue;
            }
            for ri in 0..tuple_count {
                let ti = tuple_of_rank(ri);
                for rj in 0..tuple_count {
                    let tj = tuple_of_rank(rj);
                    let le = (0..slots).all(|s| frame.inner[s].le(ti[s], tj[s]));
                    if le {
                        rel.insert(li * tuple_count + ri, lj * tuple_count + rj);
                    }
                }
            }
        }
    }
    let index = DirectedPreorder::new(rel).expect("componentwise order of directed pre-orders");

    let values = (0..total)
        .map(|p| {
            let li = p / tuple_count;
            let tuple = tuple_of_rank(p % tuple_count);
            frame.nets[li].values[tuple[li]]
        })
        .collect();
    Net::new(index, frame.carrier, values).expect("in range")
}

/// The full report: one bounded verdict per condition. The third condition
/// is checked through two independently coded formulations that must agree.
#[derive(Debug, Clone, Serialize)]
pub struct MsReport {
    pub bounds: MsBounds,
    /// Constant nets converge to their value.
    pub constants: Verdict<ConstantsWitness>,
    /// Subnets inherit limits.
    pub subnets: Verdict<SubnetWitness>,
    /// A divergent net has a subnet all of whose subnets diverge.
    pub divergence: Verdict<DivergenceWitness>,
    /// Contrapositive formulation of `divergence`, coded independently.
    pub divergence_alt: Verdict<DivergenceWitness>,
    /// Diagonal condition over all frames within the frame bounds.
    pub diagonal: Verdict<DiagonalFrame>,
}

impl MsReport {
    pub fn all_pass(&self) -> bool {
        !(self.constants.violated()
            || self.subnets.violated()
            || self.divergence.violated()
            || self.divergence_alt.violated()
            || self.diagonal.violated())
    }

    /// The two divergence formulations must agree on violation status.
    pub fn divergence_formulations_agree(&self) -> bool {
        self.divergence.violated() == self.divergence_alt.violated()
    }
}

/// Precomputed universe: every net up to the index bound, its subnet list,
/// and the class verdict per point. Subnets of bounded nets stay inside the
/// bounded universe, so one pass covers every lookup the checks need.
struct BoundedUniverse {
    nets: Vec<Net>,
    subnet_lists: std::collections::BTreeMap<Net, Vec<Net>>,
    converges: std::collections::BTreeMap<(Net, usize), bool>,
}

impl BoundedUniverse {
    fn build(class: &NetClass, bound: usize, notion: SubnetNotion) -> Self {
        let carrier = class.carrier();
        let nets = all_nets(carrier, bound);
        let mut subnet_lists = std::collections::BTreeMap::new();
        let mut converges = std::collections::BTreeMap::new();
        for net in &nets {
            subnet_lists.insert(net.clone(), subnets(net, bound, notion));
            for x in carrier.elements() {
                converges.insert((net.clone(), x), class.converges(net, x));
            }
        }
        BoundedUniverse { nets, subnet_lists, converges }
    }

    fn converges(&self, net: &Net, x: usize) -> bool {
        self.converges[&(net.clone(), x)]
    }

    fn subnets_of(&self, net: &Net) -> &[Net] {
        &self.subnet_lists[net]
    }
}

/// Runs the four bounded checks.
pub fn check_moore_smith(class: &NetClass, bounds: &MsBounds) -> Result<MsReport, MsError> {
    if bounds.index > MAX_INDEX_BOUND {
        return Err(MsError::IndexBoundExceedsCap { got: bounds.index, cap: MAX_INDEX_BOUND });
    }
    if bounds.frame_outer > MAX_FRAME_BOUND || bounds.frame_inner > MAX_FRAME_BOUND {
        return Err(MsError::FrameBoundExceedsCap {
            got: bounds.frame_outer.max(bounds.frame_inner),
            cap: MAX_FRAME_BOUND,
        });
    }
    let carrier = class.carrier();
    let universe = BoundedUniverse::build(class, bounds.index, bounds.notion);

    let mut constants = Verdict::NoViolationUpToBound;
    'constants: for index in directed_preorders(bounds.index) {
        for x in carrier.elements() {
            let net = Net::constant(index.clone(), carrier, x);
            if !universe.converges(&net, x) {
                constants = Verdict::Violated { witness: ConstantsWitness { net, point: x } };
                break 'constants;
            }
        }
    }

    let mut subnets_verdict = Verdict::NoViolationUpToBound;
    'subnets: for net in &universe.nets {
        for x in carrier.elements() {
            if !universe.converges(net, x) {
                continue;
            }
            for sub in universe.subnets_of(net) {
                if !universe.converges(sub, x) {
                    subnets_verdict = Verdict::Violated {
                        witness: SubnetWitness { net: net.clone(), point: x, subnet: sub.clone() },
                    };
                    break 'subnets;
                }
            }
        }
    }

    // divergent nets must have a subnet all of whose subnets diverge
    let mut divergence = Verdict::NoViolationUpToBound;
    'divergence: for net in &universe.nets {
        for x in carrier.elements() {
            if universe.converges(net, x) {
                continue;
            }
            let found_stubborn_subnet = universe.subnets_of(net).iter().any(|sub| {
                universe.subnets_of(sub).iter().all(|sub2| !universe.converges(sub2, x))
            });
            if !found_stubborn_subnet {
                divergence = Verdict::Violated {
                    witness: DivergenceWitness { net: net.clone(), point: x },
                };
                break 'divergence;
            }
        }
    }

    // independent formulation: if every subnet has a subnet converging to x,
    // the net itself must converge to x
    let mut divergence_alt = Verdict::NoViolationUpToBound;
    'alt: for net in &universe.nets {
        for x in carrier.elements() {
            let premise = universe.subnets_of(net).iter().all(|sub| {
                universe.subnets_of(sub).iter().any(|sub2| universe.converges(sub2, x))
            });
            if premise && !universe.converges(net, x) {
                divergence_alt = Verdict::Violated {
                    witness: DivergenceWitness { net: net.clone(), point: x },
                };
                break 'alt;
            }
        }
    }

    let diagonal = check_diagonal(class, bounds);

    Ok(MsReport {
        bounds: *bounds,
        constants,
        subnets: subnets_verdict,
        divergence,
        divergence_alt,
        diagonal,
    })
}

fn check_diagonal(class: &NetClass, bounds: &MsBounds) -> Verdict<DiagonalFrame> {
    let carrier = class.carrier();
    let outers = directed_preorders(bounds.frame_outer);
    let inners = directed_preorders(bounds.frame_inner);

    // convergent (net, limit) pairs per inner pre-order
    let slot_options: Vec<(DirectedPreorder, Vec<(Net, usize)>)> = inners
        .iter()
        .map(|idx| {
            let mut pairs = Vec::new();
            for net in all_nets(carrier, idx.len()) {
                if &net.index != idx {
                    continue;
                }
                for x in carrier.elements() {
                    if class.converges(&net, x) {
                        pairs.push((net.clone(), x));
                    }
                }
            }
            (idx.clone(), pairs)
        })
        .collect();

    for outer in &outers {
        let slots = outer.len();
        // choose an inner option set per slot
        let mut choice = vec![0usize; slots];
        loop {
            // enumerate (net, limit) selections for this inner combination
            let per_slot: Vec<&Vec<(Net, usize)>> =
                choice.iter().map(|&c| &slot_options[c].1).collect();
            if per_slot.iter().all(|opts| !opts.is_empty()) {
                let mut sel = vec![0usize; slots];
                loop {
                    let nets: Vec<Net> =
                        sel.iter().zip(&per_slot).map(|(&s, opts)| opts[s].0.clone()).collect();
                    let limits: Vec<usize> =
                        sel.iter().zip(&per_slot).map(|(&s, opts)| opts[s].1).collect();
                    let inner: Vec<DirectedPreorder> =
                        choice.iter().map(|&c| slot_options[c].0.clone()).collect();
                    let frame_nets_ok = nets.iter().zip(&inner).all(|(n, i)| &n.index == i);
                    debug_assert!(frame_nets_ok);
                    let outer_net =
                        Net::new(outer.clone(), carrier, limits.clone()).expect("in range");
                    for x in carrier.elements() {
                        if !class.converges(&outer_net, x) {
                            continue;
                        }
                        let frame = DiagonalFrame::new(
                            outer.clone(),
                            inner.clone(),
                            nets.clone(),
                            limits.clone(),
                            x,
                            carrier,
                        )
                        .expect("consistent frame");
                        let combined = diagonal_net(&frame);
                        if !class.converges(&combined, x) {
                            return Verdict::Violated { witness: frame };
                        }
                    }
                    // advance selection
                    let mut i = 0;
                    loop {
                        if i == slots {
                            break;
                        }
                        sel[i] += 1;
                        if sel[i] < per_slot[i].len() {
                            break;
                        }
                        sel[i] = 0;
                        i += 1;
                    }
                    if sel.iter().all(|&s| s == 0) {
                        break;
                    }
                }
            }
            // advance inner choice
            let mut i = 0;
            loop {
                if i == slots {
                    break;
                }
                choice[i] += 1;
                if choice[i] < slot_options.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    Verdict::NoViolationUpToBound
}

/// The two extremal topologies for a filter-representable class: the finest
/// topology where topological convergence implies class convergence is the
/// discrete one (only constant-like nets converge there), and the finest
/// topology whose convergence the class implies is the induced topology of
/// the structure. The indiscrete topology always sits on the induced side.
#[derive(Debug, Clone, Serialize)]
pub struct TopBounds {
    pub upper_finest: Topology,
    pub lower_finest: Topology,
    pub discrete_in_upper: bool,
    pub indiscrete_in_lower: bool,
}

pub fn top_bounds(class: &NetClass) -> Result<TopBounds, MsError> {
    let lambda = match class {
        NetClass::FromTopology(t) => crate::convergence::topology_to_convergence(t),
        NetClass::FromConvergence(l) => l.clone(),
        _ => return Err(MsError::NotFilterRepresentable),
    };
    let carrier = lambda.carrier();
    let upper_finest = Topology::discrete(carrier);
    let lower_finest = crate::convergence::induced_topology(&lambda);

    // discrete side: filters convergent in the discrete topology (only the
    // point filters, to their points) must converge in the class
    let discrete_in_upper = carrier
        .elements()
        .all(|x| lambda.at(x).contains(PrincipalFilter::point(carrier, x).token_index()));

    // indiscrete side: everything class-convergent converges indiscretely
    let indiscrete = Topology::indiscrete(carrier);
    let indiscrete_lambda = crate::convergence::topology_to_convergence(&indiscrete);
    let indiscrete_in_lower = carrier
        .elements()
        .all(|x| lambda.at(x).is_subset_of(indiscrete_lambda.at(x)));

    Ok(TopBounds { upper_finest, lower_finest, discrete_in_upper, indiscrete_in_lower })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::BitSet;

    fn carrier(n: usize) -> Carrier {
        Carrier::new(n).unwrap()
    }

    #[test]
    fn tail_filters() {
        let c = carrier(2);
        let one = DirectedPreorder::singleton();
        let constant = Net::constant(one, c, 1);
        assert_eq!(tail_filter(&constant).core(), Subset::singleton(c, 1));

        let chain = DirectedPreorder::chain(2);
        let net = Net::new(chain, c, vec![0, 1]).unwrap();
        assert_eq!(tail_filter(&net).core(), Subset::singleton(c, 1));

        let chain3 = DirectedPreorder::chain(3);
        let net3 = Net::new(chain3, c, vec![0, 1, 1]).unwrap();
        assert_eq!(tail_filter(&net3).core(), Subset::singleton(c, 1));
    }

    #[test]
    fn subnet_stream_contains_the_net_itself() {
        let c = carrier(2);
        let net = Net::new(DirectedPreorder::chain(2), c, vec![0, 1]).unwrap();
        let subs = subnets(&net, 3, SubnetNotion::Willard);
        assert!(subs.contains(&net));
    }

    #[test]
    fn subnets_of_constants_are_constant() {
        let c = carrier(2);
        let net = Net::constant(DirectedPreorder::chain(2), c, 1);
        for sub in subnets(&net, 3, SubnetNotion::Willard) {
            assert!(sub.values.iter().all(|&v| v == 1));
        }
    }

    #[test]
    fn cofinality_excludes_bottom_only_picks() {
        let c = carrier(2);
        let net = Net::new(DirectedPreorder::chain(2), c, vec![0, 1]).unwrap();
        let subs = subnets(&net, 1, SubnetNotion::Willard);
        // the single admissible one-point subnet picks the top
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].values, vec![1]);
    }

    #[test]
    fn subnet_relation_is_reflexive_and_transitive() {
        let c = carrier(2);
        let nets = all_nets(c, 2);
        for s in &nets {
            assert!(is_subnet(s, s, SubnetNotion::Willard));
            for t in subnets(s, 2, SubnetNotion::Willard) {
                for u in subnets(&t, 2, SubnetNotion::Willard) {
                    assert!(is_subnet(&u, s, SubnetNotion::Willard), "{u} ⊄ {s}");
                }
            }
        }
    }

    #[test]
    fn diagonal_net_of_single_slot_frame() {
        let c = carrier(3);
        let outer = DirectedPreorder::singleton();
        let inner = DirectedPreorder::chain(2);
        let net = Net::new(inner.clone(), c, vec![0, 2]).unwrap();
        let frame =
            DiagonalFrame::new(outer, vec![inner], vec![net], vec![1], 1, c).unwrap();
        let combined = diagonal_net(&frame);
        // J = 1 × 2: values are the slot net re-indexed
        assert_eq!(combined.values, vec![0, 2]);
        assert_eq!(combined.index.len(), 2);
    }

    #[test]
    fn diagonal_net_of_two_chain_frame() {
        let c = carrier(2);
        let outer = DirectedPreorder::chain(2);
        let inner = vec![DirectedPreorder::chain(2), DirectedPreorder::chain(2)];
        let nets = vec![
            Net::new(inner[0].clone(), c, vec![0, 1]).unwrap(),
            Net::new(inner[1].clone(), c, vec![1, 1]).unwrap(),
        ];
        let frame = DiagonalFrame::new(outer, inner, nets, vec![1, 1], 1, c).unwrap();
        let combined = diagonal_net(&frame);
        assert_eq!(combined.index.len(), 2 * 4);
        // constant-1 slots stay constant on the second block
        let tail = combined.minimal_tail();
        assert!(tail.contains(1));
    }

    #[test]
    fn constant_frame_gives_constant_diagonal() {
        let c = carrier(2);
        let outer = DirectedPreorder::chain(2);
        let inner = vec![DirectedPreorder::singleton(), DirectedPreorder::singleton()];
        let nets = vec![
            Net::constant(inner[0].clone(), c, 1),
            Net::constant(inner[1].clone(), c, 1),
        ];
        let frame = DiagonalFrame::new(outer, inner, nets, vec![1, 1], 1, c).unwrap();
        let combined = diagonal_net(&frame);
        assert!(combined.values.iter().all(|&v| v == 1));
    }

    #[test]
    fn topological_classes_pass_all_conditions() {
        let c = carrier(2);
        for topology in [
            Topology::discrete(c),
            Topology::indiscrete(c),
            Topology::new(c, [Subset::empty(c), Subset::singleton(c, 0), Subset::full(c)])
                .unwrap(),
        ] {
            let class = NetClass::FromTopology(topology);
            let report = check_moore_smith(&class, &MsBounds::default()).unwrap();
            assert!(report.all_pass(), "topological class failed: {report:?}");
            assert!(report.divergence_formulations_agree());
        }
    }

    #[test]
    fn eventually_min_index_class_violates_constants() {
        let c = carrier(2);
        let class = NetClass::EventuallyMinIndex { carrier: c, min_index: 2 };
        let report = check_moore_smith(&class, &MsBounds::default()).unwrap();
        let w = report.constants.witness().expect("constants must fail");
        assert_eq!(w.net.index.len(), 1);
        assert!(report.divergence_formulations_agree());
    }

    #[test]
    fn attains_value_class_violates_subnets() {
        let c = carrier(2);
        let class = NetClass::AttainsValue { carrier: c };
        let report = check_moore_smith(&class, &MsBounds::default()).unwrap();
        assert!(report.constants.witness().is_none());
        let w = report.subnets.witness().expect("subnet condition must fail");
        assert!(w.net.values.contains(&w.point));
        assert!(!w.subnet.values.contains(&w.point));
        assert!(report.divergence_formulations_agree());
    }

    /// A convergence structure that is not topological: minimal convergent
    /// cores 0 → {0,1}, 1 → {1,2}, 2 → {2}. The diagonal condition fails on
    /// a one-slot frame.
    #[test]
    fn non_topological_structure_violates_the_diagonal_condition() {
        let c = carrier(3);
        let cores = [
            Subset::from_members(c, [0, 1]).unwrap(),
            Subset::from_members(c, [1, 2]).unwrap(),
            Subset::singleton(c, 2),
        ];
        let filters = PrincipalFilter::count(c);
        let lambda = (0..3)
            .map(|x| {
                BitSet::from_iter(
                    filters,
                    PrincipalFilter::all(c)
                        .filter(|f| f.core().is_subset_of(cores[x]))
                        .map(|f| f.token_index()),
                )
            })
            .collect();
        let lambda = ConvergenceStructure::new(c, lambda).unwrap();
        assert!(crate::convergence::check_convergence_axioms(&lambda).passed());
        assert!(!crate::convergence::is_topological(&lambda));

        let class = NetClass::FromConvergence(lambda);
        let report = check_moore_smith(&class, &MsBounds::default()).unwrap();
        assert!(report.diagonal.violated());
        assert!(report.divergence_formulations_agree());
    }

    #[test]
    fn bounds_above_caps_are_rejected() {
        let c = carrier(2);
        let class = NetClass::AttainsValue { carrier: c };
        let bounds = MsBounds { index: MAX_INDEX_BOUND + 1, ..MsBounds::default() };
        assert!(matches!(
            check_moore_smith(&class, &bounds),
            Err(MsError::IndexBoundExceedsCap { .. })
        ));
    }

    #[test]
    fn top_bounds_for_a_topology_class() {
        let c = carrier(2);
        let sierpinski =
            Topology::new(c, [Subset::empty(c), Subset::singleton(c, 0), Subset::full(c)])
                .unwrap();
        let class = NetClass::FromTopology(sierpinski.clone());
        let bounds = top_bounds(&class).unwrap();
        assert!(bounds.discrete_in_upper);
        assert!(bounds.indiscrete_in_lower);
        // round trip: the induced topology of a topological class is itself
        assert_eq!(bounds.lower_finest, sierpinski);
        assert_eq!(bounds.upper_finest, Topology::discrete(c));
        // synthetic classes are refused
        assert!(top_bounds(&NetClass::AttainsValue { carrier: c }).is_err());
    }

    #[test]
    fn kelley_subnets_allow_non_monotone_reindexing() {
        let c = carrier(2);
        let chain = DirectedPreorder::chain(2);
        let net = Net::new(chain.clone(), c, vec![0, 1]).unwrap();
        // swap map on a 2-chain: not monotone, but eventually dominating maps
        // exist for indices of this shape; the Kelley stream is a superset
        let willard = subnets(&net, 2, SubnetNotion::Willard);
        let kelley = subnets(&net, 2, SubnetNotion::Kelley);
        for s in &willard {
            assert!(kelley.contains(s));
        }
        assert!(kelley.len() >= willard.len());
    }

    #[test]
    fn directed_preorder_census() {
        // sizes 1, 2, 3 of the labeled directed pre-orders
        let ps = directed_preorders(3);
        let count1 = ps.iter().filter(|p| p.len() == 1).count();
        let count2 = ps.iter().filter(|p| p.len() == 2).count();
        let count3 = ps.iter().filter(|p| p.len() == 3).count();
        assert_eq!(count1, 1);
        assert_eq!(count2, 3);
        // 6 two-cluster chains + 6 three-chains + 3 with two bottoms and one
        // top + 1 single cluster
        assert_eq!(count3, 16);
    }
}
