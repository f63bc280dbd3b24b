//! Seeded random generation of axiom-passing structures.
//!
//! The generator is a hand-rolled splittable SplitMix64 so that identical
//! seeds produce identical structures across runs and dependency upgrades.
//! Generators construct valid instances directly; rejection sampling is not
//! needed anywhere here.

use ttslab_core::convergence::ConvergenceStructure;
use ttslab_core::derived_topology::Topology;
use ttslab_core::foundations::{BitSet, Carrier, PrincipalFilter, Rel, Subset};
use ttslab_core::tts::{Tts, TtpAssignment, Ttsr};
use ttslab_core::uniform::{FiniteUniformity, UniformConvergence};

/// SplitMix64: tiny, fast, and trivially splittable by deriving child seeds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }

    /// Derives an independent child generator.
    pub fn split(&mut self, stream: u64) -> SplitMix64 {
        let mut child = SplitMix64::new(self.next_u64() ^ stream.wrapping_mul(0x9e3779b97f4a7c15));
        child.next_u64();
        child
    }
}

/// A random subset; nonempty when `nonempty` is set.
pub fn random_subset(rng: &mut SplitMix64, carrier: Carrier, nonempty: bool) -> Subset {
    let full = carrier.full_mask();
    let mut mask = (rng.next_u64() as u32) & full;
    if nonempty && mask == 0 {
        mask = 1 << rng.below(carrier.size());
    }
    Subset::from_mask(carrier, mask)
}

/// A random topology: the closure of a few random seed opens.
pub fn random_topology(rng: &mut SplitMix64, n: usize) -> Topology {
    let c = Carrier::new(n).expect("caller keeps n within caps");
    let subsets = c.subset_count();
    let mut family = vec![false; subsets];
    family[0] = true;
    family[subsets - 1] = true;
    let seeds = 1 + rng.below(subsets);
    for _ in 0..seeds {
        family[rng.below(subsets)] = true;
    }
    loop {
        let members: Vec<usize> =
            (0..subsets).filter(|&i| family[i]).collect();
        let mut changed = false;
        for &a in &members {
            for &b in &members {
                if !family[a | b] {
                    family[a | b] = true;
                    changed = true;
                }
                if !family[a & b] {
                    family[a & b] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let opens = (0..subsets).filter(|&i| family[i]).map(|i| Subset::from_mask(c, i as u32));
    Topology::new(c, opens).expect("closed family")
}

/// A random convergence structure: per point, a random reflexive set of
/// admissible cores, i.e. the filters under a random core bound containing
/// the point.
pub fn random_convergence(rng: &mut SplitMix64, n: usize) -> ConvergenceStructure {
    let c = Carrier::new(n).expect("caller keeps n within caps");
    let filters = PrincipalFilter::count(c);
    let lambda = (0..n)
        .map(|x| {
            let bound = random_subset(rng, c, true).union(Subset::singleton(c, x));
            BitSet::from_iter(
                filters,
                PrincipalFilter::all(c)
                    .filter(|f| f.core().is_subset_of(bound))
                    .map(|f| f.token_index()),
            )
        })
        .collect();
    ConvergenceStructure::new(c, lambda).expect("rows constructed per point")
}

/// A random localization table: monotone by construction, full on the
/// carrier.
#[allow(clippy::needless_range_loop)] // iterating submask candidates
pub fn random_support(rng: &mut SplitMix64, carrier: usize, tokens: usize) -> TtpAssignment {
    let c = Carrier::new(carrier).expect("caller keeps carriers within caps");
    let subsets = c.subset_count();
    let all = (1u64 << tokens) - 1;
    let mut masks = vec![0u64; subsets];
    for mask in 1..subsets {
        let mut acc = 0u64;
        for sub in 1..mask {
            if sub & mask == sub {
                acc |= masks[sub];
            }
        }
        // sprinkle extra tokens, guaranteeing nonemptiness
        acc |= rng.next_u64() & all & rng.next_u64();
        if acc == 0 {
            acc = 1 << rng.below(tokens);
        }
        masks[mask] = acc;
    }
    masks[subsets - 1] = all;
    let table = masks
        .iter()
        .map(|&m| BitSet::from_iter(tokens, (0..tokens).filter(|t| m >> t & 1 == 1)))
        .collect();
    TtpAssignment::new(c, tokens, table).expect("constructed monotone table")
}

/// A random axiom-passing structure: forced based-token cliques plus random
/// symmetric noise, closed under the diagonal rule.
pub fn random_tts(rng: &mut SplitMix64, carrier: usize, tokens: usize) -> Tts {
    let support = random_support(rng, carrier, tokens);
    let c = support.carrier();
    let mut xi = Rel::empty(tokens);
    for x in c.elements() {
        let based = support.of_point(x);
        for a in based.iter() {
            for b in based.iter() {
                xi.insert(a, b);
            }
        }
    }
    for a in 0..tokens {
        for b in a..tokens {
            if rng.chance(1, 4) {
                xi.insert(a, b);
                xi.insert(b, a);
            }
        }
    }
    for (a, b) in xi.clone().pairs() {
        if a != b {
            xi.insert(a, a);
            xi.insert(b, b);
        }
    }
    let tts = Tts::new(support, xi).expect("matching universes");
    debug_assert!(tts.check_axioms().passed());
    tts
}

/// A random pre-order: reflexive transitive closure of random pairs.
pub fn random_preorder(rng: &mut SplitMix64, m: usize) -> Rel {
    let mut rel = Rel::identity(m);
    for a in 0..m {
        for b in 0..m {
            if rng.chance(1, 4) {
                rel.insert(a, b);
            }
        }
    }
    rel.transitive_closure()
}

/// A random ordered structure: a random base widened so the table and the
/// relation become up-closed under a random pre-order.
pub fn random_ttsr(rng: &mut SplitMix64, carrier: usize, tokens: usize) -> Ttsr {
    let base = random_tts(rng, carrier, tokens);
    let leq = random_preorder(rng, tokens);
    let c = base.carrier();

    let table = Subset::all(c)
        .map(|s| {
            if s.is_empty() {
                return BitSet::new(tokens);
            }
            let image = base.support().of(s);
            BitSet::from_iter(
                tokens,
                (0..tokens).filter(|&t| image.iter().any(|lo| leq.contains(lo, t))),
            )
        })
        .collect();
    let support = TtpAssignment::new(c, tokens, table).expect("up-closure stays well formed");

    let mut xi = base.xi().clone();
    for x in c.elements() {
        let based = support.of_point(x).clone();
        for a in based.iter() {
            for b in based.iter() {
                xi.insert(a, b);
            }
        }
    }
    loop {
        let mut next = xi.clone();
        for (a, b) in xi.pairs() {
            for u in 0..tokens {
                if !leq.contains(a, u) {
                    continue;
                }
                for v in 0..tokens {
                    if leq.contains(b, v) {
                        next.insert(u, v);
                    }
                }
            }
            next.insert(b, a);
            next.insert(a, a);
            next.insert(b, b);
        }
        if next == xi {
            break;
        }
        xi = next;
    }
    let ttsr =
        Ttsr::new(Tts::new(support, xi).expect("matching universes"), leq).expect("universes");
    debug_assert!(ttsr.check_axioms().passed());
    ttsr
}

/// A random equivalence relation via random class labels.
pub fn random_equivalence(rng: &mut SplitMix64, n: usize) -> Rel {
    let labels: Vec<usize> = (0..n).map(|_| rng.below(n)).collect();
    let mut rel = Rel::empty(n);
    for x in 0..n {
        for y in 0..n {
            if labels[x] == labels[y] {
                rel.insert(x, y);
            }
        }
    }
    rel
}

pub fn random_uniformity(rng: &mut SplitMix64, n: usize) -> FiniteUniformity {
    let c = Carrier::new(n).expect("caller keeps n within caps");
    FiniteUniformity::new(c, random_equivalence(rng, n)).expect("equivalence by construction")
}

/// A random uniform convergence structure: the down-closure of a random
/// equivalence relation (the only shape a finite principal family can have).
pub fn random_ucs(rng: &mut SplitMix64, n: usize) -> UniformConvergence {
    random_uniformity(rng, n).down_closure_ucs().expect("small carriers only")
}

/// Structure mutations for checker-vs-oracle comparisons: flips one cell of
/// the relation or drops one token from a table row, usually breaking an
/// axiom.
pub fn mutate_tts(rng: &mut SplitMix64, sigma: &Tts) -> Tts {
    let tokens = sigma.tokens();
    let c = sigma.carrier();
    if rng.chance(1, 2) {
        let mut xi = sigma.xi().clone();
        let a = rng.below(tokens);
        let b = rng.below(tokens);
        if xi.contains(a, b) {
            xi.remove(a, b);
        } else {
            xi.insert(a, b);
        }
        Tts::new(sigma.support().clone(), xi).expect("universes unchanged")
    } else {
        let victim = 1 + rng.below(c.subset_count() - 1);
        let table = Subset::all(c)
            .map(|s| {
                let mut row = sigma.support().of(s).clone();
                if s.mask() as usize == victim {
                    let t = rng.below(tokens);
                    if row.contains(t) {
                        row.remove(t);
                    } else {
                        row.insert(t);
                    }
                }
                row
            })
            .collect();
        match TtpAssignment::new(c, tokens, table) {
            Ok(support) => Tts::new(support, sigma.xi().clone()).expect("universes unchanged"),
            // emptied the table head; fall back to a relation flip
            Err(_) => mutate_tts(rng, sigma),
        }
    }
}
