//! Complete, duplicate-free enumeration of small structures. Each kind has
//! a hard cap; census counts are pinned as regression values in the tests.

use ttslab_core::convergence::ConvergenceStructure;
use ttslab_core::derived_topology::Topology;
use ttslab_core::foundations::{BitSet, Carrier, PrincipalFilter, Rel, Subset};
use ttslab_core::tts::{Tts, TtpAssignment};
use ttslab_core::uniform::UniformConvergence;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error("{kind} enumeration capped at n ≤ {cap}, got {got}")]
    CapExceeded { kind: &'static str, cap: usize, got: usize },
}

pub const TOPOLOGY_CAP: usize = 4;
pub const TOPOLOGY_PREORDER_CAP: usize = 5;
pub const CONVERGENCE_CAP: usize = 3;
pub const TTS_CARRIER_CAP: usize = 2;
pub const TTS_TOKEN_CAP: usize = 3;
pub const UCS_CAP: usize = 2;
pub const UNIFORMITY_CAP: usize = 4;

/// All topologies on `n` points by brute force over open-set families,
/// checking closure under pairwise union and intersection directly.
pub fn topologies(n: usize) -> Result<Vec<Topology>, EnumerateError> {
    if n > TOPOLOGY_CAP {
        return Err(EnumerateError::CapExceeded { kind: "topology", cap: TOPOLOGY_CAP, got: n });
    }
    let c = Carrier::new(n).expect("within caps");
    let subsets = c.subset_count();
    let mut out = Vec::new();
    for family in 0u64..1 << subsets {
        if family & 1 == 0 || family >> (subsets - 1) & 1 == 0 {
            continue;
        }
        let members: Vec<usize> = (0..subsets).filter(|i| family >> i & 1 == 1).collect();
        let closed = members.iter().all(|&a| {
            members.iter().all(|&b| family >> (a | b) & 1 == 1 && family >> (a & b) & 1 == 1)
        });
        if closed {
            let opens = members.iter().map(|&m| Subset::from_mask(c, m as u32));
            out.push(Topology::new(c, opens).expect("validated family"));
        }
    }
    Ok(out)
}

/// All reflexive transitive relations on `m` elements, in mask order.
pub fn preorders(m: usize) -> Vec<Rel> {
    let off_diagonal: Vec<(usize, usize)> =
        (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| i != j).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << off_diagonal.len() {
        let mut rel = Rel::identity(m);
        for (b, &(i, j)) in off_diagonal.iter().enumerate() {
            if mask >> b & 1 == 1 {
                rel.insert(i, j);
            }
        }
        if rel.is_transitive() {
            out.push(rel);
        }
    }
    out
}

/// All topologies on `n` points through the bijection with pre-orders:
/// opens are the up-closed sets of a reflexive transitive relation. Reaches
/// one point further than the family brute force; the two routes agree on
/// their common range (checked in the tests).
pub fn topologies_via_preorders(n: usize) -> Result<Vec<Topology>, EnumerateError> {
    if n > TOPOLOGY_PREORDER_CAP {
        return Err(EnumerateError::CapExceeded {
            kind: "topology (pre-order route)",
            cap: TOPOLOGY_PREORDER_CAP,
            got: n,
        });
    }
    let c = Carrier::new(n).expect("within caps");
    let out = preorders(n)
        .into_iter()
        .map(|rel| {
            let opens = Subset::all(c).filter(|a| {
                a.members().all(|x| (0..n).all(|y| !rel.contains(x, y) || a.contains(y)))
            });
            Topology::new(c, opens).expect("up-sets form a topology")
        })
        .collect();
    Ok(out)
}

/// All convergence structures on `n` points: per point, every filter set
/// satisfying the three axioms, combined across points.
pub fn convergence_structures(n: usize) -> Result<Vec<ConvergenceStructure>, EnumerateError> {
    if n > CONVERGENCE_CAP {
        return Err(EnumerateError::CapExceeded {
            kind: "convergence",
            cap: CONVERGENCE_CAP,
            got: n,
        });
    }
    let c = Carrier::new(n).expect("within caps");
    let filters = PrincipalFilter::count(c);
    let per_point: Vec<Vec<BitSet>> = (0..n)
        .map(|x| {
            let mut valid = Vec::new();
            for mask in 0u64..1 << filters {
                let set = BitSet::from_iter(filters, (0..filters).filter(|t| mask >> t & 1 == 1));
                if !set.contains(PrincipalFilter::point(c, x).token_index()) {
                    continue;
                }
                let meet_ok = set.iter().all(|a| {
                    set.iter().all(|b| {
                        let fa = PrincipalFilter::from_token_index(c, a);
                        let fb = PrincipalFilter::from_token_index(c, b);
                        set.contains(fa.meet(fb).expect("same carrier").token_index())
                    })
                });
                let up_ok = set.iter().all(|a| {
                    let fa = PrincipalFilter::from_token_index(c, a);
                    PrincipalFilter::all(c)
                        .filter(|g| g.refines(fa).expect("same carrier"))
                        .all(|g| set.contains(g.token_index()))
                });
                if meet_ok && up_ok {
                    valid.push(set);
                }
            }
            valid
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let lambda: Vec<BitSet> =
            choice.iter().enumerate().map(|(x, &i)| per_point[x][i].clone()).collect();
        out.push(ConvergenceStructure::new(c, lambda).expect("validated rows"));
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < per_point[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn nonempty_token_sets(tokens: usize) -> Vec<BitSet> {
    (1u64..1 << tokens)
        .map(|mask| BitSet::from_iter(tokens, (0..tokens).filter(|t| mask >> t & 1 == 1)))
        .collect()
}

/// All axiom-passing structures with the given carrier and token count.
/// Tables enumerate monotone assignments with the full image on the carrier;
/// relations enumerate the symmetric diagonal-closed extensions of the
/// forced based-token cliques.
pub fn tts_structures(carrier: usize, tokens: usize) -> Result<Vec<Tts>, EnumerateError> {
    if carrier > TTS_CARRIER_CAP {
        return Err(EnumerateError::CapExceeded {
            kind: "tts carrier",
            cap: TTS_CARRIER_CAP,
            got: carrier,
        });
    }
    if tokens > TTS_TOKEN_CAP {
        return Err(EnumerateError::CapExceeded {
            kind: "tts tokens",
            cap: TTS_TOKEN_CAP,
            got: tokens,
        });
    }
    let c = Carrier::new(carrier).expect("within caps");
    let subsets = c.subset_count();
    let candidates = nonempty_token_sets(tokens);
    let full = BitSet::full(tokens);

    // enumerate monotone tables row by row in mask order
    let mut tables: Vec<Vec<BitSet>> = vec![vec![BitSet::new(tokens)]];
    for mask in 1..subsets {
        let mut next = Vec::new();
        let is_top = mask == subsets - 1;
        for table in &tables {
            let options: Vec<&BitSet> = if is_top {
                vec![&full]
            } else {
                candidates
                    .iter()
                    .filter(|cand| {
                        (1..mask).all(|sub| {
                            sub & mask != sub || table[sub].is_subset_of(cand)
                        })
                    })
                    .collect()
            };
            for option in options {
                if is_top {
                    let below_ok = (1..mask).all(|sub| table[sub].is_subset_of(option));
                    if !below_ok {
                        continue;
                    }
                }
                let mut t = table.clone();
                t.push(option.clone());
                next.push(t);
            }
        }
        tables = next;
    }

    let mut out = Vec::new();
    for table in tables {
        let support =
            TtpAssignment::new(c, tokens, table).expect("constructed tables are well formed");
        // forced pairs: cliques on each based set
        let mut base = Rel::empty(tokens);
        for x in c.elements() {
            let based = support.of_point(x);
            for a in based.iter() {
                for b in based.iter() {
                    base.insert(a, b);
                }
            }
        }
        // free positions: unordered token pairs not already forced
        let mut free: Vec<(usize, usize)> = Vec::new();
        for a in 0..tokens {
            for b in a..tokens {
                if !base.contains(a, b) {
                    free.push((a, b));
                }
            }
        }
        for mask in 0u64..1 << free.len() {
            let mut xi = base.clone();
            for (bit, &(a, b)) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    xi.insert(a, b);
                    xi.insert(b, a);
                }
            }
            // diagonal closure requirement makes some choices invalid rather
            // than forcing extra pairs: filter instead of closing, so the
            // enumeration stays duplicate-free
            let diagonal_ok = xi.pairs().all(|(a, _)| xi.contains(a, a));
            if !diagonal_ok {
                continue;
            }
            let tts = Tts::new(support.clone(), xi).expect("matching universes");
            debug_assert!(tts.check_axioms().passed());
            out.push(tts);
        }
    }
    Ok(out)
}

/// All uniform convergence structures on `n` points, by brute force over
/// families of nonempty relations checked against the closure conditions.
pub fn ucs_structures(n: usize) -> Result<Vec<UniformConvergence>, EnumerateError> {
    if n > UCS_CAP {
        return Err(EnumerateError::CapExceeded { kind: "ucs", cap: UCS_CAP, got: n });
    }
    let c = Carrier::new(n).expect("within caps");
    let pair_count = n * n;
    let relations: Vec<Rel> = (1u64..1 << pair_count)
        .map(|mask| {
            Rel::from_pairs(
                n,
                (0..pair_count).filter(|i| mask >> i & 1 == 1).map(|i| (i / n, i % n)),
            )
        })
        .collect();
    let mut out = Vec::new();
    for family in 1u64..1 << relations.len() {
        let members: Vec<&Rel> =
            (0..relations.len()).filter(|i| family >> i & 1 == 1).map(|i| &relations[i]).collect();
        let ucs = UniformConvergence::new(c, members.iter().map(|r| (*r).clone()))
            .expect("nonempty relations");
        if ttslab_core::uniform::check_ucs_axioms(&ucs).passed() {
            out.push(ucs);
        }
    }
    Ok(out)
}

/// All equivalence relations on `n` points, via set partitions in
/// restricted-growth order.
pub fn equivalences(n: usize) -> Result<Vec<Rel>, EnumerateError> {
    if n > UNIFORMITY_CAP {
        return Err(EnumerateError::CapExceeded { kind: "uniformity", cap: UNIFORMITY_CAP, got: n });
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    loop {
        let mut rel = Rel::empty(n);
        for x in 0..n {
            for y in 0..n {
                if labels[x] == labels[y] {
                    rel.insert(x, y);
                }
            }
        }
        out.push(rel);
        // next restricted-growth string: labels[i] ≤ max(labels[..i]) + 1
        let mut i = n;
        loop {
            if i <= 1 {
                out.dedup();
                return Ok(out);
            }
            i -= 1;
            let max_prev = labels[..i].iter().copied().max().unwrap_or(0);
            if labels[i] <= max_prev {
                labels[i] += 1;
                for l in labels.iter_mut().skip(i + 1) {
                    *l = 0;
                }
                break;
            }
            labels[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ttslab_core::convergence::is_topological;

    #[test]
    fn topology_censuses() {
        assert_eq!(topologies(1).unwrap().len(), 1);
        assert_eq!(topologies(2).unwrap().len(), 4);
        assert_eq!(topologies(3).unwrap().len(), 29);
        assert_eq!(topologies(4).unwrap().len(), 355);
        assert!(topologies(5).is_err());
    }

    #[test]
    fn preorder_route_agrees_with_the_family_route() {
        for n in 1..=4 {
            let mut via_families = topologies(n).unwrap();
            let mut via_preorders = topologies_via_preorders(n).unwrap();
            via_families.sort();
            via_preorders.sort();
            assert_eq!(via_families, via_preorders);
        }
        assert_eq!(topologies_via_preorders(5).unwrap().len(), 6942);
    }

    #[test]
    fn convergence_censuses() {
        assert_eq!(convergence_structures(1).unwrap().len(), 1);
        assert_eq!(convergence_structures(2).unwrap().len(), 4);
        let at3 = convergence_structures(3).unwrap();
        assert_eq!(at3.len(), 64);
        assert_eq!(at3.iter().filter(|l| is_topological(l)).count(), 29);
        assert!(convergence_structures(4).is_err());
    }

    #[test]
    fn tts_censuses() {
        // carrier 1: the relation is forced total by the based-token clique
        assert_eq!(tts_structures(1, 1).unwrap().len(), 1);
        assert_eq!(tts_structures(1, 2).unwrap().len(), 1);
        assert_eq!(tts_structures(1, 3).unwrap().len(), 1);
        // carrier 2: tables are pairs of nonempty singleton images
        assert_eq!(tts_structures(2, 1).unwrap().len(), 1);
        // 15 = Σ over the 9 tables of admissible relation extensions
        assert_eq!(tts_structures(2, 2).unwrap().len(), 15);
        // 223 = Σ over the 49 tables of admissible relation extensions,
        // grouped by the diagonal forced through the based-token cliques:
        // 3·13 + 3·45 + 49
        let all23 = tts_structures(2, 3).unwrap();
        assert_eq!(all23.len(), 223);
        assert!(tts_structures(3, 1).is_err());
        assert!(tts_structures(2, 4).is_err());
    }

    #[test]
    fn ucs_census_matches_the_equivalence_count() {
        // every uniform convergence structure is the down-closure of its
        // union, which must be an equivalence relation
        let all = ucs_structures(2).unwrap();
        assert_eq!(all.len(), 2);
        assert!(ucs_structures(3).is_err());
    }

    #[test]
    fn equivalence_censuses_are_bell_numbers() {
        assert_eq!(equivalences(1).unwrap().len(), 1);
        assert_eq!(equivalences(2).unwrap().len(), 2);
        assert_eq!(equivalences(3).unwrap().len(), 5);
        assert_eq!(equivalences(4).unwrap().len(), 15);
        assert!(equivalences(5).is_err());
    }

    #[test]
    fn preorder_censuses() {
        assert_eq!(preorders(1).len(), 1);
        assert_eq!(preorders(2).len(), 4);
        assert_eq!(preorders(3).len(), 29);
    }
}
