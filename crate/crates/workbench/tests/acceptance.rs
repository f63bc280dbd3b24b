//! The acceptance suite. One test per criterion; each prints a single
//! `criterion NN <name> ... PASS/FAIL` line (with failure details) before
//! asserting.
//!
//! Two criteria fail by design of the calculus itself, not by implementation
//! choice: the symmetric shared-limit relation cannot keep one-directional
//! convergence apart, so recovering the original topology (criterion 2) and
//! the original convergence structure (criterion 5) from an embedding is
//! only possible when the structure is partition-like. The failing tests
//! print the exact census and a first witness; `ttslab audit
//! conver-recovery` documents the same phenomenon as a claim audit.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use ttslab_core::associations::{check_second_association, power_association};
use ttslab_core::convergence::{
    check_convergence_axioms, embed_convergence, embed_topology, exponential_check,
    induced_topology, refinement_order, topology_to_convergence, ConvergenceStructure,
};
use ttslab_core::derived_topology::{derive_topology, Topology};
use ttslab_core::foundations::{
    group_axiom_audit, BitSet, Carrier, GroupTable, PrincipalFilter, Rel, Subset,
};
use ttslab_core::moore_smith::{
    check_moore_smith, is_subnet, MsBounds, NetClass, SubnetNotion, Verdict,
};
use ttslab_core::tts::{AxiomId, Tts, TtpAssignment, Ttsr};
use ttslab_core::uniform::{check_ucs_axioms, embed_ucs, embed_uniformity, FiniteUniformity};

use ttslab_workbench::enumerate;
use ttslab_workbench::generate::{self, SplitMix64};
use ttslab_workbench::search::{run_search, SearchOutcome, SearchSpec, Target};

fn carrier(n: usize) -> Carrier {
    Carrier::new(n).unwrap()
}

fn pass_line(number: u32, name: &str) {
    println!("criterion {number:02} {name} ... PASS");
}

fn fail_line(number: u32, name: &str, detail: &str) {
    println!("criterion {number:02} {name} ... FAIL\n  {detail}");
}

// ---------------------------------------------------------------------------
// criterion 1: the optimized checkers agree with naive direct-quantifier
// re-implementations on the enumerated universe and on seeded samples
// ---------------------------------------------------------------------------

/// Plain-set mirror of a token structure, checked by literal quantifier
/// loops over materialized subsets.
struct NaiveTts {
    n: usize,
    tokens: usize,
    t: BTreeMap<Vec<usize>, BTreeSet<usize>>,
    xi: BTreeSet<(usize, usize)>,
}

fn naive_of(sigma: &Tts) -> NaiveTts {
    NaiveTts {
        n: sigma.carrier().size(),
        tokens: sigma.tokens(),
        t: sigma
            .support()
            .rows()
            .map(|(s, toks)| (s.members().collect(), toks.iter().collect()))
            .collect(),
        xi: sigma.xi().pairs().collect(),
    }
}

fn all_index_subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

fn is_sub(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

impl NaiveTts {
    fn ttp1(&self) -> bool {
        let subsets = all_index_subsets(self.n);
        subsets.iter().filter(|a| !a.is_empty()).all(|a| {
            !self.t[a].is_empty()
                && subsets
                    .iter()
                    .filter(|b| !b.is_empty() && is_sub(a, b))
                    .all(|b| self.t[a].iter().all(|tok| self.t[b].contains(tok)))
        })
    }

    fn ttp2(&self) -> bool {
        let full: Vec<usize> = (0..self.n).collect();
        (0..self.tokens).all(|tok| self.t[&full].contains(&tok))
    }

    fn tts1(&self) -> bool {
        (0..self.n).all(|x| {
            let based = &self.t[&vec![x]];
            based
                .iter()
                .all(|a| based.iter().all(|b| self.xi.contains(&(*a, *b))))
        })
    }

    fn tts2(&self) -> bool {
        self.xi.iter().all(|&(a, b)| self.xi.contains(&(b, a)))
    }

    fn tts3(&self) -> bool {
        self.xi.iter().all(|&(a, _)| self.xi.contains(&(a, a)))
    }

    fn ttp3(&self, leq: &BTreeSet<(usize, usize)>) -> bool {
        all_index_subsets(self.n).iter().all(|a| {
            self.t[a].iter().all(|&lo| {
                (0..self.tokens)
                    .filter(|&hi| leq.contains(&(lo, hi)))
                    .all(|hi| self.t[a].contains(&hi))
            })
        })
    }

    fn tts4(&self, leq: &BTreeSet<(usize, usize)>) -> bool {
        self.xi.iter().all(|&(x, y)| {
            (0..self.tokens).filter(|&u| leq.contains(&(x, u))).all(|u| {
                (0..self.tokens)
                    .filter(|&v| leq.contains(&(y, v)))
                    .all(|v| self.xi.contains(&(u, v)))
            })
        })
    }
}

/// Naive convergence axioms over materialized filter families: a filter is
/// the family of supersets of its core, refinement is family inclusion, and
/// the meet is the family intersection.
fn naive_convergence_axioms(lambda: &ConvergenceStructure) -> bool {
    let n = lambda.carrier().size();
    let subsets = all_index_subsets(n);
    let family_of = |core: &BTreeSet<usize>| -> BTreeSet<Vec<usize>> {
        subsets
            .iter()
            .filter(|s| core.iter().all(|x| s.contains(x)))
            .cloned()
            .collect()
    };
    let all_cores: Vec<BTreeSet<usize>> = subsets
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.iter().copied().collect())
        .collect();
    let at: Vec<Vec<BTreeSet<usize>>> = (0..n)
        .map(|x| {
            all_cores
                .iter()
                .filter(|core| {
                    let f = PrincipalFilter::new(
                        Subset::from_members(lambda.carrier(), core.iter().copied()).unwrap(),
                    )
                    .unwrap();
                    lambda.converges(f, x)
                })
                .cloned()
                .collect()
        })
        .collect();

    (0..n).all(|x| {
        let families: Vec<BTreeSet<Vec<usize>>> = at[x].iter().map(family_of).collect();
        // point filter present
        let point: BTreeSet<usize> = [x].into_iter().collect();
        let has_point = at[x].contains(&point);
        // meets (family intersections) stay inside
        let meets_ok = families.iter().all(|f| {
            families.iter().all(|g| {
                let meet: BTreeSet<Vec<usize>> = f.intersection(g).cloned().collect();
                families.contains(&meet)
            })
        });
        // refinements (family supersets) stay inside
        let refinements_ok = all_cores.iter().all(|core| {
            let fam = family_of(core);
            let refines_some = families.iter().any(|f| f.iter().all(|s| fam.contains(s)));
            !refines_some || at[x].contains(core)
        });
        has_point && meets_ok && refinements_ok
    })
}

/// Naive closure conditions for a family of relations, phrased at filter
/// level over materialized relation sets.
fn naive_ucs_axioms(ucs: &ttslab_core::uniform::UniformConvergence) -> bool {
    let n = ucs.carrier().size();
    let gens: BTreeSet<BTreeSet<(usize, usize)>> =
        ucs.generators().map(|r| r.pairs().collect()).collect();
    let point_pairs = (0..n).all(|x| gens.contains(&[(x, x)].into_iter().collect()));
    let meets = gens
        .iter()
        .all(|a| gens.iter().all(|b| gens.contains(&a.union(b).cloned().collect())));
    let refinements = gens.iter().all(|r| {
        // every nonempty subset of r must be present
        let pairs: Vec<(usize, usize)> = r.iter().copied().collect();
        (1u64..1 << pairs.len()).all(|mask| {
            let sub: BTreeSet<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| *p)
                .collect();
            gens.contains(&sub)
        })
    });
    let inverses = gens.iter().all(|r| {
        let inv: BTreeSet<(usize, usize)> = r.iter().map(|&(x, y)| (y, x)).collect();
        gens.contains(&inv)
    });
    let compositions = gens.iter().all(|a| {
        gens.iter().all(|b| {
            let ab: BTreeSet<(usize, usize)> = a
                .iter()
                .flat_map(|&(x, y)| {
                    b.iter().filter(move |&&(y2, _)| y2 == y).map(move |&(_, z)| (x, z))
                })
                .collect();
            ab.is_empty() || gens.contains(&ab)
        })
    });
    point_pairs && meets && refinements && inverses && compositions
}

fn compare_tts(sigma: &Tts) -> Result<(), String> {
    let naive = naive_of(sigma);
    let report = sigma.check_axioms();
    let pairs = [
        (AxiomId::Ttp1, naive.ttp1()),
        (AxiomId::Ttp2, naive.ttp2()),
        (AxiomId::Tts1, naive.tts1()),
        (AxiomId::Tts2, naive.tts2()),
        (AxiomId::Tts3, naive.tts3()),
    ];
    for (id, expected) in pairs {
        let got = report.outcome(id).unwrap().passed();
        if got != expected {
            return Err(format!("{id}: checker says {got}, oracle says {expected}"));
        }
    }
    Ok(())
}

fn compare_ttsr(sigma: &Ttsr) -> Result<(), String> {
    compare_tts(sigma.base())?;
    let naive = naive_of(sigma.base());
    let leq: BTreeSet<(usize, usize)> = sigma.leq().pairs().collect();
    let report = sigma.check_axioms();
    for (id, expected) in
        [(AxiomId::Ttp3, naive.ttp3(&leq)), (AxiomId::Tts4, naive.tts4(&leq))]
    {
        let got = report.outcome(id).unwrap().passed();
        if got != expected {
            return Err(format!("{id}: checker says {got}, oracle says {expected}"));
        }
    }
    Ok(())
}

#[test]
fn criterion_01_axiom_checker_oracle_equivalence() {
    let started = Instant::now();
    let name = "axiom-checker oracle equivalence";

    // exhaustive at carrier ≤ 2 over every token count within caps
    let mut enumerated = Vec::new();
    for c in 1..=2 {
        for tokens in 1..=3 {
            enumerated.extend(enumerate::tts_structures(c, tokens).unwrap());
        }
    }
    for sigma in enumerated {
        compare_tts(&sigma).unwrap_or_else(|e| {
            fail_line(1, name, &e);
            panic!("oracle disagreement: {e}");
        });
    }
    for lambda in enumerate::convergence_structures(2).unwrap() {
        let got = check_convergence_axioms(&lambda).passed();
        let expected = naive_convergence_axioms(&lambda);
        assert_eq!(got, expected, "convergence oracle disagreement");
    }
    for ucs in enumerate::ucs_structures(2).unwrap() {
        assert_eq!(check_ucs_axioms(&ucs).passed(), naive_ucs_axioms(&ucs));
    }

    // ≥ 10^4 seeded samples at carrier 3, half of them mutated
    let mut rng = SplitMix64::new(0xACCE5501);
    for i in 0..10_000u32 {
        match i % 4 {
            0 => {
                let sigma = generate::random_tts(&mut rng, 3, 4);
                compare_tts(&sigma).expect("valid sample must agree");
            }
            1 => {
                let base = generate::random_tts(&mut rng, 3, 4);
                let sigma = generate::mutate_tts(&mut rng, &base);
                compare_tts(&sigma).expect("mutated sample must agree");
            }
            2 => {
                let ttsr = generate::random_ttsr(&mut rng, 3, 3);
                compare_ttsr(&ttsr).expect("ordered sample must agree");
                let mutated = generate::mutate_tts(&mut rng, ttsr.base());
                let mutated = Ttsr::new(mutated, ttsr.leq().clone()).unwrap();
                compare_ttsr(&mutated).expect("mutated ordered sample must agree");
            }
            _ => {
                // random per-point filter sets, usually invalid
                let c = carrier(3);
                let filters = PrincipalFilter::count(c);
                let lambda = ConvergenceStructure::new(
                    c,
                    (0..3)
                        .map(|_| {
                            BitSet::from_iter(
                                filters,
                                (0..filters).filter(|_| rng.chance(1, 2)),
                            )
                        })
                        .collect(),
                )
                .unwrap();
                assert_eq!(
                    check_convergence_axioms(&lambda).passed(),
                    naive_convergence_axioms(&lambda),
                    "convergence oracle disagreement on a random sample"
                );
            }
        }
    }

    // sampled relation families at carrier 3 for the closure conditions
    let mut rng = SplitMix64::new(0xACCE5502);
    for _ in 0..200 {
        let ucs = generate::random_ucs(&mut rng, 3);
        assert_eq!(check_ucs_axioms(&ucs).passed(), naive_ucs_axioms(&ucs));
        // knock one generator out
        let gens: Vec<Rel> = ucs.generators().cloned().collect();
        if gens.len() > 1 {
            let victim = rng.below(gens.len());
            let broken = ttslab_core::uniform::UniformConvergence::new(
                ucs.carrier(),
                gens.into_iter().enumerate().filter(|(i, _)| *i != victim).map(|(_, r)| r),
            )
            .unwrap();
            assert_eq!(check_ucs_axioms(&broken).passed(), naive_ucs_axioms(&broken));
        }
    }

    // topology validation against a set-level oracle: random subset families
    // (with the empty set and carrier forced in half the cases)
    let mut rng = SplitMix64::new(0xACCE5503);
    let naive_topology = |c: Carrier, families: &[Vec<usize>]| -> bool {
        let members: Vec<BTreeSet<usize>> =
            families.iter().map(|s| s.iter().copied().collect()).collect();
        let has = |s: &BTreeSet<usize>| members.contains(s);
        let empty = BTreeSet::new();
        let full: BTreeSet<usize> = c.elements().collect();
        has(&empty)
            && has(&full)
            && members.iter().all(|a| {
                members.iter().all(|b| {
                    has(&a.union(b).copied().collect())
                        && has(&a.intersection(b).copied().collect())
                })
            })
    };
    for _ in 0..2_000 {
        let c = carrier(3);
        let mut masks: BTreeSet<u32> = (0..1 + rng.below(6)).map(|_| (rng.next_u64() as u32) & 7).collect();
        if rng.chance(1, 2) {
            masks.insert(0);
            masks.insert(7);
        }
        let subsets: Vec<Subset> = masks.iter().map(|&m| Subset::from_mask(c, m)).collect();
        let families: Vec<Vec<usize>> = subsets.iter().map(|s| s.members().collect()).collect();
        let checker_ok = Topology::new(c, subsets.iter().copied()).is_ok();
        assert_eq!(checker_ok, naive_topology(c, &families), "topology oracle disagreement");
    }

    // uniformity validation against literal reflexive/symmetric/transitive loops
    let mut rng = SplitMix64::new(0xACCE5504);
    for _ in 0..2_000 {
        let n = 3;
        let rel = Rel::from_pairs(
            n,
            (0..n * n).filter(|_| rng.chance(1, 2)).map(|i| (i / n, i % n)),
        );
        let pairs: BTreeSet<(usize, usize)> = rel.pairs().collect();
        let naive = (0..n).all(|x| pairs.contains(&(x, x)))
            && pairs.iter().all(|&(x, y)| pairs.contains(&(y, x)))
            && pairs.iter().all(|&(x, y)| {
                pairs.iter().filter(|&&(y2, _)| y2 == y).all(|&(_, z)| pairs.contains(&(x, z)))
            });
        let checker_ok = FiniteUniformity::new(carrier(n), rel).is_ok();
        assert_eq!(checker_ok, naive, "uniformity oracle disagreement");
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 1 exceeded its 60 s budget: {elapsed:?}");
    pass_line(1, name);
}

// ---------------------------------------------------------------------------
// criterion 2: the topology round trip over every topology on 1–4 points
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_topology_round_trip() {
    let started = Instant::now();
    let name = "topology round trip over 1+4+29+355 topologies";

    let mut universe: Vec<Topology> = Vec::new();
    let expected_counts = [1usize, 4, 29, 355];
    for n in 1..=4 {
        let batch = enumerate::topologies(n).unwrap();
        assert_eq!(batch.len(), expected_counts[n - 1], "census pinned after enumeration");
        universe.extend(batch);
    }

    let mut induced_ok = 0usize;
    let mut embedding_ok = 0usize;
    let mut derive_ok = 0usize;
    let mut first_derive_failure: Option<String> = None;
    let total = universe.len();

    for topology in &universe {
        let lambda = topology_to_convergence(topology);
        if induced_topology(&lambda) == *topology {
            induced_ok += 1;
        }
        let emb = embed_topology(topology);
        if emb.embedding.tts.check_axioms().passed() && emb.complete {
            embedding_ok += 1;
        }
        let leq = refinement_order(topology.carrier());
        match derive_topology(&emb.embedding.tts, &leq) {
            Ok(derivation) if derivation.topology == *topology => derive_ok += 1,
            Ok(derivation) => {
                if first_derive_failure.is_none() {
                    first_derive_failure = Some(format!(
                        "{topology} derives back as {}: the symmetric shared-limit relation \
                         merges points with overlapping limit sets, so only partition \
                         topologies survive the round trip",
                        derivation.topology
                    ));
                }
            }
            Err(e) => {
                if first_derive_failure.is_none() {
                    first_derive_failure = Some(format!("{topology}: derivation refused: {e}"));
                }
            }
        }
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "criterion 2 exceeded its 120 s budget: {elapsed:?}");

    assert_eq!(induced_ok, total, "convergence round trip must be the identity");
    assert_eq!(embedding_ok, total, "embeddings must pass the axioms and be complete");

    if derive_ok == total {
        pass_line(2, name);
    } else {
        fail_line(
            2,
            name,
            &format!(
                "induced-topology round trip: {induced_ok}/{total} PASS; embedding axioms + \
                 completeness: {embedding_ok}/{total} PASS; derived-topology round trip: \
                 {derive_ok}/{total} (the {} partition topologies only).\n  first witness: {}\n  \
                 see also: ttslab audit conver-recovery --n 3",
                derive_ok,
                first_derive_failure.as_deref().unwrap_or("none")
            ),
        );
    }
    assert_eq!(
        derive_ok, total,
        "derived-topology round trip holds only on partition topologies ({derive_ok}/{total}); \
         the embedding's symmetric Cauchy relation cannot represent one-directional convergence"
    );
}

// ---------------------------------------------------------------------------
// criterion 3: consequences of strong compatibility, and the search for a
// union-closure failure once the covering condition is dropped
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_strong_compatibility_proposition() {
    let started = Instant::now();
    let name = "strong-compatibility consequences and union-closure search";

    // test universe: enumerated structures under their support orders, plus
    // every embedded topology and convergence structure under refinement
    let mut strongly_compatible = 0usize;
    for sigma in enumerate::tts_structures(2, 3)
        .unwrap()
        .into_iter()
        .chain(enumerate::tts_structures(1, 3).unwrap())
    {
        let assoc = check_second_association(&sigma).unwrap();
        if let Ok(derivation) = derive_topology(&sigma, &assoc.support.leq) {
            strongly_compatible += 1;
            assert!(
                derivation.proposition.passed(),
                "union closure, intersection closure and neighbourhood refinement must hold"
            );
        }
    }
    assert!(strongly_compatible > 0, "universe must contain strongly compatible pairs");

    for n in 1..=3 {
        for topology in enumerate::topologies(n).unwrap() {
            let emb = embed_topology(&topology);
            let leq = refinement_order(topology.carrier());
            let derivation =
                derive_topology(&emb.embedding.tts, &leq).expect("filter supports are covered");
            assert!(derivation.proposition.passed());
        }
    }
    for lambda in enumerate::convergence_structures(3).unwrap() {
        let emb = embed_convergence(&lambda);
        let derivation = derive_topology(&emb.tts, emb.ttsr.leq())
            .expect("filter supports are covered");
        assert!(derivation.proposition.passed());
    }

    // dropping the covering condition: a structure with two closed sets whose
    // union is not closed exists within carrier ≤ 3, tokens ≤ 4
    let search_started = Instant::now();
    let spec = SearchSpec {
        target: Target::UnionOfClosedsNotClosed,
        carrier: 3,
        tokens: 4,
        samples: 200_000,
        seed: 0,
        exhaustive: false,
    };
    let outcome = run_search(&spec).unwrap();
    let search_elapsed = search_started.elapsed();
    assert!(
        matches!(outcome, SearchOutcome::Witness { .. }),
        "the union-closure search must find a witness"
    );
    assert!(search_elapsed.as_secs() < 60, "search exceeded its 60 s budget: {search_elapsed:?}");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 3 exceeded its 60 s budget: {elapsed:?}");
    pass_line(3, name);
}

// ---------------------------------------------------------------------------
// criterion 4: the two association propositions
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_association_propositions() {
    let started = Instant::now();
    let name = "association propositions";

    let universe: Vec<Tts> = enumerate::tts_structures(1, 3)
        .unwrap()
        .into_iter()
        .chain(enumerate::tts_structures(1, 2).unwrap())
        .chain(enumerate::tts_structures(1, 1).unwrap())
        .chain(enumerate::tts_structures(2, 1).unwrap())
        .chain(enumerate::tts_structures(2, 2).unwrap())
        .chain(enumerate::tts_structures(2, 3).unwrap())
        .collect();

    for sigma in &universe {
        let assoc = power_association(sigma).unwrap();
        assert!(assoc.axioms.passed(), "power association must satisfy the axioms");
        assert!(
            assoc.compatibility.compatible(),
            "power association must be compatible with reverse inclusion"
        );
        assert!(assoc.antisymmetric, "reverse inclusion is a partial order");

        let second = check_second_association(sigma).unwrap();
        assert!(second.iff_holds, "compatibility must match its two live conditions");
        assert!(second.t_up_closed_automatic, "localization up-closure is automatic");
    }

    // constructed instance where the convergent-set up-closure fails under
    // the support order: tokens {a, b, c} with c based only in the carrier
    let t = TtpAssignment::new(
        carrier(2),
        3,
        vec![
            BitSet::new(3),
            BitSet::from_iter(3, [0]),
            BitSet::from_iter(3, [1]),
            BitSet::from_iter(3, [0, 1, 2]),
        ],
    )
    .unwrap();
    let xi = Rel::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 2), (2, 0)]);
    let sigma = Tts::new(t, xi).unwrap();
    assert!(sigma.check_axioms().passed());
    let report = check_second_association(&sigma).unwrap();
    assert!(
        !report.compatibility.conver_up_closed.passed(),
        "the constructed instance must violate convergent-set up-closure"
    );
    assert!(!report.compatibility.compatible());
    assert!(report.iff_holds, "the equivalence must survive the violation");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 4 exceeded its 60 s budget: {elapsed:?}");
    pass_line(4, name);
}

// ---------------------------------------------------------------------------
// criterion 5: embeddings pass the axioms; recovering the convergent sets
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_embeddings() {
    let started = Instant::now();
    let name = "embeddings pass axioms; convergent sets recovered";

    // exhaustive at two points
    let at2 = enumerate::convergence_structures(2).unwrap();
    assert_eq!(at2.len(), 4);
    let mut tested: Vec<ConvergenceStructure> = at2;

    // ≥ 10^3 seeded samples at three points, for both embedding kinds
    let mut rng = SplitMix64::new(0xACCE5505);
    for _ in 0..1_000 {
        tested.push(generate::random_convergence(&mut rng, 3));
        let ucs = generate::random_ucs(&mut rng, 3);
        let emb = embed_ucs(&ucs);
        assert!(emb.tts.check_axioms().passed(), "relation-family embedding fails the axioms");
        assert!(emb.ttsr.check_axioms().passed());
    }
    for ucs in enumerate::ucs_structures(2).unwrap() {
        let emb = embed_ucs(&ucs);
        assert!(emb.tts.check_axioms().passed());
        assert!(emb.ttsr.check_axioms().passed());
    }

    let mut recovered = 0usize;
    let mut first_failure: Option<String> = None;
    for lambda in &tested {
        let emb = embed_convergence(lambda);
        assert!(emb.tts.check_axioms().passed(), "convergence embedding fails the axioms");
        assert!(emb.ttsr.check_axioms().passed());
        let c = lambda.carrier();
        let mut equal = true;
        for x in c.elements() {
            let conver = emb.tts.convergent_to(x).unwrap();
            assert!(
                lambda.at(x).is_subset_of(&conver),
                "the embedded convergent set must contain the structure's own"
            );
            if &conver != lambda.at(x) {
                equal = false;
                if first_failure.is_none() {
                    let extra = conver.minus(lambda.at(x)).first().unwrap();
                    let core = PrincipalFilter::from_token_index(c, extra).core();
                    first_failure = Some(format!(
                        "on {} points, ↑{core} is Cauchy related to the point filter of {x} \
                         through a shared limit elsewhere, so it counts as convergent to {x} \
                         although the structure excludes it",
                        c.size()
                    ));
                }
            }
        }
        if equal {
            recovered += 1;
        }
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 5 exceeded its 60 s budget: {elapsed:?}");

    let total = tested.len();
    if recovered == total {
        pass_line(5, name);
    } else {
        fail_line(
            5,
            name,
            &format!(
                "axiom checks: PASS on all {total} embeddings (plus the relation-family \
                 embeddings); convergent-set recovery: {recovered}/{total} — equality requires \
                 the structure's convergent-core relation to be an equivalence.\n  first \
                 witness: {}\n  see also: ttslab audit conver-recovery --n 3",
                first_failure.as_deref().unwrap_or("none")
            ),
        );
    }
    assert_eq!(
        recovered, total,
        "embedded convergent sets recover the structure only for partition-like structures \
         ({recovered}/{total}); the symmetric Cauchy relation merges shared-limit directions"
    );
}

// ---------------------------------------------------------------------------
// criterion 6: the exponential law
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_exponential_law() {
    let started = Instant::now();
    let name = "exponential law on function spaces";

    // all triples of convergence structures on two points, elementwise
    let at2 = enumerate::convergence_structures(2).unwrap();
    for x in &at2 {
        for y in &at2 {
            for z in &at2 {
                let report = exponential_check(x, y, z);
                assert!(
                    report.bijective(),
                    "transposition must restrict to a bijection: {report:?}"
                );
            }
        }
    }

    // ≥ 100 seeded triples on three points
    let mut rng = SplitMix64::new(0xACCE5506);
    for _ in 0..100 {
        let x = generate::random_convergence(&mut rng, 3);
        let y = generate::random_convergence(&mut rng, 3);
        let z = generate::random_convergence(&mut rng, 3);
        let report = exponential_check(&x, &y, &z);
        assert!(report.injective_on_all_maps);
        assert!(report.bijective(), "transposition must restrict to a bijection: {report:?}");
    }

    // the companion negative claim about ordinary topologies cannot be
    // reproduced here: every finite topology is exponentiable, so finite
    // scale shows the positive side only. Documented, not asserted.
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "criterion 6 exceeded its 120 s budget: {elapsed:?}");
    pass_line(6, name);
}

// ---------------------------------------------------------------------------
// criterion 7: the four net-convergence conditions under bounded search
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_moore_smith() {
    let started = Instant::now();
    let name = "net-convergence conditions under bounded search";
    let bounds = MsBounds::default();

    // every topology-induced class on 2 and 3 points reports no violation
    for n in 2..=3 {
        for topology in enumerate::topologies(n).unwrap() {
            let class = NetClass::FromTopology(topology);
            let report = check_moore_smith(&class, &bounds).unwrap();
            assert!(report.all_pass(), "topological class must pass: {report:?}");
            assert!(report.divergence_formulations_agree());
        }
    }

    // synthetic class violating the constants condition, witness re-validated
    let ev = NetClass::EventuallyMinIndex { carrier: carrier(2), min_index: 2 };
    let report = check_moore_smith(&ev, &bounds).unwrap();
    let Verdict::Violated { witness } = &report.constants else {
        panic!("constants condition must be violated");
    };
    assert!(witness.net.values.iter().all(|&v| v == witness.point));
    assert!(!ev.converges(&witness.net, witness.point), "witness must re-validate");
    assert!(report.divergence_formulations_agree());

    // synthetic class violating the subnet condition, witness re-validated
    let attains = NetClass::AttainsValue { carrier: carrier(2) };
    let report = check_moore_smith(&attains, &bounds).unwrap();
    let Verdict::Violated { witness } = &report.subnets else {
        panic!("subnet condition must be violated");
    };
    assert!(attains.converges(&witness.net, witness.point));
    assert!(!attains.converges(&witness.subnet, witness.point));
    assert!(is_subnet(&witness.subnet, &witness.net, SubnetNotion::Willard));
    assert!(report.divergence_formulations_agree());

    // every non-topological convergence structure on 3 points produces a
    // bounded witness, always through the diagonal condition
    let mut non_topological = 0usize;
    for lambda in enumerate::convergence_structures(3).unwrap() {
        if ttslab_core::convergence::is_topological(&lambda) {
            continue;
        }
        non_topological += 1;
        let class = NetClass::FromConvergence(lambda);
        let report = check_moore_smith(&class, &bounds).unwrap();
        assert!(
            report.diagonal.violated(),
            "non-topological structures fail the diagonal condition within default bounds"
        );
        assert!(report.divergence_formulations_agree());
    }
    assert_eq!(non_topological, 35, "pinned census of non-topological structures");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "criterion 7 exceeded its 120 s budget: {elapsed:?}");
    pass_line(7, name);
}

// ---------------------------------------------------------------------------
// criterion 8: uniformities
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_uniformities() {
    let started = Instant::now();
    let name = "uniformities: Cauchy criterion, completeness, embedding equality";

    for n in 1..=4 {
        let c = carrier(n);
        for rel in enumerate::equivalences(n).unwrap() {
            let upsilon = FiniteUniformity::new(c, rel).unwrap();
            let report = embed_uniformity(&upsilon);
            assert!(report.complete, "finite uniform spaces are complete");
            assert!(
                report.cauchy_matches_square_criterion,
                "Cauchy filters are exactly those whose core squares into the entourage"
            );
            // independent re-check of the criterion, filter by filter
            let cauchy = report.embedding.tts.cauchy();
            for f in PrincipalFilter::all(c) {
                let squares = f.product(f).unwrap().core().is_subset_of(upsilon.entourage());
                assert_eq!(cauchy.contains(f.token_index()), squares);
            }
            // the generator-family embedding gives the same relation
            let ucs = upsilon.down_closure_ucs().unwrap();
            let via_ucs = embed_ucs(&ucs);
            assert_eq!(via_ucs.tts.xi(), report.embedding.tts.xi());
            assert!(report.embedding.ttsr.check_axioms().passed());
        }
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "criterion 8 exceeded its 30 s budget: {elapsed:?}");
    pass_line(8, name);
}

// ---------------------------------------------------------------------------
// criterion 9: the extended group operation on filters
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_filter_group_failure() {
    let started = Instant::now();
    let name = "group operation on filters";

    let trivial = group_axiom_audit(&GroupTable::cyclic(1));
    assert!(trivial.is_group, "the one-element carrier keeps a group");

    for order in [2usize, 3] {
        let audit = group_axiom_audit(&GroupTable::cyclic(order));
        assert!(!audit.is_group);
        assert!(audit.closure.passed());
        assert!(audit.associativity.passed());
        assert!(audit.identity.is_some());
        let witness = audit.inverses.witness().expect("inverse axiom must fail");
        assert!(witness.core().len() > 1, "the witness filter has a non-singleton core");
        if order == 2 {
            assert_eq!(witness.core().members().collect::<Vec<_>>(), vec![0, 1]);
        }
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 1, "criterion 9 exceeded its 1 s budget: {elapsed:?}");
    pass_line(9, name);
}

// ---------------------------------------------------------------------------
// criterion 10: determinism of seeded commands
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_determinism() {
    let name = "byte determinism of seeded commands";
    let commands: Vec<Vec<&str>> = vec![
        vec!["search", "union-of-closeds-not-closed", "--seed", "17"],
        vec!["search", "monotonicity-without-up-closure", "--seed", "17", "--format", "json"],
        vec!["audit", "conver-recovery", "--n", "3", "--seed", "17"],
        vec!["audit", "xi-tau-transitive", "--n", "3", "--format", "json"],
        vec!["enumerate", "tts", "--n", "2", "--tokens", "3"],
    ];
    for args in commands {
        let run = || {
            std::process::Command::new(env!("CARGO_BIN_EXE_ttslab"))
                .args(&args)
                .output()
                .expect("binary runs")
        };
        let a = run();
        let b = run();
        assert_eq!(a.stdout, b.stdout, "stdout must be byte-identical for {args:?}");
        assert_eq!(a.stderr, b.stderr, "stderr must be byte-identical for {args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
    pass_line(10, name);
}
