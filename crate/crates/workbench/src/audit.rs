//! Claim audits: sweeping a general claim over an enumerated universe of
//! instances and reporting the census of where it holds, with witnesses for
//! the failures. Audits assert nothing; claims that fail somewhere are
//! findings, not errors.

use std::collections::BTreeMap;

use serde::Serialize;

use ttslab_core::associations::{check_second_association, power_association};
use ttslab_core::convergence::{embed_convergence, embed_topology};
use ttslab_core::derived_topology::derive_topology;
use ttslab_core::foundations::{Carrier, PrincipalFilter, Rel};
use ttslab_core::tts::Tts;
use ttslab_core::uniform::{embed_uniformity, FiniteUniformity};

use crate::enumerate;
use crate::generate::{self, SplitMix64};

#[derive(Debug, thiserror::Error)]
pub enum AuditError {
    #[error("unknown claim {0:?}")]
    UnknownClaim(String),
    #[error(transparent)]
    Enumerate(#[from] enumerate::EnumerateError),
}

/// Auditable claims over enumerated universes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Claim {
    /// The shared-limit relation of a topology embedding is transitive.
    XiTauTransitive,
    /// The shared-limit relation of a uniformity embedding is transitive.
    XiUpsilonTransitive,
    /// Convergence embeddings pass every structure axiom.
    SigmaLambdaIsTts,
    /// Power associations are compatible with reverse inclusion.
    PowerAssociationCompatible,
    /// Support-order compatibility is equivalent to its two live conditions.
    SupportOrderIff,
    /// The containment chain holds on every axiom-passing structure.
    ConverChain,
    /// The convergent tokens of an embedded convergence structure coincide
    /// with the structure's own convergent filters.
    ConverRecovery,
    /// The shared-limit relation of a uniformity is the same whether limits
    /// are taken in the carrier or in its separated quotient.
    UpsilonReadingsAgree,
    /// The derived topology determines the Cauchy relation within the
    /// strongly compatible universe.
    DerivedTopologyInformationLoss,
}

impl Claim {
    pub fn parse(name: &str) -> Result<Claim, AuditError> {
        Ok(match name {
            "xi-tau-transitive" => Claim::XiTauTransitive,
            "xi-upsilon-transitive" => Claim::XiUpsilonTransitive,
            "sigma-lambda-is-tts" => Claim::SigmaLambdaIsTts,
            "power-association-compatible" => Claim::PowerAssociationCompatible,
            "support-order-iff" => Claim::SupportOrderIff,
            "conver-chain" => Claim::ConverChain,
            "conver-recovery" => Claim::ConverRecovery,
            "upsilon-readings-agree" => Claim::UpsilonReadingsAgree,
            "derived-topology-information-loss" => Claim::DerivedTopologyInformationLoss,
            other => return Err(AuditError::UnknownClaim(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Claim::XiTauTransitive => "xi-tau-transitive",
            Claim::XiUpsilonTransitive => "xi-upsilon-transitive",
            Claim::SigmaLambdaIsTts => "sigma-lambda-is-tts",
            Claim::PowerAssociationCompatible => "power-association-compatible",
            Claim::SupportOrderIff => "support-order-iff",
            Claim::ConverChain => "conver-chain",
            Claim::ConverRecovery => "conver-recovery",
            Claim::UpsilonReadingsAgree => "upsilon-readings-agree",
            Claim::DerivedTopologyInformationLoss => "derived-topology-information-loss",
        }
    }

    pub fn all_names() -> &'static [&'static str] {
        &[
            "xi-tau-transitive",
            "xi-upsilon-transitive",
            "sigma-lambda-is-tts",
            "power-association-compatible",
            "support-order-iff",
            "conver-chain",
            "conver-recovery",
            "upsilon-readings-agree",
            "derived-topology-information-loss",
        ]
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AuditBounds {
    /// Carrier bound for the enumerated universe.
    pub n: usize,
    /// Token bound where applicable.
    pub tokens: usize,
    /// Extra seeded samples beyond the exhaustive range, where supported.
    pub samples: u64,
    pub seed: u64,
}

impl Default for AuditBounds {
    fn default() -> Self {
        AuditBounds { n: 3, tokens: 3, samples: 0, seed: 0 }
    }
}

const WITNESS_LIMIT: usize = 3;

/// Census of a claim over its instance universe.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub claim: &'static str,
    pub universe: String,
    pub bounds: AuditBounds,
    pub holds: u64,
    pub fails: u64,
    /// Up to three rendered witnesses of failing instances.
    pub witnesses: Vec<String>,
}

impl AuditReport {
    fn new(claim: Claim, universe: String, bounds: AuditBounds) -> Self {
        AuditReport {
            claim: claim.name(),
            universe,
            bounds,
            holds: 0,
            fails: 0,
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, holds: bool, witness: impl FnOnce() -> String) {
        if holds {
            self.holds += 1;
        } else {
            self.fails += 1;
            if self.witnesses.len() < WITNESS_LIMIT {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn clean(&self) -> bool {
        self.fails == 0
    }
}

impl std::fmt::Display for AuditReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "claim:    {}", self.claim)?;
        writeln!(f, "universe: {}", self.universe)?;
        writeln!(f, "holds:    {}", self.holds)?;
        writeln!(f, "fails:    {}", self.fails)?;
        for w in &self.witnesses {
            writeln!(f, "witness:  {w}")?;
        }
        write!(f, "result: {}", if self.clean() { "holds on the whole universe" } else { "counterexamples found" })
    }
}

fn topologies_up_to(n: usize) -> Result<Vec<ttslab_core::derived_topology::Topology>, AuditError> {
    let mut out = Vec::new();
    for k in 1..=n.min(enumerate::TOPOLOGY_PREORDER_CAP) {
        out.extend(enumerate::topologies_via_preorders(k)?);
    }
    Ok(out)
}

fn tts_universe(bounds: &AuditBounds) -> Result<Vec<Tts>, AuditError> {
    let mut out = Vec::new();
    for carrier in 1..=bounds.n.min(enumerate::TTS_CARRIER_CAP) {
        for tokens in 1..=bounds.tokens.min(enumerate::TTS_TOKEN_CAP) {
            out.extend(enumerate::tts_structures(carrier, tokens)?);
        }
    }
    // optional seeded samples above the exhaustive carrier range
    let mut rng = SplitMix64::new(bounds.seed);
    for _ in 0..bounds.samples {
        let carrier = (enumerate::TTS_CARRIER_CAP + 1).min(bounds.n.max(1));
        let tokens = 1 + rng.below(bounds.tokens.max(1));
        out.push(generate::random_tts(&mut rng, carrier, tokens));
    }
    Ok(out)
}

pub fn run_audit(claim: Claim, bounds: AuditBounds) -> Result<AuditReport, AuditError> {
    match claim {
        Claim::XiTauTransitive => {
            let topologies = topologies_up_to(bounds.n)?;
            let mut report = AuditReport::new(
                claim,
                format!("all {} topologies on 1..={} points", topologies.len(), bounds.n),
                bounds,
            );
            for topology in &topologies {
                let emb = embed_topology(topology);
                report.record(emb.xi_transitive.passed(), || {
                    let (a, b, c) = *emb.xi_transitive.witness().expect("failing instance");
                    format!("{topology}: tokens {a} ~ {b} ~ {c} but {a} !~ {c}")
                });
            }
            Ok(report)
        }
        Claim::XiUpsilonTransitive => {
            let mut report = AuditReport::new(
                claim,
                format!("all equivalence relations on 1..={} points", bounds.n),
                bounds,
            );
            for n in 1..=bounds.n.min(enumerate::UNIFORMITY_CAP) {
                for rel in enumerate::equivalences(n)? {
                    let upsilon =
                        FiniteUniformity::new(Carrier::new(n).expect("within caps"), rel.clone())
                            .expect("enumerated equivalences");
                    let emb = embed_uniformity(&upsilon);
                    report.record(emb.xi_transitive.passed(), || {
                        format!("entourage {rel}: relation not transitive")
                    });
                }
            }
            Ok(report)
        }
        Claim::SigmaLambdaIsTts => {
            let mut report = AuditReport::new(
                claim,
                format!("all convergence structures on 1..={} points", bounds.n),
                bounds,
            );
            for n in 1..=bounds.n.min(enumerate::CONVERGENCE_CAP) {
                for lambda in enumerate::convergence_structures(n)? {
                    let emb = embed_convergence(&lambda);
                    let ok = emb.tts.check_axioms().passed() && emb.ttsr.check_axioms().passed();
                    report.record(ok, || format!("structure on {n} points fails the axioms"));
                }
            }
            Ok(report)
        }
        Claim::PowerAssociationCompatible => {
            let universe = tts_universe(&bounds)?;
            let mut report = AuditReport::new(
                claim,
                format!("{} structures (carrier ≤ {}, tokens ≤ {})", universe.len(), bounds.n.min(enumerate::TTS_CARRIER_CAP), bounds.tokens.min(enumerate::TTS_TOKEN_CAP)),
                bounds,
            );
            for sigma in &universe {
                match power_association(sigma) {
                    Ok(assoc) => {
                        let ok = assoc.axioms.passed()
                            && assoc.compatibility.compatible()
                            && assoc.antisymmetric;
                        report.record(ok, || "association fails axioms or compatibility".into());
                    }
                    Err(e) => report.record(false, || e.to_string()),
                }
            }
            Ok(report)
        }
        Claim::SupportOrderIff => {
            let universe = tts_universe(&bounds)?;
            let mut report = AuditReport::new(
                claim,
                format!("{} structures (carrier ≤ {}, tokens ≤ {})", universe.len(), bounds.n.min(enumerate::TTS_CARRIER_CAP), bounds.tokens.min(enumerate::TTS_TOKEN_CAP)),
                bounds,
            );
            for sigma in &universe {
                match check_second_association(sigma) {
                    Ok(r) => report.record(r.iff_holds && r.t_up_closed_automatic, || {
                        "equivalence or automatic up-closure fails".into()
                    }),
                    Err(e) => report.record(false, || e.to_string()),
                }
            }
            Ok(report)
        }
        Claim::ConverChain => {
            let universe = tts_universe(&bounds)?;
            let mut report = AuditReport::new(
                claim,
                format!("{} structures (carrier ≤ {}, tokens ≤ {}, +{} samples)", universe.len(), bounds.n.min(enumerate::TTS_CARRIER_CAP), bounds.tokens.min(enumerate::TTS_TOKEN_CAP), bounds.samples),
                bounds,
            );
            for sigma in &universe {
                report.record(sigma.check_containment_chain().passed(), || {
                    "containment chain violated".into()
                });
            }
            Ok(report)
        }
        Claim::ConverRecovery => {
            let mut report = AuditReport::new(
                claim,
                format!("all convergence structures on 1..={} points", bounds.n),
                bounds,
            );
            for n in 1..=bounds.n.min(enumerate::CONVERGENCE_CAP) {
                for lambda in enumerate::convergence_structures(n)? {
                    let emb = embed_convergence(&lambda);
                    let carrier = lambda.carrier();
                    let mut mismatch = None;
                    for x in carrier.elements() {
                        let conver = emb.tts.convergent_to(x).expect("in range");
                        if &conver != lambda.at(x) {
                            mismatch = Some((x, conver.clone()));
                            break;
                        }
                    }
                    report.record(mismatch.is_none(), || {
                        let (x, conver) = mismatch.expect("failing instance");
                        let extra = conver.minus(lambda.at(x));
                        let f = extra.first().expect("strict superset");
                        let core = PrincipalFilter::from_token_index(carrier, f).core();
                        format!(
                            "on {n} points: ↑{core} counts as convergent to {x} through a shared \
                             limit elsewhere, but λ({x}) excludes it"
                        )
                    });
                }
            }
            Ok(report)
        }
        Claim::UpsilonReadingsAgree => {
            let mut report = AuditReport::new(
                claim,
                format!("all equivalence relations on 1..={} points", bounds.n),
                bounds,
            );
            for n in 1..=bounds.n.min(enumerate::UNIFORMITY_CAP) {
                let carrier = Carrier::new(n).expect("within caps");
                for rel in enumerate::equivalences(n)? {
                    let upsilon = FiniteUniformity::new(carrier, rel.clone())
                        .expect("enumerated equivalences");
                    let via_limits = embed_uniformity(&upsilon).embedding.tts.xi().clone();
                    // separated-quotient reading: filters relate when both
                    // cores land inside one class
                    let count = PrincipalFilter::count(carrier);
                    let mut via_quotient = Rel::empty(count);
                    for f in PrincipalFilter::all(carrier) {
                        for g in PrincipalFilter::all(carrier) {
                            let joined = f.core().union(g.core());
                            if upsilon
                                .classes()
                                .iter()
                                .any(|class| joined.is_subset_of(*class))
                            {
                                via_quotient.insert(f.token_index(), g.token_index());
                            }
                        }
                    }
                    report.record(via_limits == via_quotient, || {
                        format!("entourage {rel}: the two readings differ")
                    });
                }
            }
            Ok(report)
        }
        Claim::DerivedTopologyInformationLoss => {
            let universe = tts_universe(&bounds)?;
            let mut derivable: Vec<(Tts, ttslab_core::derived_topology::Topology)> = Vec::new();
            for sigma in universe {
                let Ok(assoc) = check_second_association(&sigma) else { continue };
                if !assoc.compatibility.compatible() {
                    continue;
                }
                if let Ok(derivation) = derive_topology(&sigma, &assoc.support.leq) {
                    derivable.push((sigma, derivation.topology));
                }
            }
            let mut report = AuditReport::new(
                claim,
                format!(
                    "{} strongly compatible structures under their support orders",
                    derivable.len()
                ),
                bounds,
            );
            // group by carrier, token count and derived topology; a group
            // with two distinct relations is an information-loss witness
            let mut groups: BTreeMap<(usize, usize, Vec<usize>), Vec<&Tts>> = BTreeMap::new();
            for (sigma, topology) in &derivable {
                let key = (
                    sigma.carrier().size(),
                    sigma.tokens(),
                    topology.opens().map(|o| o.mask() as usize).collect(),
                );
                groups.entry(key).or_default().push(sigma);
            }
            for (sigma, topology) in &derivable {
                let key = (
                    sigma.carrier().size(),
                    sigma.tokens(),
                    topology.opens().map(|o| o.mask() as usize).collect(),
                );
                let group = &groups[&key];
                let twin =
                    group.iter().find(|other| other.xi() != sigma.xi());
                report.record(twin.is_none(), || {
                    format!(
                        "two structures with distinct Cauchy relations derive the same {topology}"
                    )
                });
            }
            Ok(report)
        }
    }
}

/// Auxiliary view used by tests: the convergence-recovery census per size.
pub fn conver_recovery_census(n: usize) -> Result<(u64, u64), AuditError> {
    let report = run_audit(
        Claim::ConverRecovery,
        AuditBounds { n, tokens: 3, samples: 0, seed: 0 },
    )?;
    Ok((report.holds, report.fails))
}
