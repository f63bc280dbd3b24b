//! Counterexample search: random (seeded) or exhaustive hunts for structures
//! violating a named property. Every emitted witness is re-validated through
//! the relevant module checker before it is reported, so the search layer
//! cannot produce false positives.

use serde::Serialize;

use ttslab_core::associations::check_second_association;
use ttslab_core::convergence::is_topological;
use ttslab_core::derived_topology::is_sigma_closed;
use ttslab_core::foundations::Subset;
use ttslab_core::tts::{AxiomId, Tts, Ttsr};

use crate::document::{self, Document};
use crate::enumerate;
use crate::generate::{self, SplitMix64};

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("unknown property {0:?}")]
    UnknownProperty(String),
    #[error("bounds exceed caps: {0}")]
    CapExceeded(String),
}

/// Searchable properties. Each one names a way a structure can misbehave;
/// the search succeeds when it finds a structure exhibiting it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Target {
    /// An axiom-passing structure whose closed sets are not closed under
    /// pairwise union.
    UnionOfClosedsNotClosed,
    /// An axiom-passing structure with an asymmetric Cauchy relation —
    /// impossible by construction, so the search always exhausts.
    Tts2Violation,
    /// A convergence structure that is not the convergence of any topology.
    NonTopologicalConvergence,
    /// A structure whose convergent sets are not up-closed under its own
    /// support order.
    SupportOrderCompatViolation,
    /// An ordered structure passing every axiom except the relation
    /// up-closure, whose Cauchy set fails to be up-closed.
    MonotonicityWithoutUpClosure,
}

impl Target {
    pub fn parse(name: &str) -> Result<Target, SearchError> {
        Ok(match name {
            "union-of-closeds-not-closed" => Target::UnionOfClosedsNotClosed,
            "tts2-violation" => Target::Tts2Violation,
            "non-topological-convergence" => Target::NonTopologicalConvergence,
            "support-order-compat-violation" => Target::SupportOrderCompatViolation,
            "monotonicity-without-up-closure" => Target::MonotonicityWithoutUpClosure,
            other => return Err(SearchError::UnknownProperty(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Target::UnionOfClosedsNotClosed => "union-of-closeds-not-closed",
            Target::Tts2Violation => "tts2-violation",
            Target::NonTopologicalConvergence => "non-topological-convergence",
            Target::SupportOrderCompatViolation => "support-order-compat-violation",
            Target::MonotonicityWithoutUpClosure => "monotonicity-without-up-closure",
        }
    }

    pub fn all_names() -> &'static [&'static str] {
        &[
            "union-of-closeds-not-closed",
            "tts2-violation",
            "non-topological-convergence",
            "support-order-compat-violation",
            "monotonicity-without-up-closure",
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchSpec {
    pub target: Target,
    pub carrier: usize,
    pub tokens: usize,
    pub samples: u64,
    pub seed: u64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub enum SearchOutcome {
    /// A witness, its revalidation note, and how many candidates were
    /// examined before it appeared.
    Witness { document: Document, revalidation: String, checked: u64 },
    Exhausted { checked: u64 },
}

/// Re-validates a found structure against the property through the module
/// checkers, returning the confirmation note.
fn revalidate(target: Target, structure: &document::Structure) -> Option<String> {
    match (target, structure) {
        (Target::UnionOfClosedsNotClosed, document::Structure::Tts(sigma)) => {
            if !sigma.check_axioms().passed() {
                return None;
            }
            let c = sigma.carrier();
            for a in Subset::all(c) {
                if !is_sigma_closed(sigma, a) {
                    continue;
                }
                for b in Subset::all(c) {
                    if is_sigma_closed(sigma, b) && !is_sigma_closed(sigma, a.union(b)) {
                        return Some(format!(
                            "axioms pass; {a} and {b} are closed but {} is not",
                            a.union(b)
                        ));
                    }
                }
            }
            None
        }
        (Target::Tts2Violation, document::Structure::Tts(sigma)) => {
            let report = sigma.check_axioms();
            let symmetric = report.outcome(AxiomId::Tts2).expect("always checked").passed();
            let rest_ok = report
                .checks
                .iter()
                .filter(|(id, _)| *id != AxiomId::Tts2)
                .all(|(_, c)| c.passed());
            (!symmetric && rest_ok).then(|| "asymmetric relation on an otherwise valid structure".into())
        }
        (Target::NonTopologicalConvergence, document::Structure::Convergence(lambda)) => {
            let axioms = ttslab_core::convergence::check_convergence_axioms(lambda);
            (axioms.passed() && !is_topological(lambda))
                .then(|| "axioms pass; structure differs from its induced topology's".into())
        }
        (Target::SupportOrderCompatViolation, document::Structure::Tts(sigma)) => {
            if !sigma.check_axioms().passed() {
                return None;
            }
            let report = check_second_association(sigma).ok()?;
            (!report.compatibility.compatible() && report.iff_holds).then(|| {
                format!(
                    "axioms pass; support-order compatibility fails ({})",
                    if report.compatibility.conver_up_closed.passed() {
                        "Cauchy condition"
                    } else {
                        "convergent-set up-closure"
                    }
                )
            })
        }
        (Target::MonotonicityWithoutUpClosure, document::Structure::Ttsr(ttsr)) => {
            let report = ttsr.check_axioms();
            let tts4_fails = !report.outcome(AxiomId::Tts4).expect("always checked").passed();
            let rest_ok = report
                .checks
                .iter()
                .filter(|(id, _)| *id != AxiomId::Tts4)
                .all(|(_, c)| c.passed());
            let mono = ttsr.refine_monotonicity();
            (tts4_fails && rest_ok && !mono.passed())
                .then(|| "every axiom except relation up-closure holds, yet a limit set is not up-closed".into())
        }
        _ => None,
    }
}

/// Deterministic candidate streams per target. Exhaustive mode walks the
/// enumerated universe in canonical order; random mode samples from the
/// seeded generator.
pub fn run_search(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    let mut rng = SplitMix64::new(spec.seed);
    let mut checked = 0u64;

    let emit = |structure: document::Structure, checked: u64| -> Option<SearchOutcome> {
        revalidate(spec.target, &structure).map(|revalidation| SearchOutcome::Witness {
            document: document::from_structure(&structure),
            revalidation,
            checked,
        })
    };

    match spec.target {
        Target::UnionOfClosedsNotClosed => {
            if spec.exhaustive {
                let carrier = spec.carrier.min(enumerate::TTS_CARRIER_CAP);
                let tokens = spec.tokens.min(enumerate::TTS_TOKEN_CAP);
                for sigma in enumerate::tts_structures(carrier, tokens)
                    .map_err(|e| SearchError::CapExceeded(e.to_string()))?
                {
                    checked += 1;
                    if let Some(hit) = emit(document::Structure::Tts(sigma), checked) {
                        return Ok(hit);
                    }
                }
            } else {
                for _ in 0..spec.samples {
                    checked += 1;
                    let carrier = 2 + rng.below(spec.carrier.saturating_sub(1).max(1));
                    let tokens = 1 + rng.below(spec.tokens.max(1));
                    let sigma = generate::random_tts(&mut rng, carrier.min(spec.carrier), tokens);
                    if let Some(hit) = emit(document::Structure::Tts(sigma), checked) {
                        return Ok(hit);
                    }
                }
            }
        }
        Target::Tts2Violation => {
            // the generator only produces symmetric relations, and the
            // enumeration filters on the axioms, so this always exhausts
            if spec.exhaustive {
                let carrier = spec.carrier.min(enumerate::TTS_CARRIER_CAP);
                let tokens = spec.tokens.min(enumerate::TTS_TOKEN_CAP);
                for sigma in enumerate::tts_structures(carrier, tokens)
                    .map_err(|e| SearchError::CapExceeded(e.to_string()))?
                {
                    checked += 1;
                    if let Some(hit) = emit(document::Structure::Tts(sigma), checked) {
                        return Ok(hit);
                    }
                }
            } else {
                for _ in 0..spec.samples {
                    checked += 1;
                    let tokens = 1 + rng.below(spec.tokens.max(1));
                    let sigma = generate::random_tts(&mut rng, spec.carrier.clamp(1, 3), tokens);
                    if let Some(hit) = emit(document::Structure::Tts(sigma), checked) {
                        return Ok(hit);
                    }
                }
            }
        }
        Target::NonTopologicalConvergence => {
            let n = spec.carrier.min(enumerate::CONVERGENCE_CAP);
            if spec.exhaustive {
                for lambda in enumerate::convergence_structures(n)
                    .map_err(|e| SearchError::CapExceeded(e.to_string()))?
                {
                    checked += 1;
                    if let Some(hit) = emit(document::Structure::Convergence(lambda), checked) {
                        return Ok(hit);
                    }
                }
            } else {
                for _ in 0..spec.samples {
                    checked += 1;
                    let lambda = generate::random_convergence(&mut rng, n);
                    if let Some(hit) = emit(document::Structure::Convergence(lambda), checked) {
                        return Ok(hit);
                    }
                }
            }
        }
        Target::SupportOrderCompatViolation => {
            if spec.exhaustive {
                let carrier = spec.carrier.min(enumerate::TTS_CARRIER_CAP);
                let tokens = spec.tokens.min(enumerate::TTS_TOKEN_CAP);
                for sigma in enumerate::tts_structures(carrier, tokens)
                    .map_err(|e| SearchError::CapExceeded(e.to_string()))?
                {
                    checked += 1;
                    if let Some(hit) = emit(document::Structure::Tts(sigma), checked) {
                        return Ok(hit);
                    }
                }
            } else {
                for _ in 0..spec.samples {
                    checked += 1;
                    let tokens = 1 + rng.below(spec.tokens.max(1));
                    let sigma = generate::random_tts(&mut rng, spec.carrier.clamp(1, 3), tokens);
                    if let Some(hit) = emit(document::Structure::Tts(sigma), checked) {
                        return Ok(hit);
                    }
                }
            }
        }
        Target::MonotonicityWithoutUpClosure => {
            // random only: take a valid ordered structure and knock single
            // relation pairs out until exactly the up-closure axiom breaks
            for _ in 0..spec.samples {
                checked += 1;
                let tokens = 2 + rng.below(spec.tokens.saturating_sub(1).max(1));
                let ttsr = generate::random_ttsr(&mut rng, spec.carrier.clamp(1, 3), tokens);
                let mut xi = ttsr.base().xi().clone();
                let pairs: Vec<(usize, usize)> = xi.pairs().collect();
                if pairs.is_empty() {
                    continue;
                }
                let (a, b) = pairs[rng.below(pairs.len())];
                xi.remove(a, b);
                xi.remove(b, a);
                let Ok(base) = Tts::new(ttsr.base().support().clone(), xi) else {
                    continue;
                };
                let Ok(candidate) = Ttsr::new(base, ttsr.leq().clone()) else {
                    continue;
                };
                if let Some(hit) = emit(document::Structure::Ttsr(candidate), checked) {
                    return Ok(hit);
                }
            }
        }
    }
    Ok(SearchOutcome::Exhausted { checked })
}
