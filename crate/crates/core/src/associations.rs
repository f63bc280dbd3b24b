//! Two constructions that attach a compatible pre-ordered token set to an
//! arbitrary structure: the power-set association (tokens become sets of
//! tokens, ordered by reverse inclusion) and the support order (tokens
//! compared through the families of subsets they are based in).

use serde::Serialize;

use crate::check::Check;
use crate::derived_topology::{check_compatibility, CompatibilityReport};
use crate::foundations::{BitSet, Rel, Subset};
use crate::tts::{AxiomReport, Tts, TtpAssignment, TtsError, Ttsr};

/// Token-count cap for the power-set association; the associated structure
/// has `2^tokens` tokens.
pub const POWER_TOKEN_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssociationError {
    #[error("power association over {tokens} tokens exceeds the cap {cap}")]
    TokenCapExceeded { tokens: usize, cap: usize },
    #[error("support fails its axioms: {0}")]
    SupportAxiomsFail(String),
    #[error(transparent)]
    Tts(#[from] TtsError),
}

/// The power-set association: tokens are all subsets of the base tokens
/// (the empty set included, taken verbatim), ordered by reverse inclusion;
/// a token set is based in `A` when it consists of base tokens based in `A`;
/// two token sets are Cauchy related when their union is a clique of the
/// base relation.
#[derive(Debug, Clone)]
pub struct PowerAssociation {
    pub result: Ttsr,
    /// The associated structure satisfies all structure axioms.
    pub axioms: AxiomReport,
    /// The associated structure is compatible with the reverse-inclusion
    /// order.
    pub compatibility: CompatibilityReport,
    /// Reverse inclusion is antisymmetric, so the order is in fact partial.
    pub antisymmetric: bool,
    /// The empty token-set is a clique vacuously, hence always Cauchy.
    pub empty_token_cauchy: bool,
    /// The empty token-set lies in every based set, so it converges to every
    /// point; recorded rather than silently excluded.
    pub empty_token_converges_everywhere: bool,
}

/// Builds the power-set association. Token sets are indexed by their mask
/// over the base tokens.
pub fn power_association(sigma: &Tts) -> Result<PowerAssociation, AssociationError> {
    let m = sigma.tokens();
    if m > POWER_TOKEN_CAP {
        return Err(AssociationError::TokenCapExceeded { tokens: m, cap: POWER_TOKEN_CAP });
    }
    let power = 1usize << m;
    let carrier = sigma.carrier();

    // cliques of the base relation, memoized per token-set mask
    let clique: Vec<bool> = (0..power)
        .map(|mask| {
            let members: Vec<usize> = (0..m).filter(|t| mask >> t & 1 == 1).collect();
            members.iter().all(|&a| members.iter().all(|&b| sigma.related(a, b)))
        })
        .collect();

    let table = Subset::all(carrier)
        .map(|a| {
            if a.is_empty() {
                return BitSet::new(power);
            }
            let base: u64 = sigma.support().of(a).iter().map(|t| 1u64 << t).sum();
            BitSet::from_iter(power, (0..power).filter(|&s| s as u64 & !base == 0))
        })
        .collect();
    let support = TtpAssignment::new(carrier, power, table)?;

    let mut xi = Rel::empty(power);
    for s1 in 0..power {
        for s2 in 0..power {
            if clique[s1 | s2] {
                xi.insert(s1, s2);
            }
        }
    }

    // reverse inclusion: s1 ≤ s2 iff s2 ⊆ s1
    let mut leq = Rel::empty(power);
    for s1 in 0..power {
        for s2 in 0..power {
            if s2 & !s1 == 0 {
                leq.insert(s1, s2);
            }
        }
    }
    let antisymmetric = (0..power)
        .all(|a| (0..power).all(|b| !(leq.contains(a, b) && leq.contains(b, a)) || a == b));

    let tts = Tts::new(support, xi)?;
    let compatibility = check_compatibility(&tts, &leq);
    let result = Ttsr::new(tts, leq)?;
    let axioms = result.check_axioms();

    let empty_token_cauchy = result.base().related(0, 0);
    let empty_token_converges_everywhere = carrier
        .elements()
        .all(|x| result.base().convergent_to(x).expect("in range").contains(0));

    Ok(PowerAssociation {
        result,
        axioms,
        compatibility,
        antisymmetric,
        empty_token_cauchy,
        empty_token_converges_everywhere,
    })
}

/// Witness for a failed intersection criterion: the token lies in the images
/// of both sets but not in the image of their intersection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionWitness {
    pub a: Subset,
    pub b: Subset,
    pub token: usize,
}

impl std::fmt::Display for IntersectionWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "token {} in T({}) ∩ T({}) but not in T of the intersection",
            self.token, self.a, self.b
        )
    }
}

/// Witness for a token whose based-in family is not a filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NotAFilterWitness {
    pub token: usize,
    pub a: Subset,
    pub b: Subset,
}

impl std::fmt::Display for NotAFilterWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "family of token {} holds {} and {} but not their intersection",
            self.token, self.a, self.b
        )
    }
}

/// The support order on tokens: `x' ≤ y'` when every nonempty subset that
/// `x'` is based in, `y'` is based in too.
#[derive(Debug, Clone, Serialize)]
pub struct SupportOrder {
    /// Per token, the family of nonempty subsets the token is based in,
    /// encoded by subset mask.
    pub families: Vec<BitSet>,
    /// No family contains the empty set (structural) and none is empty
    /// (every token is based in the full carrier).
    pub families_proper: Check<usize>,
    /// Families are up-closed under superset.
    pub families_up_closed: Check<(usize, Subset, Subset)>,
    /// The pre-order itself.
    pub leq: Rel,
    pub leq_reflexive: bool,
    pub leq_transitive: bool,
    /// `T(A) ∩ T(B) ⊆ T(A ∩ B)` over all nonempty `A`, `B` (for disjoint
    /// pairs this demands an empty intersection of images, since the empty
    /// set is based nowhere).
    pub intersection_criterion: Check<IntersectionWitness>,
    /// Direct check that every family is a filter: nonempty, upward closed,
    /// closed under intersections, empty set excluded.
    pub all_families_filters: Check<NotAFilterWitness>,
    /// The two previous checks must agree; the equivalence is a theorem.
    pub criterion_matches_filters: bool,
}

impl SupportOrder {
    pub fn passed(&self) -> bool {
        self.families_proper.passed()
            && self.families_up_closed.passed()
            && self.leq_reflexive
            && self.leq_transitive
            && self.criterion_matches_filters
    }
}

/// Computes the support order of a localization map. The map must satisfy
/// its two axioms (nonempty monotone, full image on the carrier).
pub fn support_order(support: &TtpAssignment) -> Result<SupportOrder, AssociationError> {
    // validate the localization axioms through a throwaway total structure
    let probe = Tts::new(support.clone(), Rel::full(support.tokens()))?;
    let report = probe.check_axioms();
    for id in [crate::tts::AxiomId::Ttp1, crate::tts::AxiomId::Ttp2] {
        if let Some(w) = report.outcome(id).and_then(|c| c.witness()) {
            return Err(AssociationError::SupportAxiomsFail(format!("{id}: {w}")));
        }
    }

    let carrier = support.carrier();
    let subset_count = carrier.subset_count();
    let m = support.tokens();
    let families: Vec<BitSet> = (0..m)
        .map(|t| {
            BitSet::from_iter(
                subset_count,
                Subset::all_nonempty(carrier)
                    .filter(|a| support.of(*a).contains(t))
                    .map(|a| a.mask() as usize),
            )
        })
        .collect();

    let families_proper =
        Check::from_witness((0..m).find(|&t| families[t].contains(0) || families[t].is_empty()));

    let mut families_up_closed = Check::Pass;
    'up: for (t, family) in families.iter().enumerate() {
        for a_mask in family.iter() {
            let a = Subset::from_mask(carrier, a_mask as u32);
            for b in Subset::all_nonempty(carrier) {
                if a.is_subset_of(b) && !family.contains(b.mask() as usize) {
                    families_up_closed = Check::Fail((t, a, b));
                    break 'up;
                }
            }
        }
    }

    let mut leq = Rel::empty(m);
    for x in 0..m {
        for y in 0..m {
            if families[x].is_subset_of(&families[y]) {
                leq.insert(x, y);
            }
        }
    }
    let leq_reflexive = leq.is_reflexive();
    let leq_transitive = leq.is_transitive();

    let mut intersection_criterion = Check::Pass;
    'crit: for a in Subset::all_nonempty(carrier) {
        for b in Subset::all_nonempty(carrier) {
            let both = support.of(a).inter(support.of(b));
            let of_inter = support.of(a.inter(b));
            if !both.is_subset_of(of_inter) {
                let token = both.minus(of_inter).first().expect("nonempty difference");
                intersection_criterion = Check::Fail(IntersectionWitness { a, b, token });
                break 'crit;
            }
        }
    }

    let mut all_families_filters = Check::Pass;
    'filt: for (t, family) in families.iter().enumerate() {
        // up-closure and properness hold by construction; intersection
        // closure is the live condition
        for a_mask in family.iter() {
            let a = Subset::from_mask(carrier, a_mask as u32);
            for b_mask in family.iter() {
                let b = Subset::from_mask(carrier, b_mask as u32);
                let inter = a.inter(b);
                if inter.is_empty() || !family.contains(inter.mask() as usize) {
                    all_families_filters = Check::Fail(NotAFilterWitness { token: t, a, b });
                    break 'filt;
                }
            }
        }
    }

    let criterion_matches_filters =
        intersection_criterion.passed() == all_families_filters.passed();

    Ok(SupportOrder {
        families,
        families_proper,
        families_up_closed,
        leq,
        leq_reflexive,
        leq_transitive,
        intersection_criterion,
        all_families_filters,
        criterion_matches_filters,
    })
}

/// Report for attaching the support order to a structure: compatibility of
/// the pair holds exactly when the convergent-set and Cauchy-set up-closure
/// conditions hold, because the localization up-closure is automatic under
/// the support order. Both directions are evaluated from independently
/// computed sides.
#[derive(Debug, Clone, Serialize)]
pub struct SecondAssociationReport {
    pub support: SupportOrder,
    pub compatibility: CompatibilityReport,
    /// The localization map is up-closed under the support order, with no
    /// hypothesis; re-checked on its own.
    pub t_up_closed_automatic: bool,
    /// compatible ⇔ (convergent sets up-closed ∧ Cauchy condition).
    pub iff_holds: bool,
}

pub fn check_second_association(sigma: &Tts) -> Result<SecondAssociationReport, AssociationError> {
    let support = support_order(sigma.support())?;
    let compatibility = check_compatibility(sigma, &support.leq);
    let t_up_closed_automatic = compatibility.t_up_closed.passed();
    let rhs = compatibility.conver_up_closed.passed() && compatibility.cauchy_up_closed.passed();
    let iff_holds = compatibility.compatible() == rhs;
    Ok(SecondAssociationReport { support, compatibility, t_up_closed_automatic, iff_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::Carrier;

    fn carrier(n: usize) -> Carrier {
        Carrier::new(n).unwrap()
    }

    fn assignment(n: usize, tokens: usize, rows: &[&[usize]]) -> TtpAssignment {
        let table = rows.iter().map(|r| BitSet::from_iter(tokens, r.iter().copied())).collect();
        TtpAssignment::new(carrier(n), tokens, table).unwrap()
    }

    #[test]
    fn power_association_sizes() {
        let t = assignment(2, 2, &[&[], &[0], &[1], &[0, 1]]);
        let sigma = Tts::new(t, Rel::identity(2)).unwrap();
        let assoc = power_association(&sigma).unwrap();
        assert_eq!(assoc.result.tokens(), 4);
        // |T_P({0})| = 2^|T({0})| = 2 (the empty token-set and {token 0})
        assert_eq!(assoc.result.base().support().of_point(0).count(), 2);
        assert!(assoc.axioms.passed());
        assert!(assoc.compatibility.compatible());
        assert!(assoc.antisymmetric);
    }

    #[test]
    fn empty_token_set_is_always_cauchy() {
        let t = assignment(2, 2, &[&[], &[0], &[1], &[0, 1]]);
        let sigma = Tts::new(t, Rel::identity(2)).unwrap();
        let assoc = power_association(&sigma).unwrap();
        assert!(assoc.empty_token_cauchy);
        assert!(assoc.empty_token_converges_everywhere);
    }

    #[test]
    fn singleton_token_sets_relate_like_their_tokens() {
        // tokens {0, 1}, both based only through T(E); token 0 self-related
        let t = assignment(2, 2, &[&[], &[0], &[0], &[0, 1]]);
        let xi = Rel::from_pairs(2, [(0, 0)]);
        let sigma = Tts::new(t, xi).unwrap();
        assert!(sigma.check_axioms().passed());
        let assoc = power_association(&sigma).unwrap();
        let xi_p = assoc.result.base().xi();
        // {token0} = mask 1, {token1} = mask 2
        assert!(xi_p.contains(1, 1));
        assert!(!xi_p.contains(2, 2));
        // (∅, S) related iff S is a clique
        assert!(xi_p.contains(0, 0));
        assert!(xi_p.contains(0, 1));
        assert!(!xi_p.contains(0, 2));
    }

    #[test]
    fn power_association_cap() {
        let c = carrier(1);
        let tokens = POWER_TOKEN_CAP + 1;
        let table = vec![BitSet::new(tokens), BitSet::full(tokens)];
        let t = TtpAssignment::new(c, tokens, table).unwrap();
        let sigma = Tts::new(t, Rel::full(tokens)).unwrap();
        assert!(matches!(power_association(&sigma), Err(AssociationError::TokenCapExceeded { .. })));
    }

    #[test]
    fn support_order_of_the_standard_filter_support() {
        // the family of filter-token t is the filter itself, so all families
        // are filters and the order is "is refined by"
        let c = carrier(3);
        let support = TtpAssignment::standard_filter_support(c);
        let so = support_order(&support).unwrap();
        assert!(so.passed());
        assert!(so.intersection_criterion.passed());
        assert!(so.all_families_filters.passed());
        let refinement = crate::convergence::refinement_order(c);
        assert_eq!(so.leq, refinement);
    }

    #[test]
    fn constant_full_support_gives_total_order() {
        let t = assignment(2, 2, &[&[], &[0, 1], &[0, 1], &[0, 1]]);
        let so = support_order(&t).unwrap();
        // every token based in every nonempty subset: the order is total,
        // and the families contain the disjoint singletons {0}, {1} without
        // their empty intersection, so they are not filters
        assert!(so.leq.contains(0, 1) && so.leq.contains(1, 0));
        assert!(!so.all_families_filters.passed());
        assert!(!so.intersection_criterion.passed());
        assert!(so.criterion_matches_filters);
    }

    #[test]
    fn intersection_criterion_fails_on_overlapping_pair() {
        // carrier {0,1,2}; token 3 based in {0,1} and {1,2} but not in their
        // intersection {1}; images of disjoint sets kept disjoint so the
        // failure genuinely needs the overlapping pair
        let t = assignment(
            3,
            4,
            &[
                &[],           // ∅
                &[0],          // {0}
                &[1],          // {1}
                &[0, 1, 3],    // {0,1}
                &[2],          // {2}
                &[0, 2],       // {0,2}
                &[1, 2, 3],    // {1,2}
                &[0, 1, 2, 3], // E
            ],
        );
        let so = support_order(&t).unwrap();
        let w = so.intersection_criterion.witness().expect("criterion must fail");
        assert_eq!(w.token, 3);
        assert_eq!((w.a.mask(), w.b.mask()), (3, 6));
        assert!(!so.all_families_filters.passed());
        assert!(so.criterion_matches_filters);
    }

    #[test]
    fn second_association_iff_on_small_instances() {
        let t = assignment(2, 2, &[&[], &[0], &[1], &[0, 1]]);
        let sigma = Tts::new(t, Rel::full(2)).unwrap();
        let report = check_second_association(&sigma).unwrap();
        assert!(report.t_up_closed_automatic);
        assert!(report.iff_holds);
        assert!(report.compatibility.compatible());
    }

    #[test]
    fn second_association_detects_conver_up_closure_failure() {
        // tokens {a=0, b=1, c=2}: T({0}) = {a}, T({1}) = {b}, T(E) = all;
        // Ξ = diagonal plus (a, c) both ways. Then c converges to 0, c ≤ b
        // under the support order (c is based only in E), but b does not
        // converge to 0.
        let t = assignment(2, 3, &[&[], &[0], &[1], &[0, 1, 2]]);
        let xi = Rel::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 2), (2, 0)]);
        let sigma = Tts::new(t, xi).unwrap();
        assert!(sigma.check_axioms().passed());
        let report = check_second_association(&sigma).unwrap();
        assert!(report.support.leq.contains(2, 1));
        assert!(!report.compatibility.conver_up_closed.passed());
        assert!(!report.compatibility.compatible());
        assert!(report.iff_holds);
        assert!(report.t_up_closed_automatic);
    }

    #[test]
    fn single_token_support_is_trivially_fine() {
        let t = assignment(2, 1, &[&[], &[0], &[0], &[0]]);
        let sigma = Tts::new(t, Rel::full(1)).unwrap();
        let report = check_second_association(&sigma).unwrap();
        assert!(report.iff_holds);
        assert!(report.compatibility.compatible());
    }
}
