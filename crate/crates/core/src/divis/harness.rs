//! Evaluates structural theorems on concrete instances.
//!
//! Each selector turns an algebra (or a subalgebra pair) into an
//! [`InstanceReport`]: hypotheses and conclusion are computed, never
//! assumed, and the verdict says whether the instance confirms the
//! statement, satisfies it vacuously, contradicts it, or lies outside the
//! decidable classes.

use rayon::prelude::*;
use serde::Serialize;

use super::{
    a_closed_check, a_extension_check, divisible_hull, epicompletion, is_divisible, match_hulls,
    via_chang,
};
use crate::algebra::Algebra;
use crate::error::{MvError, Result};
use crate::ideals::{
    coset_sum_members, enumerate_ideals, primes_and_minimal_primes, quotient, summand_decomposition,
};
use crate::morphisms::{bounded_epi_oracle, chain_inclusion_epi, EpiEvidence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Selector {
    /// An a-extension M₂ ⊇ M₁ with M₁ + I = M₂ for every minimal prime I
    /// is trivial.
    SubalgebraCollapse,
    /// M is divisible iff M/P is divisible for every minimal prime P.
    DivisibleViaMinimalPrimes,
    /// If M/P is a-closed for every minimal prime P, then M is a-closed.
    AClosedViaMinimalPrimes,
    /// Quotients of an a-closed algebra by summand ideals are a-closed.
    SummandQuotients,
    /// M is epicomplete iff every epimorphism of M into a chain is onto.
    EpisIntoChains,
    /// Epicompletions are unique up to isomorphism.
    EpicompletionUniqueness,
}

impl Selector {
    pub const ALL: [Selector; 6] = [
        Selector::SubalgebraCollapse,
        Selector::DivisibleViaMinimalPrimes,
        Selector::AClosedViaMinimalPrimes,
        Selector::SummandQuotients,
        Selector::EpisIntoChains,
        Selector::EpicompletionUniqueness,
    ];

    /// The command-line name of the selector.
    pub fn label(self) -> &'static str {
        match self {
            Selector::SubalgebraCollapse => "2.3",
            Selector::DivisibleViaMinimalPrimes => "2.3.1",
            Selector::AClosedViaMinimalPrimes => "2.5",
            Selector::SummandQuotients => "2.7",
            Selector::EpisIntoChains => "2.12",
            Selector::EpicompletionUniqueness => "4.2",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Selector::SubalgebraCollapse => {
                "if M2 is an a-extension of M1 and M1 + I = M2 for all minimal primes I, then M1 = M2"
            }
            Selector::DivisibleViaMinimalPrimes => "M is divisible iff M/P is divisible for each minimal prime P",
            Selector::AClosedViaMinimalPrimes => "if M/P is a-closed for each minimal prime P, then M is a-closed",
            Selector::SummandQuotients => "if M is a-closed and I is a summand ideal, then M/I is a-closed",
            Selector::EpisIntoChains => "M is epicomplete iff every epimorphism of M into a chain is onto",
            Selector::EpicompletionUniqueness => "two epicompletions of M are isomorphic over M",
        }
    }

    pub fn parse(s: &str) -> Result<Selector> {
        Selector::ALL
            .into_iter()
            .find(|t| t.label() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Selector::ALL.iter().map(|t| t.label()).collect();
                MvError::InvalidParameter(format!(
                    "unknown theorem '{s}', expected one of {}",
                    known.join(", ")
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Hypotheses hold and so does the conclusion.
    Consistent,
    /// Some hypothesis fails (or quantifies over nothing).
    Vacuous,
    Counterexample,
    /// A hypothesis or the conclusion is outside the decidable classes.
    Unsupported,
}

/// One evaluated proposition; `value` is `None` when undecided.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Option<bool>,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, value: Option<bool>, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            value,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub instance: String,
    pub hypotheses: Vec<Check>,
    pub conclusion: Check,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl InstanceReport {
    fn implication(
        instance: String,
        hypotheses: Vec<Check>,
        conclusion: Check,
        notes: Vec<String>,
    ) -> Self {
        let verdict = if hypotheses.iter().any(|h| h.value == Some(false)) {
            Verdict::Vacuous
        } else if hypotheses.iter().any(|h| h.value.is_none()) {
            Verdict::Unsupported
        } else {
            match conclusion.value {
                Some(true) => Verdict::Consistent,
                Some(false) => Verdict::Counterexample,
                None => Verdict::Unsupported,
            }
        };
        InstanceReport {
            instance,
            hypotheses,
            conclusion,
            verdict,
            notes,
        }
    }

    /// Both sides are recorded as hypotheses; the conclusion is their
    /// agreement.
    fn biconditional(
        instance: String,
        lhs: Check,
        rhs: Check,
        vacuous: bool,
        notes: Vec<String>,
    ) -> Self {
        let agree = match (lhs.value, rhs.value) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        };
        let conclusion = Check::new(
            "both sides agree",
            agree,
            format!("{} iff {}", lhs.name, rhs.name),
        );
        let verdict = match agree {
            None => Verdict::Unsupported,
            Some(false) => Verdict::Counterexample,
            Some(true) if vacuous => Verdict::Vacuous,
            Some(true) => Verdict::Consistent,
        };
        InstanceReport {
            instance,
            hypotheses: vec![lhs, rhs],
            conclusion,
            verdict,
            notes,
        }
    }

    fn failed(instance: String, err: MvError) -> Self {
        let verdict = match err {
            MvError::CriterionMismatch(_) | MvError::UniquenessViolation { .. } => {
                Verdict::Counterexample
            }
            _ => Verdict::Unsupported,
        };
        InstanceReport {
            instance,
            hypotheses: Vec::new(),
            conclusion: Check::new("evaluation", None, err.to_string()),
            verdict,
            notes: vec![err.to_string()],
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Tally {
    pub consistent: usize,
    pub vacuous: usize,
    pub counterexample: usize,
    pub unsupported: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub selector: Selector,
    pub theorem: &'static str,
    pub statement: &'static str,
    pub instances: Vec<InstanceReport>,
    pub tally: Tally,
}

impl HarnessReport {
    pub fn has_counterexample(&self) -> bool {
        self.tally.counterexample > 0
    }
}

/// Runs one selector over the catalog (plus ℚ ∩ [0,1] where it is decidable),
/// evaluating algebras in parallel and reporting in catalog order.
pub fn run(selector: Selector, catalog: &[Algebra]) -> Result<HarnessReport> {
    let mut subjects: Vec<Algebra> = catalog.to_vec();
    if matches!(
        selector,
        Selector::DivisibleViaMinimalPrimes
            | Selector::AClosedViaMinimalPrimes
            | Selector::EpisIntoChains
    ) {
        subjects.push(Algebra::rational_chain());
    }
    let per_algebra: Vec<Vec<InstanceReport>> = subjects
        .par_iter()
        .map(|a| {
            let result = match selector {
                Selector::SubalgebraCollapse => subalgebra_collapse(a),
                Selector::DivisibleViaMinimalPrimes => {
                    divisible_via_minimal_primes(a).map(|r| vec![r])
                }
                Selector::AClosedViaMinimalPrimes => {
                    a_closed_via_minimal_primes(a).map(|r| vec![r])
                }
                Selector::SummandQuotients => summand_quotients(a),
                Selector::EpisIntoChains => epis_into_chains(a, catalog).map(|r| vec![r]),
                Selector::EpicompletionUniqueness => epicompletion_uniqueness(a).map(|r| vec![r]),
            };
            result.unwrap_or_else(|e| vec![InstanceReport::failed(a.name().to_string(), e)])
        })
        .collect();
    let instances: Vec<InstanceReport> = per_algebra.into_iter().flatten().collect();
    let mut tally = Tally::default();
    for r in &instances {
        match r.verdict {
            Verdict::Consistent => tally.consistent += 1,
            Verdict::Vacuous => tally.vacuous += 1,
            Verdict::Counterexample => tally.counterexample += 1,
            Verdict::Unsupported => tally.unsupported += 1,
        }
    }
    Ok(HarnessReport {
        selector,
        theorem: selector.label(),
        statement: selector.statement(),
        instances,
        tally,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Subalgebras generated by at most two elements, each once.
fn small_subalgebras(m2: &Algebra) -> Result<Vec<crate::morphisms::Hom>> {
    let elems = m2.elements()?;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut gens: Vec<Vec<crate::algebra::Element>> = vec![Vec::new()];
    for (i, x) in elems.iter().enumerate() {
        gens.push(vec![x.clone()]);
        for y in &elems[i + 1..] {
            gens.push(vec![x.clone(), y.clone()]);
        }
    }
    for g in gens {
        let (_, inc) = crate::algebra::generate_subalgebra(m2, &g)?;
        if seen.insert(inc.image_indices()) {
            out.push(inc);
        }
    }
    Ok(out)
}

fn subalgebra_collapse(m2: &Algebra) -> Result<Vec<InstanceReport>> {
    let minimal = primes_and_minimal_primes(m2)?.minimal;
    let mut out = Vec::new();
    for inc in small_subalgebras(m2)? {
        let members: Vec<String> = inc
            .image_indices()
            .into_iter()
            .map(|i| m2.format(&m2.element(i).expect("in range")))
            .collect();
        let instance = format!("{} over {{{}}}", m2.name(), members.join(", "));
        let aext = a_extension_check(&inc, 1)?;
        let mut short = None;
        for p in &minimal {
            let sum = coset_sum_members(&inc, p)?;
            if sum.len() != m2.size().unwrap() {
                short = Some(format!(
                    "M1 + {} has {} elements",
                    p.describe(m2),
                    sum.len()
                ));
                break;
            }
        }
        let hyps = vec![
            Check::new(
                "a-extension",
                Some(aext.holds()),
                format!("{:?}", aext.verdict),
            ),
            Check::new(
                "M1 + I = M2 for every minimal prime I",
                Some(short.is_none()),
                short.unwrap_or_else(|| format!("{} minimal primes checked", minimal.len())),
            ),
        ];
        let equal = inc.is_surjective()?;
        let conclusion = Check::new(
            "M1 = M2",
            Some(equal),
            format!("{} of {} elements", members.len(), m2.size().unwrap()),
        );
        out.push(InstanceReport::implication(
            instance,
            hyps,
            conclusion,
            Vec::new(),
        ));
    }
    Ok(out)
}

/// Minimal primes of `a`, with ℚ ∩ [0,1] handled as a simple algebra.
enum MinimalQuotients {
    Finite(Vec<Algebra>),
    /// The algebra is simple: its only minimal prime is {0}.
    Simple,
}

fn minimal_quotients(a: &Algebra) -> Result<MinimalQuotients> {
    if a.is_finite() {
        let mut out = Vec::new();
        for p in primes_and_minimal_primes(a)?.minimal {
            out.push(quotient(a, &p)?.0);
        }
        Ok(MinimalQuotients::Finite(out))
    } else if a.is_symbolic_chain() {
        Ok(MinimalQuotients::Simple)
    } else {
        Err(MvError::UnsupportedInstance(format!(
            "minimal primes of {}",
            a.name()
        )))
    }
}

fn divisible_via_minimal_primes(a: &Algebra) -> Result<InstanceReport> {
    let lhs_value = is_divisible(a)?.is_divisible();
    let lhs = Check::new("M divisible", Some(lhs_value), yes_no(lhs_value));
    let (rhs, vacuous) = match minimal_quotients(a)? {
        MinimalQuotients::Finite(qs) => {
            let mut all = true;
            let mut parts = Vec::new();
            for q in &qs {
                let d = is_divisible(q)?.is_divisible();
                all &= d;
                parts.push(format!("{} elements: {}", q.size().unwrap(), yes_no(d)));
            }
            let detail = if qs.is_empty() {
                "no minimal primes".to_string()
            } else {
                parts.join("; ")
            };
            (
                Check::new("every M/P divisible", Some(all), detail),
                qs.is_empty(),
            )
        }
        MinimalQuotients::Simple => (
            Check::new(
                "every M/P divisible",
                Some(lhs_value),
                "simple: M/{0} is M itself",
            ),
            false,
        ),
    };
    Ok(InstanceReport::biconditional(
        a.name().to_string(),
        lhs,
        rhs,
        vacuous,
        Vec::new(),
    ))
}

fn a_closed_via_minimal_primes(a: &Algebra) -> Result<InstanceReport> {
    let hyp = match minimal_quotients(a)? {
        MinimalQuotients::Finite(qs) => {
            let mut value = Some(true);
            let mut parts = Vec::new();
            for q in &qs {
                let v = a_closed_check(q)?;
                parts.push(format!("{} elements: {}", q.size().unwrap(), v.label()));
                value = match (value, v.decided()) {
                    (Some(false), _) | (_, Some(false)) => Some(false),
                    (None, _) | (_, None) => None,
                    _ => Some(true),
                };
            }
            let detail = if qs.is_empty() {
                "no minimal primes".to_string()
            } else {
                parts.join("; ")
            };
            Check::new("every M/P a-closed", value, detail)
        }
        MinimalQuotients::Simple => {
            let v = a_closed_check(a)?;
            Check::new(
                "every M/P a-closed",
                v.decided(),
                format!("simple: M/{{0}} is M, {}", v.label()),
            )
        }
    };
    let c = a_closed_check(a)?;
    let conclusion = Check::new("M a-closed", c.decided(), c.label());
    Ok(InstanceReport::implication(
        a.name().to_string(),
        vec![hyp],
        conclusion,
        Vec::new(),
    ))
}

fn summand_quotients(a: &Algebra) -> Result<Vec<InstanceReport>> {
    let closed = a_closed_check(a)?;
    let mut out = Vec::new();
    for i in enumerate_ideals(a)?.ideals {
        if summand_decomposition(a, &i)?.is_none() {
            continue;
        }
        let instance = format!("{} / {}", a.name(), i.describe(a));
        let hyps = vec![
            Check::new("M a-closed", closed.decided(), closed.label()),
            Check::new("I summand", Some(true), "certified decomposition"),
        ];
        let (q, _) = quotient(a, &i)?;
        let c = a_closed_check(&q)?;
        let conclusion = Check::new("M/I a-closed", c.decided(), c.label());
        out.push(InstanceReport::implication(
            instance,
            hyps,
            conclusion,
            Vec::new(),
        ));
    }
    Ok(out)
}

const FAMILY_GAP: &str = "the right-hand side is checked only on the certified epimorphism family \
(minimal-prime projections followed by hull embeddings, and chain inclusions), not on all epimorphisms";

fn epis_into_chains(a: &Algebra, catalog: &[Algebra]) -> Result<InstanceReport> {
    let divisible = is_divisible(a)?.is_divisible();
    let lhs = Check::new(
        "M epicomplete",
        Some(divisible),
        if divisible {
            "divisible, hence epicomplete"
        } else {
            "not divisible, hence not epicomplete"
        },
    );
    let mut notes = vec![FAMILY_GAP.to_string()];
    let mut refutation: Option<String> = None;
    if a.is_finite() && a.size() != Some(1) {
        let minimal = primes_and_minimal_primes(a)?.minimal;
        if let Some(p) = minimal.first() {
            let (q, proj) = quotient(a, p)?;
            let h = divisible_hull(&q)?;
            if let Some(emb) = h.embedding() {
                let f = proj.then(emb)?;
                let proj_epi =
                    matches!(bounded_epi_oracle(&proj, 2)?, EpiEvidence::EpiCertified(_));
                let emb_epi = matches!(bounded_epi_oracle(emb, 2)?, EpiEvidence::EpiCertified(_));
                if proj_epi && emb_epi && !f.is_surjective()? {
                    refutation = Some(format!(
                        "M -> M/P -> {} is an epimorphism into a chain and is not onto",
                        h.hull().name()
                    ));
                }
            }
        }
        if let crate::algebra::Kind::Chain { n } = a.kind() {
            for target in catalog {
                if let crate::algebra::Kind::Chain { n: m } = target.kind() {
                    if *m > *n && *m % *n == 0 {
                        if let EpiEvidence::EpiCertified(_) = chain_inclusion_epi(*n, *m, 4)? {
                            notes.push(format!(
                                "{} -> {} is a non-surjective epimorphism",
                                a.name(),
                                target.name()
                            ));
                        }
                    }
                }
            }
        }
    }
    let rhs = match (&refutation, a.size()) {
        (Some(r), _) => Check::new("every epi into a chain is onto", Some(false), r.clone()),
        (None, Some(1)) => Check::new(
            "every epi into a chain is onto",
            Some(true),
            "the only algebra receiving a map from the one-element algebra is itself",
        ),
        (None, _) if divisible => Check::new(
            "every epi into a chain is onto",
            Some(true),
            "no non-surjective member of the certified family",
        ),
        (None, _) => Check::new(
            "every epi into a chain is onto",
            None,
            "no refuting epimorphism found",
        ),
    };
    Ok(InstanceReport::biconditional(
        a.name().to_string(),
        lhs,
        rhs,
        false,
        notes,
    ))
}

fn epicompletion_uniqueness(a: &Algebra) -> Result<InstanceReport> {
    let e = epicompletion(a)?;
    let hyp = Check::new(
        "M has an epicompletion",
        Some(e.all_certified()),
        format!("{} with certificates", e.hull.describe()),
    );
    let chang = via_chang(a)?;
    let iso = match_hulls(&chang, &e.hull)?;
    let conclusion = Check::new(
        "hulls isomorphic over M",
        Some(iso.is_some()),
        match &iso {
            Some(m) => format!(
                "coordinate matching {:?}, {} probes",
                m.permutation, m.probes_checked
            ),
            None => "no matching found".to_string(),
        },
    );
    Ok(InstanceReport::implication(
        a.name().to_string(),
        vec![hyp],
        conclusion,
        vec![format!(
            "compared the Chang-group route with the {:?} route",
            e.hull.route()
        )],
    ))
}
