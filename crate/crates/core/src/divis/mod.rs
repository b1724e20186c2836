//! Divisibility, divisible hulls, a-extensions, a-closedness and
//! epicompletions.
//!
//! An algebra is divisible when for every `a` and `n ≥ 1` there is `x` with
//! `n.x = a` and `a′ ⊕ (n−1).x = x′`; such an `x` is unique. Finite
//! algebras are decided exhaustively; ℚ ∩ [0,1], Γ(ℚᵏ, u) and products of
//! divisible algebras are divisible by construction.

pub mod harness;
mod hull;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{classify, Algebra, Certificate, Element, Kind, ScalarMode, Value};
use crate::error::{MvError, Result};
use crate::ideals::{enumerate_ideals, ideal_from_members};
use crate::lgroup::{Coord, Group, GroupElement};
use crate::morphisms::{find_isomorphism, Hom};
use crate::rational::{self, Rational};

pub use hull::{
    divisible_hull, farey, match_hulls, via_chang, HullHandle, HullIsomorphism, HullRoute,
    DEFAULT_PROBE_DENOMINATOR, PROBE_CAP,
};

/// `x` with `n.x = a` and `a′ ⊕ (n−1).x = x′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivWitness {
    pub a: Element,
    pub n: u64,
    pub x: Element,
}

impl DivWitness {
    /// Re-evaluates both defining equations.
    pub fn replay(&self, alg: &Algebra) -> Result<bool> {
        solves(alg, &self.a, self.n, &self.x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivOutcome {
    Witness(DivWitness),
    NoSolution,
}

impl DivOutcome {
    pub fn witness(&self) -> Option<&DivWitness> {
        match self {
            DivOutcome::Witness(w) => Some(w),
            DivOutcome::NoSolution => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisibility {
    Divisible(Certificate),
    /// No `x` solves the equations for this `a` and `n`.
    NotDivisible {
        a: Element,
        n: u64,
    },
}

impl Divisibility {
    pub fn is_divisible(&self) -> bool {
        matches!(self, Divisibility::Divisible(_))
    }
}

fn solves(alg: &Algebra, a: &Element, n: u64, x: &Element) -> Result<bool> {
    let nx = alg.nat_scalar(n, x, ScalarMode::Sum)?;
    if nx != *a {
        return Ok(false);
    }
    let rest = alg.nat_scalar(n - 1, x, ScalarMode::Sum)?;
    Ok(alg.oplus(&alg.neg(a)?, &rest)? == alg.neg(x)?)
}

/// Solves `n.x = target`, `target′ ⊕ (n−1).x = x′`.
///
/// On finite carriers every candidate is tried and a second solution is an
/// error; on ℚ ∩ [0,1] and Γ(ℚᵏ, u) the answer is `target / n`.
pub fn div_solve(a: &Algebra, target: &Element, n: u64) -> Result<DivOutcome> {
    if n == 0 {
        return Err(MvError::InvalidParameter(
            "divisor must be at least 1".into(),
        ));
    }
    a.check(target)?;
    let found = if a.is_finite() {
        let mut hits = Vec::new();
        for x in a.elements()? {
            if solves(a, target, n, &x)? {
                hits.push(x);
            }
        }
        if hits.len() > 1 {
            return Err(MvError::UniquenessViolation {
                a: a.format(target),
                n,
            });
        }
        hits.pop()
    } else {
        match symbolic_quotient(a, target.value(), n)? {
            Some(v) => Some(a.wrap(v)?),
            None => None,
        }
    };
    Ok(match found {
        Some(x) => {
            if !solves(a, target, n, &x)? {
                return Err(MvError::CriterionMismatch(format!(
                    "{} / {n} = {} fails the defining equations",
                    a.format(target),
                    a.format(&x)
                )));
            }
            DivOutcome::Witness(DivWitness {
                a: target.clone(),
                n,
                x,
            })
        }
        None => DivOutcome::NoSolution,
    })
}

/// `v / n` in a symbolic algebra, or `None` when a finite factor has no
/// solution.
fn symbolic_quotient(a: &Algebra, v: &Value, n: u64) -> Result<Option<Value>> {
    let nn = Rational::from_integer(BigInt::from(n));
    match (a.kind(), v) {
        (Kind::RationalChain, Value::Rational(q)) => Ok(Some(Value::Rational(q / nn))),
        (Kind::Gamma(g), Value::Group(GroupElement::Vector(x))) if dense_gamma(a) => {
            let _ = g;
            Ok(Some(Value::Group(GroupElement::Vector(
                x.iter().map(|c| c / &nn).collect(),
            ))))
        }
        (Kind::Product { factors, .. }, Value::Tuple(xs)) => {
            let mut out = Vec::new();
            for (f, x) in factors.iter().zip(xs) {
                let part = if f.is_finite() {
                    match div_solve(f, &f.wrap(x.clone())?, n)? {
                        DivOutcome::Witness(w) => Some(w.x.value().clone()),
                        DivOutcome::NoSolution => None,
                    }
                } else {
                    symbolic_quotient(f, x, n)?
                };
                match part {
                    Some(p) => out.push(p),
                    None => return Ok(None),
                }
            }
            Ok(Some(Value::Tuple(out)))
        }
        _ => Err(MvError::UnsupportedKind(format!(
            "division in {}",
            a.name()
        ))),
    }
}

fn dense_gamma(a: &Algebra) -> bool {
    match a.kind() {
        Kind::Gamma(g) => match g.group().group() {
            Group::Rational(r) => r.coords().iter().all(|c| *c == Coord::Dense),
            _ => false,
        },
        _ => false,
    }
}

/// Decides divisibility, with the first failing `(a, n)` otherwise.
///
/// Finite algebras are scanned over `a` in carrier order and
/// `2 ≤ n ≤ |carrier|`; beyond that bound `n.x` has already stabilized.
pub fn is_divisible(a: &Algebra) -> Result<Divisibility> {
    if let Some(size) = a.size() {
        for t in a.elements()? {
            for n in 2..=size as u64 {
                if div_solve(a, &t, n)? == DivOutcome::NoSolution {
                    return Ok(Divisibility::NotDivisible { a: t, n });
                }
            }
        }
        return Ok(Divisibility::Divisible(Certificate::Exhaustive {
            elements: size,
        }));
    }
    match a.kind() {
        Kind::RationalChain => Ok(Divisibility::Divisible(Certificate::Structural(
            "Q is divisible: x = a/n".into(),
        ))),
        Kind::Gamma(_) if dense_gamma(a) => Ok(Divisibility::Divisible(Certificate::Structural(
            "Gamma(Q^k, u) with Q^k divisible: x = a/n".into(),
        ))),
        Kind::Product { factors, .. } => {
            for (i, f) in factors.iter().enumerate() {
                if let Divisibility::NotDivisible { a: t, n } = is_divisible(f)? {
                    let parts: Vec<Element> = factors
                        .iter()
                        .enumerate()
                        .map(|(j, g)| if j == i { t.clone() } else { g.zero() })
                        .collect();
                    return Ok(Divisibility::NotDivisible {
                        a: a.tuple(&parts)?,
                        n,
                    });
                }
            }
            Ok(Divisibility::Divisible(Certificate::Structural(
                "product of divisible factors".into(),
            )))
        }
        _ => Err(MvError::UnsupportedKind(format!(
            "divisibility of {}",
            a.name()
        ))),
    }
}

// ----- a-extensions -----

/// `y ≤ n.x` and `x ≤ n.y`, with both elements living in the larger algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AExtWitness {
    pub y: Element,
    pub n: u64,
    pub x: Element,
    /// Both inequalities hold strictly.
    pub strict: bool,
}

impl AExtWitness {
    pub fn replay(&self, m2: &Algebra) -> Result<bool> {
        let nx = m2.nat_scalar(self.n, &self.x, ScalarMode::Sum)?;
        let ny = m2.nat_scalar(self.n, &self.y, ScalarMode::Sum)?;
        let weak = m2.leq(&self.y, &nx)? && m2.leq(&self.x, &ny)?;
        let strict = weak && self.y != nx && self.x != ny;
        Ok(weak && strict == self.strict)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AExtVerdict {
    Holds,
    /// `y` has no witness at all.
    Fails {
        y: Element,
    },
    /// Some probe needs a multiple beyond the bound.
    Inconclusive {
        bound: u64,
    },
}

/// J ↦ J ∩ M₁ on ideal lattices (indices into the two enumerations).
#[derive(Clone, Debug, Serialize)]
pub struct LatticeCorrespondence {
    pub larger_ideals: usize,
    pub smaller_ideals: usize,
    pub map: Vec<usize>,
    pub is_isomorphism: bool,
}

#[derive(Clone, Debug)]
pub struct AExtensionReport {
    pub verdict: AExtVerdict,
    pub witnesses: Vec<AExtWitness>,
    pub lattice: Option<LatticeCorrespondence>,
    /// Largest `n` searched.
    pub bound: u64,
}

impl AExtensionReport {
    pub fn holds(&self) -> bool {
        self.verdict == AExtVerdict::Holds
    }

    pub fn replay(&self, m2: &Algebra) -> Result<bool> {
        for w in &self.witnesses {
            if !w.replay(m2)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn find_witness(
    m2: &Algebra,
    y: &Element,
    xs: &[Element],
    bound: u64,
) -> Result<Option<AExtWitness>> {
    let mut weak: Option<AExtWitness> = None;
    for n in 1..=bound {
        for x in xs {
            let nx = m2.nat_scalar(n, x, ScalarMode::Sum)?;
            let ny = m2.nat_scalar(n, y, ScalarMode::Sum)?;
            if m2.leq(y, &nx)? && m2.leq(x, &ny)? {
                let strict = *y != nx && *x != ny;
                let w = AExtWitness {
                    y: y.clone(),
                    n,
                    x: x.clone(),
                    strict,
                };
                if strict {
                    return Ok(Some(w));
                }
                weak.get_or_insert(w);
            }
        }
    }
    Ok(weak)
}

/// Checks that the target of an injective `inclusion` between finite
/// algebras is an a-extension of its image.
///
/// Both the ideal-lattice definition and the element-wise criterion are
/// evaluated; disagreement is reported as [`MvError::CriterionMismatch`].
/// The element-wise search runs `n` up to `max(bound, |M₂|)`: `n.x` is
/// monotone in a finite poset, so larger `n` add nothing.
pub fn a_extension_check(inclusion: &Hom, bound: u64) -> Result<AExtensionReport> {
    if !inclusion.is_injective() {
        return Err(MvError::NotASubalgebra("the map is not injective".into()));
    }
    let (m1, m2) = (inclusion.source(), inclusion.target());
    let size2 = m2.finite_size("a-extension checks")?;
    let bound = bound.max(size2 as u64);

    let lat2 = enumerate_ideals(m2)?;
    let lat1 = enumerate_ideals(m1)?;
    let mut map = Vec::with_capacity(lat2.ideals.len());
    for j in &lat2.ideals {
        let members: Vec<usize> = (0..m1.size().unwrap())
            .filter(|&x| j.contains_idx(inclusion.image_idx(x).unwrap()))
            .collect();
        let i = ideal_from_members(m1, &members)?;
        map.push(lat1.index_of(&i).expect("enumerated"));
    }
    let mut hit = vec![false; lat1.ideals.len()];
    let mut injective = true;
    for &k in &map {
        injective &= !std::mem::replace(&mut hit[k], true);
    }
    let reflects = (0..map.len()).all(|a| {
        (0..map.len()).all(|b| {
            lat2.ideals[a].is_subset(&lat2.ideals[b])
                == lat1.ideals[map[a]].is_subset(&lat1.ideals[map[b]])
        })
    });
    let is_isomorphism = injective && hit.iter().all(|&h| h) && reflects;

    let xs: Vec<Element> = inclusion
        .image_indices()
        .into_iter()
        .filter(|&i| i != m2.zero_idx())
        .map(|i| m2.wrap_unchecked(Value::Index(i)))
        .collect();
    let mut witnesses = Vec::new();
    let mut verdict = AExtVerdict::Holds;
    for y in m2.elements()?.into_iter().skip(1) {
        match find_witness(m2, &y, &xs, bound)? {
            Some(w) => witnesses.push(w),
            None => {
                verdict = AExtVerdict::Fails { y };
                break;
            }
        }
    }
    if (verdict == AExtVerdict::Holds) != is_isomorphism {
        return Err(MvError::CriterionMismatch(format!(
            "{} over {}: lattice map {} an isomorphism, element-wise criterion {}",
            m2.name(),
            m1.name(),
            if is_isomorphism { "is" } else { "is not" },
            if verdict == AExtVerdict::Holds {
                "holds"
            } else {
                "fails"
            }
        )));
    }
    Ok(AExtensionReport {
        verdict,
        witnesses,
        lattice: Some(LatticeCorrespondence {
            larger_ideals: lat2.ideals.len(),
            smaller_ideals: lat1.ideals.len(),
            map,
            is_isomorphism,
        }),
        bound,
    })
}

/// The element-wise criterion for a hull over its base, on a probe set.
///
/// Candidates `x` are the probe elements that come from the base. The
/// search bound on `n` is the largest denominator occurring in the probe
/// set; every `y = p/q` has a witness within it because the base contains
/// an element of the same support with coordinates at least `1/q`.
pub fn hull_a_extension_check(h: &HullHandle, probe: &[Element]) -> Result<AExtensionReport> {
    let m2 = h.hull();
    let mut coords = Vec::with_capacity(probe.len());
    for y in probe {
        coords.push(h.unit_coords(y)?);
    }
    let bound = coords
        .iter()
        .flatten()
        .map(|q| rational::common_denominator([q]))
        .max()
        .and_then(|d| num_traits::ToPrimitive::to_u64(&d))
        .unwrap_or(1)
        .max(1);
    let mut from_base = Vec::new();
    for (y, c) in probe.iter().zip(&coords) {
        if !c.iter().all(Zero::is_zero) && h.preimage(y)?.is_some() {
            from_base.push((y.clone(), c.clone()));
        }
    }
    let mut witnesses = Vec::new();
    let mut verdict = AExtVerdict::Holds;
    for (y, c) in probe.iter().zip(&coords) {
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let best = from_base
            .iter()
            .filter(|(_, xc)| hull::same_support(xc, c))
            .map(|(x, xc)| (hull::mutual_bound(xc, c), x))
            .min_by_key(|(n, _)| *n);
        match best {
            Some((n, x)) if n <= bound => {
                let nx = m2.nat_scalar(n, x, ScalarMode::Sum)?;
                let ny = m2.nat_scalar(n, y, ScalarMode::Sum)?;
                let strict = nx != *y && ny != *x;
                witnesses.push(AExtWitness {
                    y: y.clone(),
                    n,
                    x: x.clone(),
                    strict,
                });
            }
            Some(_) => {
                verdict = AExtVerdict::Inconclusive { bound };
            }
            None => {
                verdict = AExtVerdict::Inconclusive { bound };
            }
        }
    }
    Ok(AExtensionReport {
        verdict,
        witnesses,
        lattice: None,
        bound,
    })
}

// ----- a-closedness -----

#[derive(Clone, Debug)]
pub enum AClosedVerdict {
    /// A proper a-extension exists; `extension` is a checked witness when
    /// one is representable.
    NotAClosed {
        extension: Option<(Hom, AExtensionReport)>,
        reason: String,
    },
    AClosed {
        reason: String,
    },
    Unknown {
        reason: String,
    },
}

impl AClosedVerdict {
    pub fn decided(&self) -> Option<bool> {
        match self {
            AClosedVerdict::NotAClosed { .. } => Some(false),
            AClosedVerdict::AClosed { .. } => Some(true),
            AClosedVerdict::Unknown { .. } => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            AClosedVerdict::NotAClosed { .. } => "not a-closed",
            AClosedVerdict::AClosed { .. } => "a-closed",
            AClosedVerdict::Unknown { .. } => "unknown",
        }
    }
}

/// a-closedness for the classes with a known answer: the one-element
/// algebra, finite chains, and ℚ ∩ [0,1]. Everything else is `Unknown`.
pub fn a_closed_check(a: &Algebra) -> Result<AClosedVerdict> {
    if a.size() == Some(1) {
        return Ok(AClosedVerdict::AClosed {
            reason: "the one-element algebra is not a subalgebra of any other algebra".into(),
        });
    }
    let rational_like = matches!(a.kind(), Kind::RationalChain)
        || (dense_gamma(a)
            && matches!(a.kind(), Kind::Gamma(g) if matches!(g.group().unit(), GroupElement::Vector(u) if u.len() == 1)));
    if rational_like {
        return Ok(AClosedVerdict::NotAClosed {
            extension: None,
            reason: "a proper subalgebra of [0,1], which is a proper a-extension of it".into(),
        });
    }
    if let Some(size) = a.size() {
        if classify(a)?.is_linear {
            let n = (size - 1) as u32;
            let to_chain = match a.kind() {
                Kind::Chain { .. } => Hom::identity(a)?,
                _ => find_isomorphism(a, &Algebra::chain(n)?)?.ok_or_else(|| {
                    MvError::CriterionMismatch(format!(
                        "{} is linear but not a Łukasiewicz chain",
                        a.name()
                    ))
                })?,
            };
            let wide = Algebra::chain(2 * n)?;
            let images = (0..size)
                .map(|x| Value::Index(2 * to_chain.image_idx(x).expect("finite")))
                .collect();
            let doubled = Hom::new(
                a.clone(),
                wide,
                images,
                crate::morphisms::HomOrigin::Inclusion,
            )?;
            let report = a_extension_check(&doubled, 2 * n as u64 + 1)?;
            if !report.holds() || doubled.is_surjective()? {
                return Err(MvError::CriterionMismatch(format!(
                    "L{} is not a proper a-extension of {}",
                    2 * n + 1,
                    a.name()
                )));
            }
            return Ok(AClosedVerdict::NotAClosed {
                extension: Some((doubled, report)),
                reason: format!("L{} is a proper a-extension", 2 * n + 1),
            });
        }
    }
    Ok(AClosedVerdict::Unknown {
        reason: format!("no rule decides a-closedness of {}", a.name()),
    })
}

// ----- epicompletion -----

#[derive(Clone, Debug)]
pub struct EpicompletionResult {
    pub hull: HullHandle,
    pub alpha_injective: bool,
    pub alpha_epi_reason: String,
    pub hull_divisibility: Divisibility,
    /// Division spot checks on the probe set (`n` = 2, 3, 5).
    pub division_checks: usize,
    pub a_extension: AExtensionReport,
    /// Multiples returned by [`HullHandle::hull_property`] on the probe set.
    pub hull_property: Vec<u64>,
    /// The hull of the hull is the hull itself, with the identity embedding.
    pub idempotent: bool,
}

impl EpicompletionResult {
    pub fn all_certified(&self) -> bool {
        self.alpha_injective
            && self.hull_divisibility.is_divisible()
            && self.a_extension.holds()
            && self.idempotent
    }
}

/// The divisible hull with the certificates of an epicompletion.
pub fn epicompletion(a: &Algebra) -> Result<EpicompletionResult> {
    epicompletion_with_probe(a, DEFAULT_PROBE_DENOMINATOR)
}

pub fn epicompletion_with_probe(a: &Algebra, max_den: u64) -> Result<EpicompletionResult> {
    let h = divisible_hull(a)?;
    let e = h.hull();
    let alpha_injective = match h.embedding() {
        Some(f) => f.is_injective(),
        None => h.route() == HullRoute::Identity,
    };
    let hull_divisibility = is_divisible(e)?;
    let probe = h.probe_set(max_den)?;
    let mut division_checks = 0;
    for y in probe.iter().take(64) {
        for n in [2u64, 3, 5] {
            match div_solve(e, y, n)? {
                DivOutcome::Witness(w) if w.replay(e)? => division_checks += 1,
                _ => {
                    return Err(MvError::CriterionMismatch(format!(
                        "{} / {n} has no solution in the hull",
                        e.format(y)
                    )))
                }
            }
        }
    }
    let a_extension = hull_a_extension_check(&h, &probe)?;
    let hull_property = h.hull_property(&probe)?;
    let again = divisible_hull(e)?;
    let idempotent = again.route() == HullRoute::Identity && again.hull() == e;
    Ok(EpicompletionResult {
        alpha_epi_reason: if h.route() == HullRoute::Identity {
            "identity map".into()
        } else {
            "embedding into the divisible hull".into()
        },
        hull: h,
        alpha_injective,
        hull_divisibility,
        division_checks,
        a_extension,
        hull_property,
        idempotent,
    })
}

#[cfg(test)]
mod tests;
