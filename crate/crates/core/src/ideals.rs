//! Ideals, congruences and quotients.
//!
//! An ideal of a finite algebra is stored as a bit set over the canonical
//! carrier together with its largest element: a finite ⊕-closed set contains
//! the ⊕-sum of all its members, so every finite ideal is the down-set of its
//! top. Generation uses exactly that: fold ⊕ over the current down-set until
//! the top stops moving.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::algebra::{Algebra, AlgebraId, Element, Kind, Value};
use crate::error::{MvError, Result};
use crate::morphisms::{Hom, HomOrigin};
use crate::rational;

/// Largest carrier accepted by [`enumerate_ideals`].
pub const IDEAL_ENUMERATION_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Members {
    Finite { bits: FixedBitSet, top: usize },
    Zero,
    Whole,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    algebra: AlgebraId,
    members: Members,
}

impl Ideal {
    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    pub fn contains_idx(&self, i: usize) -> bool {
        match &self.members {
            Members::Finite { bits, .. } => bits.contains(i),
            Members::Zero => i == 0,
            Members::Whole => true,
        }
    }

    pub fn contains(&self, a: &Algebra, x: &Element) -> Result<bool> {
        a.check(x)?;
        if self.algebra != a.id() {
            return Err(MvError::ForeignElement);
        }
        Ok(match (&self.members, x.value()) {
            (_, Value::Index(i)) => self.contains_idx(*i),
            (Members::Zero, v) => *v == a.zero_val(),
            (Members::Whole, _) => true,
            (Members::Finite { .. }, _) => false,
        })
    }

    /// Number of elements, `None` for ideals of infinite algebras.
    pub fn len(&self) -> Option<usize> {
        match &self.members {
            Members::Finite { bits, .. } => Some(bits.count_ones(..)),
            Members::Zero => Some(1),
            Members::Whole => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest element (finite ideals only).
    pub fn top(&self) -> Option<usize> {
        match &self.members {
            Members::Finite { top, .. } => Some(*top),
            Members::Zero => Some(0),
            Members::Whole => None,
        }
    }

    pub fn members(&self) -> Vec<usize> {
        match &self.members {
            Members::Finite { bits, .. } => bits.ones().collect(),
            Members::Zero => vec![0],
            Members::Whole => Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.members {
            Members::Finite { top, .. } => *top == 0,
            Members::Zero => true,
            Members::Whole => false,
        }
    }

    pub fn is_whole(&self, a: &Algebra) -> bool {
        match &self.members {
            Members::Finite { top, .. } => *top == a.one_idx(),
            Members::Zero => false,
            Members::Whole => true,
        }
    }

    pub fn is_proper(&self, a: &Algebra) -> bool {
        !self.is_whole(a)
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        match (&self.members, &other.members) {
            (Members::Finite { bits: a, .. }, Members::Finite { bits: b, .. }) => a.is_subset(b),
            (_, Members::Whole) | (Members::Zero, _) => true,
            _ => false,
        }
    }

    fn bits(&self) -> &FixedBitSet {
        match &self.members {
            Members::Finite { bits, .. } => bits,
            _ => panic!("bit set of an ideal of an infinite algebra"),
        }
    }

    /// Human form: the list of members.
    pub fn describe(&self, a: &Algebra) -> String {
        match &self.members {
            Members::Finite { bits, .. } => {
                let parts: Vec<String> = bits
                    .ones()
                    .map(|i| a.format_value(&Value::Index(i)))
                    .collect();
                format!("{{{}}}", parts.join(", "))
            }
            Members::Zero => "{0}".into(),
            Members::Whole => a.name().to_string(),
        }
    }
}

/// Independent ideal predicate on a finite carrier: contains 0, is a
/// down-set and is closed under ⊕.
pub fn is_ideal_set(a: &Algebra, member: &[bool]) -> bool {
    let n = member.len();
    if !member[0] {
        return false;
    }
    for x in (0..n).filter(|&x| member[x]) {
        for y in 0..n {
            if a.leq_idx(y, x) && !member[y] {
                return false;
            }
            if member[y] && !member[a.add_idx(x, y)] {
                return false;
            }
        }
    }
    true
}

fn down_set(a: &Algebra, t: usize) -> FixedBitSet {
    let n = a.size().unwrap();
    let mut bits = FixedBitSet::with_capacity(n);
    for y in 0..n {
        if a.leq_idx(y, t) {
            bits.insert(y);
        }
    }
    bits
}

/// The least ideal containing the indices in `seeds`.
fn generate_from_indices(a: &Algebra, seeds: &[usize]) -> Ideal {
    let mut t = seeds.iter().fold(a.zero_idx(), |acc, &s| a.add_idx(acc, s));
    loop {
        let down = down_set(a, t);
        let next = down.ones().fold(t, |acc, y| a.add_idx(acc, y));
        if next == t {
            return Ideal {
                algebra: a.id(),
                members: Members::Finite { bits: down, top: t },
            };
        }
        t = next;
    }
}

/// The ideal generated by `gens`: ⊕-closure followed by down-closure,
/// repeated to a fixpoint.
pub fn generate_ideal(a: &Algebra, gens: &[Element]) -> Result<Ideal> {
    for g in gens {
        a.check(g)?;
    }
    if a.is_finite() {
        let seeds: Vec<usize> = gens.iter().map(|g| g.index().unwrap()).collect();
        return Ok(generate_from_indices(a, &seeds));
    }
    let zero = a.zero();
    let nonzero: Vec<&Element> = gens.iter().filter(|g| **g != zero).collect();
    if nonzero.is_empty() {
        return Ok(Ideal {
            algebra: a.id(),
            members: Members::Zero,
        });
    }
    if let Kind::RationalChain = a.kind() {
        // n.x reaches 1 for n = ⌈1/x⌉
        let x = nonzero[0];
        let q = a.rational_value(x).unwrap();
        let n = rational::ceil(&(rational::int(1) / &q));
        let n = n.to_u64().filter(|_| !n.is_negative()).unwrap_or(u64::MAX);
        if a.nat_sum_val(n, x.value()) == a.one_val() {
            return Ok(Ideal {
                algebra: a.id(),
                members: Members::Whole,
            });
        }
    }
    Err(MvError::UnsupportedKind(format!(
        "ideal generation in {}",
        a.name()
    )))
}

/// Builds an ideal from an explicit member list, rejecting non-ideals.
pub fn ideal_from_members(a: &Algebra, members: &[usize]) -> Result<Ideal> {
    let n = a.finite_size("explicit ideals")?;
    let mut flags = vec![false; n];
    for &m in members {
        if m >= n {
            return Err(MvError::NotAnIdeal(format!("index {m} out of range")));
        }
        flags[m] = true;
    }
    if !is_ideal_set(a, &flags) {
        return Err(MvError::NotAnIdeal(format!("{members:?} in {}", a.name())));
    }
    Ok(generate_from_indices(a, members))
}

pub fn zero_ideal(a: &Algebra) -> Ideal {
    if a.is_finite() {
        generate_from_indices(a, &[])
    } else {
        Ideal {
            algebra: a.id(),
            members: Members::Zero,
        }
    }
}

pub fn whole_ideal(a: &Algebra) -> Ideal {
    if a.is_finite() {
        generate_from_indices(a, &[a.one_idx()])
    } else {
        Ideal {
            algebra: a.id(),
            members: Members::Whole,
        }
    }
}

pub fn intersection(a: &Algebra, i: &Ideal, j: &Ideal) -> Ideal {
    let mut bits = i.bits().clone();
    bits.intersect_with(j.bits());
    let top = bits.ones().fold(a.zero_idx(), |acc, y| a.add_idx(acc, y));
    Ideal {
        algebra: a.id(),
        members: Members::Finite { bits, top },
    }
}

/// ⟨I ∪ J⟩.
pub fn ideal_join(a: &Algebra, i: &Ideal, j: &Ideal) -> Ideal {
    generate_from_indices(a, &[i.top().unwrap(), j.top().unwrap()])
}

#[derive(Clone, Debug)]
pub struct IdealLattice {
    pub algebra: Algebra,
    /// Sorted by size, then by member list.
    pub ideals: Vec<Ideal>,
    /// Covering pairs `(lower, upper)` as indices into `ideals`.
    pub covers: Vec<(usize, usize)>,
}

impl IdealLattice {
    pub fn index_of(&self, i: &Ideal) -> Option<usize> {
        self.ideals.iter().position(|j| j == i)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let m = intersection(&self.algebra, &self.ideals[i], &self.ideals[j]);
        self.index_of(&m)
            .expect("lattice closed under intersection")
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        let m = ideal_join(&self.algebra, &self.ideals[i], &self.ideals[j]);
        self.index_of(&m).expect("lattice closed under joins")
    }
}

/// All ideals of a finite algebra with their covering relation.
///
/// Breadth-first over single-element extensions ⟨I ∪ {x}⟩; only the distinct
/// principal tops need to be tried since ⟨I ∪ {x}⟩ = ⟨I ∪ ⟨x⟩⟩.
pub fn enumerate_ideals(a: &Algebra) -> Result<IdealLattice> {
    let n = a.finite_size("ideal enumeration")?;
    if n > IDEAL_ENUMERATION_CAP {
        return Err(MvError::TooLarge {
            what: format!("ideal enumeration of {}", a.name()),
            size: n,
            cap: IDEAL_ENUMERATION_CAP,
        });
    }
    let mut principal: Vec<usize> = (0..n)
        .map(|x| generate_from_indices(a, &[x]).top().unwrap())
        .collect();
    principal.sort_unstable();
    principal.dedup();

    let mut found: Vec<Ideal> = vec![zero_ideal(a)];
    let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
    seen.insert(found[0].bits().clone(), 0);
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    let mut k = 0;
    while k < found.len() {
        let t = found[k].top().unwrap();
        let mut ext = Vec::new();
        for &p in &principal {
            if found[k].contains_idx(p) {
                continue;
            }
            let j = generate_from_indices(a, &[t, p]);
            let id = match seen.get(j.bits()) {
                Some(&id) => id,
                None => {
                    let id = found.len();
                    seen.insert(j.bits().clone(), id);
                    found.push(j);
                    id
                }
            };
            if !ext.contains(&id) {
                ext.push(id);
            }
        }
        candidates.push(ext);
        k += 1;
    }

    // covers of I are the minimal single-element extensions
    let mut raw_covers = Vec::new();
    for (i, ext) in candidates.iter().enumerate() {
        for &j in ext {
            let minimal = ext
                .iter()
                .all(|&k| k == j || !found[k].is_subset(&found[j]));
            if minimal {
                raw_covers.push((i, j));
            }
        }
    }

    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&x, &y| {
        let (fx, fy) = (&found[x], &found[y]);
        fx.len()
            .cmp(&fy.len())
            .then_with(|| fx.members().cmp(&fy.members()))
    });
    let mut pos = vec![0; found.len()];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let ideals = order.iter().map(|&o| found[o].clone()).collect();
    let mut covers: Vec<(usize, usize)> = raw_covers
        .into_iter()
        .map(|(i, j)| (pos[i], pos[j]))
        .collect();
    covers.sort_unstable();
    Ok(IdealLattice {
        algebra: a.clone(),
        ideals,
        covers,
    })
}

/// Element-wise prime test: proper, and x ⊖ y ∈ I or y ⊖ x ∈ I for all x, y.
pub fn is_prime(a: &Algebra, i: &Ideal) -> Result<bool> {
    let n = a.finite_size("prime test")?;
    if !i.is_proper(a) {
        return Ok(false);
    }
    for x in 0..n {
        for y in x + 1..n {
            if !i.contains_idx(a.ominus_idx(x, y)) && !i.contains_idx(a.ominus_idx(y, x)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct Primes {
    pub primes: Vec<Ideal>,
    pub minimal: Vec<Ideal>,
}

/// Prime and minimal prime ideals. Each prime verdict is cross-checked
/// against linearity of the quotient.
pub fn primes_and_minimal_primes(a: &Algebra) -> Result<Primes> {
    let lattice = enumerate_ideals(a)?;
    let mut primes = Vec::new();
    for i in &lattice.ideals {
        let elementwise = is_prime(a, i)?;
        let via_quotient = i.is_proper(a) && quotient_is_linear(a, i)?;
        if elementwise != via_quotient {
            return Err(MvError::CriterionMismatch(format!(
                "prime test disagrees with quotient linearity on {}",
                i.describe(a)
            )));
        }
        if elementwise {
            primes.push(i.clone());
        }
    }
    let minimal = primes
        .iter()
        .filter(|p| primes.iter().all(|q| q == *p || !q.is_subset(p)))
        .cloned()
        .collect();
    Ok(Primes { primes, minimal })
}

fn quotient_is_linear(a: &Algebra, i: &Ideal) -> Result<bool> {
    let (q, _) = quotient(a, i)?;
    let n = q.size().unwrap();
    Ok((0..n).all(|x| (x + 1..n).all(|y| q.leq_idx(x, y) || q.leq_idx(y, x))))
}

/// M/I with its natural projection. Classes are represented by their
/// ≤-least member and ordered canonically.
pub fn quotient(a: &Algebra, i: &Ideal) -> Result<(Algebra, Hom)> {
    let n = a.finite_size("quotients")?;
    if i.algebra_id() != a.id() {
        return Err(MvError::ForeignElement);
    }
    let flags: Vec<bool> = (0..n).map(|x| i.contains_idx(x)).collect();
    if !is_ideal_set(a, &flags) {
        return Err(MvError::NotAnIdeal(i.describe(a)));
    }
    let related = |x: usize, y: usize| {
        i.contains_idx(a.ominus_idx(x, y)) && i.contains_idx(a.ominus_idx(y, x))
    };
    let mut raw_class = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if raw_class[x] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = Vec::new();
        for (y, class) in raw_class.iter_mut().enumerate().skip(x) {
            if *class == usize::MAX && related(x, y) {
                *class = c;
                members.push(y);
            }
        }
        classes.push(members);
    }
    let reps: Vec<usize> = classes
        .iter()
        .map(|m| {
            m.iter()
                .copied()
                .find(|&r| m.iter().all(|&y| a.leq_idx(r, y)))
                .unwrap_or(m[0])
        })
        .collect();
    let k = classes.len();
    let leq = |c: usize, d: usize| i.contains_idx(a.ominus_idx(reps[c], reps[d]));
    let order = crate::algebra::linear_extension(k, leq);
    let mut pos = vec![0; k];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let class_of: Vec<usize> = raw_class.iter().map(|&c| pos[c]).collect();
    let reps: Vec<usize> = order.iter().map(|&o| reps[o]).collect();
    let q = Algebra::quotient_raw(a.clone(), i.clone(), class_of.clone(), reps);
    let images = class_of.into_iter().map(Value::Index).collect();
    let proj = Hom::new_unchecked(a.clone(), q.clone(), images, HomOrigin::Projection);
    Ok((q, proj))
}

/// Members of M₁ + I: the union of the θ_I-classes meeting the image of
/// the inclusion.
pub fn coset_sum_members(inclusion: &Hom, i: &Ideal) -> Result<Vec<usize>> {
    let m2 = inclusion.target();
    let n = m2.finite_size("coset sums")?;
    if !inclusion.is_injective() {
        return Err(MvError::NotASubalgebra("inclusion is not injective".into()));
    }
    if i.algebra_id() != m2.id() {
        return Err(MvError::ForeignElement);
    }
    let image: Vec<usize> = inclusion
        .images()
        .iter()
        .map(|v| v.index().unwrap())
        .collect();
    Ok((0..n)
        .filter(|&y| {
            image.iter().any(|&x| {
                i.contains_idx(m2.ominus_idx(x, y)) && i.contains_idx(m2.ominus_idx(y, x))
            })
        })
        .collect())
}

/// The subalgebra M₁ + I of M₂ with its inclusion into M₂.
pub fn coset_sum_subalgebra(inclusion: &Hom, i: &Ideal) -> Result<(Algebra, Hom)> {
    let members = coset_sum_members(inclusion, i)?;
    let m2 = inclusion.target();
    let (sub, images) = crate::algebra::restrict(m2, &members)?;
    let images = images.into_iter().map(Value::Index).collect();
    let incl = Hom::new_unchecked(sub.clone(), m2.clone(), images, HomOrigin::Inclusion);
    Ok((sub, incl))
}

/// B(M) = {x : x ⊕ x = x}, canonical order.
pub fn boolean_elements(a: &Algebra) -> Result<Vec<usize>> {
    let n = a.finite_size("Boolean skeleton")?;
    Ok((0..n).filter(|&x| a.is_boolean_idx(x)).collect())
}

/// I is stonean iff I = ↓(I ∩ B(M)).
pub fn is_stonean(a: &Algebra, i: &Ideal) -> Result<bool> {
    let n = a.finite_size("stonean test")?;
    let s: Vec<usize> = boolean_elements(a)?
        .into_iter()
        .filter(|&b| i.contains_idx(b))
        .collect();
    Ok((0..n).all(|x| i.contains_idx(x) == s.iter().any(|&b| a.leq_idx(x, b))))
}

#[derive(Clone, Debug)]
pub struct SummandDecomposition {
    /// Boolean element `a` with I = ↓a.
    pub witness: usize,
    pub ideal: Ideal,
    /// I^⊥ = ↓a′.
    pub complement: Ideal,
    /// x ↦ (x/I, x/I^⊥), certified bijective.
    pub splitting: Hom,
}

/// Finds a Boolean `a` with I = ↓a and certifies M = I ⊞ ↓a′.
pub fn summand_decomposition(a: &Algebra, i: &Ideal) -> Result<Option<SummandDecomposition>> {
    let n = a.finite_size("summand decomposition")?;
    let witness = boolean_elements(a)?
        .into_iter()
        .find(|&b| (0..n).all(|x| i.contains_idx(x) == a.leq_idx(x, b)));
    let Some(b) = witness else {
        return Ok(None);
    };
    let ideal = generate_from_indices(a, &[b]);
    let complement = generate_from_indices(a, &[a.neg_idx(b)]);
    if !ideal_join(a, &ideal, &complement).is_whole(a)
        || !intersection(a, &ideal, &complement).is_zero()
    {
        return Ok(None);
    }
    let (qi, pi) = quotient(a, &ideal)?;
    let (qj, pj) = quotient(a, &complement)?;
    let prod = Algebra::product(vec![qi.clone(), qj.clone()])?;
    let images = (0..n)
        .map(|x| {
            let c = [
                qi.wrap_unchecked(pi.images()[x].clone()),
                qj.wrap_unchecked(pj.images()[x].clone()),
            ];
            prod.tuple(&c).map(|e| e.value().clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let splitting = Hom::new(a.clone(), prod, images, HomOrigin::Isomorphism)?;
    if !(splitting.is_injective() && splitting.is_surjective()?) {
        return Ok(None);
    }
    Ok(Some(SummandDecomposition {
        witness: b,
        ideal,
        complement,
        splitting,
    }))
}

#[derive(Clone, Debug, Serialize)]
pub enum ArchimedeanProfile {
    /// Least `n` with `n.x` Boolean for each element (0 for x = 0), searched
    /// up to the carrier size: n.x is monotone in n, so it stabilizes within
    /// that many steps.
    Finite {
        witnesses: Vec<Option<u64>>,
        hyperarchimedean: bool,
    },
    /// ℚ ∩ [0,1]: every 0 < x has ⌈1/x⌉.x = 1.
    Structural {
        hyperarchimedean: bool,
        rule: String,
    },
}

impl ArchimedeanProfile {
    pub fn is_hyperarchimedean(&self) -> bool {
        match self {
            ArchimedeanProfile::Finite {
                hyperarchimedean, ..
            } => *hyperarchimedean,
            ArchimedeanProfile::Structural {
                hyperarchimedean, ..
            } => *hyperarchimedean,
        }
    }

    pub fn witness(&self, a: &Algebra, x: &Element) -> Option<u64> {
        match self {
            ArchimedeanProfile::Finite { witnesses, .. } => witnesses[x.index()?],
            ArchimedeanProfile::Structural { .. } => {
                let q = a.rational_value(x)?;
                if q == rational::int(0) {
                    return Some(0);
                }
                rational::ceil(&(rational::int(1) / q)).to_u64()
            }
        }
    }
}

pub fn archimedean_profile(a: &Algebra) -> Result<ArchimedeanProfile> {
    if let Kind::RationalChain = a.kind() {
        return Ok(ArchimedeanProfile::Structural {
            hyperarchimedean: true,
            rule: "every 0 < x has ceil(1/x).x = 1".into(),
        });
    }
    let n = a.finite_size("archimedean profile")?;
    let witnesses: Vec<Option<u64>> = (0..n)
        .map(|x| {
            if x == a.zero_idx() {
                return Some(0);
            }
            let mut acc = a.zero_idx();
            for k in 1..=n as u64 {
                acc = a.add_idx(acc, x);
                if a.is_boolean_idx(acc) {
                    return Some(k);
                }
            }
            None
        })
        .collect();
    let hyperarchimedean = witnesses.iter().all(Option::is_some);
    Ok(ArchimedeanProfile::Finite {
        witnesses,
        hyperarchimedean,
    })
}

#[cfg(test)]
mod tests;
