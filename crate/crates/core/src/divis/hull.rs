//! Divisible hulls M^d = Γ(G^d, u).
//!
//! Every hull handled here is, up to scaling each coordinate by the unit, an
//! interval of ℚᵏ: ℚ ∩ [0,1], Γ(ℚᵏ, u), or a finite product of those. The
//! handle keeps the base group `G` (coordinatewise `sℤ` or ℚ) in the same
//! coordinates, which is what the hull property is checked against.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{Algebra, Element, Kind, Value};
use crate::error::{MvError, Result};
use crate::ideals::{primes_and_minimal_primes, quotient};
use crate::lgroup::{chang_embed, gamma, Coord, Group, GroupElement, UnitalGroup};
use crate::morphisms::{Hom, HomOrigin};
use crate::rational::{self, int, Rational};

/// Largest probe set built by [`HullHandle::probe_set`].
pub const PROBE_CAP: usize = 2048;
/// Default denominator bound for probe sets of rank-one hulls.
pub const DEFAULT_PROBE_DENOMINATOR: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HullRoute {
    /// The algebra is already divisible.
    Identity,
    /// Ł_{n+1} = Γ((1/n)ℤ, 1) inside ℚ ∩ [0,1].
    RationalChain,
    /// Product of the factor hulls.
    Product,
    /// Γ(G, u) inside Γ(ℚ-span of G, u).
    RationalSpan,
    /// Ξ(M) ⊗ ℚ ≅ ℚᵏ, one coordinate per minimal prime.
    Chang,
}

#[derive(Clone, Debug)]
enum Embed {
    Identity,
    /// Carrier index `i` ↦ `i/n`.
    Chain(u32),
    Product(Vec<HullHandle>),
    /// Finite Γ(G, u): carrier index ↦ interval vector.
    Span,
    /// Carrier index ↦ evaluation vector.
    Table(Vec<Vec<Rational>>),
}

/// A divisible hull with its canonical embedding.
#[derive(Clone, Debug)]
pub struct HullHandle {
    base: Algebra,
    hull: Algebra,
    route: HullRoute,
    embed: Embed,
    /// Coordinates of the base group `G`.
    lattice: Vec<Coord>,
    /// Unit in hull coordinates.
    unit: Vec<Rational>,
    embedding: Option<Hom>,
}

/// The divisible hull of a finite algebra, of ℚ ∩ [0,1], of Γ(G, u) over a
/// rational group, or of a product of those.
pub fn divisible_hull(a: &Algebra) -> Result<HullHandle> {
    match a.kind() {
        Kind::Chain { n } => finish(
            a,
            Algebra::rational_chain(),
            HullRoute::RationalChain,
            Embed::Chain(*n),
            vec![Coord::Cyclic(rational::rat(1, *n as i64))],
            vec![int(1)],
        ),
        Kind::RationalChain => identity(a, vec![Coord::Dense], vec![int(1)]),
        Kind::Product { factors, .. } => {
            let hulls = factors
                .iter()
                .map(divisible_hull)
                .collect::<Result<Vec<_>>>()?;
            let lattice: Vec<Coord> = hulls.iter().flat_map(|h| h.lattice.clone()).collect();
            let unit: Vec<Rational> = hulls.iter().flat_map(|h| h.unit.clone()).collect();
            if hulls.iter().all(|h| h.route == HullRoute::Identity) {
                return identity(a, lattice, unit);
            }
            let hull = Algebra::product(hulls.iter().map(|h| h.hull.clone()).collect())?;
            finish(
                a,
                hull,
                HullRoute::Product,
                Embed::Product(hulls),
                lattice,
                unit,
            )
        }
        Kind::Gamma(g) => match (g.group().group(), g.group().unit()) {
            (Group::Rational(r), GroupElement::Vector(u)) => {
                if r.coords().iter().all(|c| *c == Coord::Dense) {
                    return identity(a, r.coords().to_vec(), u.clone());
                }
                if !a.is_finite() {
                    return Err(MvError::UnsupportedKind(format!(
                        "hull of the infinite non-divisible {}",
                        a.name()
                    )));
                }
                let dense =
                    UnitalGroup::new(Group::Rational(r.dense_span()), g.group().unit().clone())?;
                let hull = gamma(dense)?;
                finish(
                    a,
                    hull,
                    HullRoute::RationalSpan,
                    Embed::Span,
                    r.coords().to_vec(),
                    u.clone(),
                )
            }
            _ if a.is_finite() => via_chang(a),
            _ => Err(MvError::UnsupportedKind(format!("hull of {}", a.name()))),
        },
        _ if a.is_finite() => via_chang(a),
        _ => Err(MvError::UnsupportedKind(format!("hull of {}", a.name()))),
    }
}

/// The hull of a finite algebra built from its Chang group.
///
/// Each minimal prime `P` gives a chain `M/P` = Ł_{n+1}, hence a group
/// homomorphism Ξ(M) → (1/n)ℤ summing the values of the entries of a good
/// sequence. Together they identify Ξ(M) with a subgroup of ℚᵏ of full rank,
/// and the hull is Γ(ℚᵏ, (1, …, 1)).
pub fn via_chang(a: &Algebra) -> Result<HullHandle> {
    let size = a.finite_size("hulls")?;
    if size == 1 {
        return identity(a, Vec::new(), Vec::new());
    }
    let minimal = primes_and_minimal_primes(a)?.minimal;
    let mut evaluations: Vec<Vec<Rational>> = Vec::new();
    let mut steps = Vec::new();
    for p in &minimal {
        let (q, proj) = quotient(a, p)?;
        let top = q.size().unwrap() - 1;
        let rank = |c: usize| (0..=top).filter(|&y| q.lt_idx(y, c)).count();
        evaluations.push(
            (0..size)
                .map(|x| rational::rat(rank(proj.image_idx(x).unwrap()) as i64, top as i64))
                .collect(),
        );
        steps.push(Coord::Cyclic(rational::rat(1, top as i64)));
    }
    let value = |g: &GroupElement| -> Vec<Rational> {
        let GroupElement::Chang(c) = g else {
            unreachable!()
        };
        evaluations
            .iter()
            .map(|ev| {
                let sum = |s: &[usize]| s.iter().fold(Rational::zero(), |acc, &i| acc + &ev[i]);
                sum(c.positive().entries()) - sum(c.negative().entries())
            })
            .collect()
    };
    let vectors: Vec<Vec<Rational>> = (0..size).map(|x| value(&chang_embed(a, x))).collect();
    let k = minimal.len();
    let hull = gamma(UnitalGroup::dense(vec![int(1); k])?)?;
    finish(
        a,
        hull,
        HullRoute::Chang,
        Embed::Table(vectors),
        steps,
        vec![int(1); k],
    )
}

fn identity(a: &Algebra, lattice: Vec<Coord>, unit: Vec<Rational>) -> Result<HullHandle> {
    let embedding = if a.is_finite() {
        Some(Hom::identity(a)?)
    } else {
        None
    };
    Ok(HullHandle {
        base: a.clone(),
        hull: a.clone(),
        route: HullRoute::Identity,
        embed: Embed::Identity,
        lattice,
        unit,
        embedding,
    })
}

fn finish(
    a: &Algebra,
    hull: Algebra,
    route: HullRoute,
    embed: Embed,
    lattice: Vec<Coord>,
    unit: Vec<Rational>,
) -> Result<HullHandle> {
    let mut h = HullHandle {
        base: a.clone(),
        hull,
        route,
        embed,
        lattice,
        unit,
        embedding: None,
    };
    if a.is_finite() {
        let images = (0..a.size().unwrap())
            .map(|i| h.embed_value(&Value::Index(i)))
            .collect();
        let hom = Hom::new(a.clone(), h.hull.clone(), images, HomOrigin::HullEmbedding)?;
        if !hom.is_injective() {
            return Err(MvError::CriterionMismatch(format!(
                "hull embedding of {} is not injective",
                a.name()
            )));
        }
        h.embedding = Some(hom);
    }
    Ok(h)
}

impl HullHandle {
    pub fn base(&self) -> &Algebra {
        &self.base
    }

    pub fn hull(&self) -> &Algebra {
        &self.hull
    }

    pub fn route(&self) -> HullRoute {
        self.route
    }

    /// The embedding as a verified homomorphism, when the base is finite.
    pub fn embedding(&self) -> Option<&Hom> {
        self.embedding.as_ref()
    }

    /// Number of rational coordinates.
    pub fn rank(&self) -> usize {
        self.unit.len()
    }

    /// Coordinates of the base group `G`.
    pub fn lattice(&self) -> &[Coord] {
        &self.lattice
    }

    pub fn embed(&self, x: &Element) -> Result<Element> {
        self.base.check(x)?;
        Ok(self.hull.wrap_unchecked(self.embed_value(x.value())))
    }

    fn embed_value(&self, v: &Value) -> Value {
        match (&self.embed, v) {
            (Embed::Identity, v) => v.clone(),
            (Embed::Chain(n), Value::Index(i)) => {
                Value::Rational(rational::rat(*i as i64, *n as i64))
            }
            (Embed::Product(hulls), Value::Index(i)) => Value::Tuple(
                self.base
                    .digits(*i)
                    .unwrap()
                    .iter()
                    .zip(hulls)
                    .map(|(d, h)| h.embed_value(&Value::Index(*d)))
                    .collect(),
            ),
            (Embed::Product(hulls), Value::Tuple(xs)) => Value::Tuple(
                xs.iter()
                    .zip(hulls)
                    .map(|(x, h)| h.embed_value(x))
                    .collect(),
            ),
            (Embed::Span, Value::Index(i)) => Value::Group(self.base.gamma_element(*i)),
            (Embed::Table(vectors), Value::Index(i)) => {
                Value::Group(GroupElement::Vector(vectors[*i].clone()))
            }
            _ => unreachable!("value shape does not match {}", self.base.name()),
        }
    }

    /// Raw coordinates of a hull element (the unit is not normalized).
    pub fn coords(&self, y: &Element) -> Result<Vec<Rational>> {
        self.hull.check(y)?;
        Ok(hull_coords(&self.hull, y.value()))
    }

    /// Coordinates divided by the unit, so the hull becomes Γ(ℚᵏ, 1).
    pub fn unit_coords(&self, y: &Element) -> Result<Vec<Rational>> {
        Ok(self
            .coords(y)?
            .into_iter()
            .zip(&self.unit)
            .map(|(c, u)| c / u)
            .collect())
    }

    /// The hull element with the given unit-normalized coordinates.
    pub fn from_unit_coords(&self, q: &[Rational]) -> Result<Element> {
        if q.len() != self.rank() || !q.iter().all(rational::in_unit_interval) {
            return Err(MvError::NotAMember(format!(
                "{} coordinates in {}",
                q.len(),
                self.hull.name()
            )));
        }
        let raw: Vec<Rational> = q.iter().zip(&self.unit).map(|(c, u)| c * u).collect();
        let v = hull_value(&self.hull, &raw);
        self.hull.wrap(v)
    }

    /// The base element mapped to `y`, if any.
    pub fn preimage(&self, y: &Element) -> Result<Option<Element>> {
        if let Some(e) = &self.embedding {
            let found = (0..self.base.size().unwrap()).find(|&i| e.images()[i] == *y.value());
            return Ok(found.map(|i| self.base.wrap_unchecked(Value::Index(i))));
        }
        match &self.embed {
            Embed::Identity => {
                self.hull.check(y)?;
                Ok(Some(self.base.wrap_unchecked(y.value().clone())))
            }
            Embed::Product(hulls) => {
                let parts = self.hull.components(y)?;
                let mut pre = Vec::new();
                for (h, p) in hulls.iter().zip(&parts) {
                    let Some(x) = h.preimage(&h.hull.wrap_unchecked(p.value().clone()))? else {
                        return Ok(None);
                    };
                    pre.push(x);
                }
                self.base.tuple(&pre).map(Some)
            }
            _ => unreachable!("finite bases always carry an embedding"),
        }
    }

    /// Elements whose unit-normalized coordinates have denominators at most
    /// `max_den` (reduced so that the set stays within [`PROBE_CAP`]),
    /// followed by the embedded base carrier when the base is finite.
    pub fn probe_set(&self, max_den: u64) -> Result<Vec<Element>> {
        let k = self.rank();
        let mut den = max_den.max(1);
        let mut axis = farey(den);
        while k > 1
            && axis
                .len()
                .checked_pow(k as u32)
                .is_none_or(|t| t > PROBE_CAP)
            && den > 1
        {
            den -= 1;
            axis = farey(den);
        }
        let mut points: Vec<Vec<Rational>> = vec![Vec::new()];
        for _ in 0..k {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |q| {
                        let mut p = p.clone();
                        p.push(q.clone());
                        p
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for p in &points {
            out.push(self.from_unit_coords(p)?);
        }
        if let Some(e) = &self.embedding {
            for v in e.images() {
                let y = self.hull.wrap_unchecked(v.clone());
                if !out.contains(&y) {
                    out.push(y);
                }
            }
        }
        Ok(out)
    }

    /// For each probe `y`, the least `n ≤ denominator(y)` with `n·y ∈ G`
    /// (group multiple, computed in raw coordinates).
    pub fn hull_property(&self, probe: &[Element]) -> Result<Vec<u64>> {
        probe
            .iter()
            .map(|y| {
                let c = self.coords(y)?;
                let den = rational::common_denominator(c.iter())
                    .to_u64()
                    .unwrap_or(u64::MAX);
                (1..=den.max(1))
                    .find(|&n| {
                        let nn = Rational::from_integer(BigInt::from(n));
                        c.iter().zip(&self.lattice).all(|(q, l)| match l {
                            Coord::Dense => true,
                            Coord::Cyclic(s) => (&nn * q / s).is_integer(),
                        })
                    })
                    .ok_or_else(|| {
                        MvError::CriterionMismatch(format!(
                            "{} has no multiple in the base group within its denominator",
                            self.hull.format(y)
                        ))
                    })
            })
            .collect()
    }

    pub fn describe(&self) -> String {
        format!(
            "{} -> {} ({:?})",
            self.base.name(),
            self.hull.name(),
            self.route
        )
    }
}

/// Raw coordinates of a value of ℚ ∩ [0,1], Γ(ℚᵏ, u) or a product of those.
pub(crate) fn hull_coords(a: &Algebra, v: &Value) -> Vec<Rational> {
    if a.size() == Some(1) {
        return Vec::new();
    }
    match (a.kind(), v) {
        (Kind::RationalChain, Value::Rational(q)) => vec![q.clone()],
        (Kind::Gamma(_), Value::Group(GroupElement::Vector(x))) => x.clone(),
        (Kind::Gamma(_), Value::Index(i)) => match a.gamma_element(*i) {
            GroupElement::Vector(x) => x,
            _ => unreachable!(),
        },
        (Kind::Chain { n }, Value::Index(i)) => vec![rational::rat(*i as i64, *n as i64)],
        (Kind::Product { factors, .. }, Value::Tuple(xs)) => factors
            .iter()
            .zip(xs)
            .flat_map(|(f, x)| hull_coords(f, x))
            .collect(),
        (Kind::Product { factors, .. }, Value::Index(i)) => a
            .digits(*i)
            .unwrap()
            .iter()
            .zip(factors)
            .flat_map(|(d, f)| hull_coords(f, &Value::Index(*d)))
            .collect(),
        _ => unreachable!("{} has no rational coordinates", a.name()),
    }
}

fn coord_rank(a: &Algebra) -> usize {
    match a.kind() {
        Kind::RationalChain | Kind::Chain { .. } => 1,
        Kind::Gamma(g) => match g.group().unit() {
            GroupElement::Vector(u) => u.len(),
            _ => 0,
        },
        Kind::Product { factors, .. } => factors.iter().map(coord_rank).sum(),
        _ => 0,
    }
}

fn hull_value(a: &Algebra, raw: &[Rational]) -> Value {
    if a.size() == Some(1) {
        return a.zero_val();
    }
    match a.kind() {
        Kind::RationalChain => Value::Rational(raw[0].clone()),
        Kind::Gamma(_) => Value::Group(GroupElement::Vector(raw.to_vec())),
        Kind::Product { factors, .. } => {
            let mut at = 0;
            Value::Tuple(
                factors
                    .iter()
                    .map(|f| {
                        let r = coord_rank(f);
                        let v = hull_value(f, &raw[at..at + r]);
                        at += r;
                        v
                    })
                    .collect(),
            )
        }
        _ => unreachable!("{} is not a rational hull", a.name()),
    }
}

/// Rationals in [0,1] with denominator at most `d`, ascending.
pub fn farey(d: u64) -> Vec<Rational> {
    let mut v: Vec<Rational> = (1..=d as i64)
        .flat_map(|q| {
            (0..=q)
                .filter(move |p| p.gcd(&q) == 1)
                .map(move |p| rational::rat(p, q))
        })
        .collect();
    v.sort();
    v.dedup();
    v
}

/// A coordinate permutation `σ` with `α₂(x) = σ(α₁(x))` for every base
/// element, i.e. an isomorphism of the two hulls over the base.
#[derive(Clone, Debug, Serialize)]
pub struct HullIsomorphism {
    /// Coordinate `i` of the first hull goes to coordinate `permutation[i]`.
    pub permutation: Vec<usize>,
    /// Probe elements on which ⊕ and ′ were checked to commute with `σ`.
    pub probes_checked: usize,
}

/// Matches two hulls of the same finite base as extensions of it.
pub fn match_hulls(h1: &HullHandle, h2: &HullHandle) -> Result<Option<HullIsomorphism>> {
    if h1.base != h2.base {
        return Err(MvError::ForeignElement);
    }
    let base = &h1.base;
    base.finite_size("hull comparison")?;
    if h1.rank() != h2.rank() {
        return Ok(None);
    }
    let k = h1.rank();
    let elems = base.elements()?;
    let profile = |h: &HullHandle, i: usize| -> Result<Vec<Rational>> {
        elems
            .iter()
            .map(|x| Ok(h.unit_coords(&h.embed(x)?)?[i].clone()))
            .collect()
    };
    let p1 = (0..k).map(|i| profile(h1, i)).collect::<Result<Vec<_>>>()?;
    let p2 = (0..k).map(|i| profile(h2, i)).collect::<Result<Vec<_>>>()?;
    let mut used = vec![false; k];
    let mut permutation = Vec::with_capacity(k);
    for row in &p1 {
        let Some(j) = (0..k).find(|&j| !used[j] && p2[j] == *row) else {
            return Ok(None);
        };
        used[j] = true;
        permutation.push(j);
    }
    let map = |y: &Element| -> Result<Element> {
        let c = h1.unit_coords(y)?;
        let mut out = vec![Rational::zero(); k];
        for (i, &j) in permutation.iter().enumerate() {
            out[j] = c[i].clone();
        }
        h2.from_unit_coords(&out)
    };
    let probe = h1.probe_set(if k <= 1 { 8 } else { 3 })?;
    for x in &elems {
        if map(&h1.embed(x)?)? != h2.embed(x)? {
            return Ok(None);
        }
    }
    let (a1, a2) = (&h1.hull, &h2.hull);
    for y in &probe {
        if map(&a1.neg(y)?)? != a2.neg(&map(y)?)? {
            return Ok(None);
        }
        for z in &probe {
            if map(&a1.oplus(y, z)?)? != a2.oplus(&map(y)?, &map(z)?)? {
                return Ok(None);
            }
        }
    }
    Ok(Some(HullIsomorphism {
        permutation,
        probes_checked: probe.len(),
    }))
}

/// `true` when every coordinate of `y` is positive exactly where `x` is.
pub(crate) fn same_support(x: &[Rational], y: &[Rational]) -> bool {
    x.iter()
        .zip(y)
        .all(|(a, b)| a.is_positive() == b.is_positive())
}

/// Least `n` with `y ≤ n·x` and `x ≤ n·y` coordinatewise in Γ(ℚᵏ, 1), for
/// vectors with the same support.
pub(crate) fn mutual_bound(x: &[Rational], y: &[Rational]) -> u64 {
    x.iter()
        .zip(y)
        .filter(|(a, _)| a.is_positive())
        .map(|(a, b)| {
            let r = (b / a).max(a / b);
            rational::ceil(&r).to_u64().unwrap_or(u64::MAX)
        })
        .max()
        .unwrap_or(1)
        .max(1)
}
