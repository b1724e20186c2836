//! Unital abelian ℓ-groups, the Γ functor and Chang groups of good sequences.
//!
//! Three representations are supported:
//! - subgroups of ℚᵏ with the coordinatewise order, restricted to products
//!   of coordinate groups `sℤ` or ℚ so that the order is a lattice order;
//! - lexicographic products `G₁ ×→ G₂` with `G₁` linearly ordered;
//! - Chang groups Ξ(M) of a finite algebra M, as normalized formal
//!   differences of good sequences.

mod lattice;
mod seq;

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{split_top_level, Algebra, AlgebraId, Value};
use crate::error::{MvError, Result};
use crate::morphisms::{Hom, HomOrigin};
use crate::rational::{self, Rational};

pub use seq::{all_good_sequences, good_seq_arith, GoodSequence, SeqOp, SeqResult};

/// Largest base accepted by [`mundici_roundtrip`].
pub const ROUNDTRIP_CAP: usize = 256;

/// One coordinate of a finite-rank rational group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coord {
    /// `s·ℤ` for a positive step `s`.
    Cyclic(Rational),
    /// ℚ.
    Dense,
}

impl Coord {
    fn contains(&self, q: &Rational) -> bool {
        match self {
            Coord::Cyclic(s) => (q / s).is_integer(),
            Coord::Dense => true,
        }
    }

    fn name(&self) -> String {
        match self {
            Coord::Cyclic(s) if s.is_one() => "Z".into(),
            Coord::Cyclic(s) => format!("({})Z", rational::to_short(s)),
            Coord::Dense => "Q".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGroup {
    coords: Vec<Coord>,
    /// Generators as supplied (or the coordinate steps).
    generators: Vec<Vec<Rational>>,
}

impl RationalGroup {
    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    /// Same rank, every coordinate replaced by ℚ.
    pub fn dense_span(&self) -> RationalGroup {
        RationalGroup {
            coords: vec![Coord::Dense; self.rank()],
            generators: Vec::new(),
        }
    }
}

/// An abelian group with a compatible partial order.
#[derive(Clone, Debug)]
pub enum Group {
    Rational(RationalGroup),
    Lex(Box<Group>, Box<Group>),
    Chang(Algebra),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChangElement {
    base: AlgebraId,
    pos: GoodSequence,
    neg: GoodSequence,
}

impl ChangElement {
    pub fn positive(&self) -> &GoodSequence {
        &self.pos
    }
    pub fn negative(&self) -> &GoodSequence {
        &self.neg
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Vector(Vec<Rational>),
    Pair(Box<GroupElement>, Box<GroupElement>),
    Chang(ChangElement),
}

impl GroupElement {
    pub fn vector(&self) -> Option<&[Rational]> {
        match self {
            GroupElement::Vector(v) => Some(v),
            _ => None,
        }
    }
}

fn mismatch() -> MvError {
    MvError::ForeignElement
}

impl Group {
    pub fn integers() -> Group {
        Group::Rational(RationalGroup {
            coords: vec![Coord::Cyclic(rational::int(1))],
            generators: vec![vec![rational::int(1)]],
        })
    }

    /// `s·ℤ`.
    pub fn cyclic(step: Rational) -> Result<Group> {
        if !step.is_positive() {
            return Err(MvError::InvalidParameter(
                "cyclic step must be positive".into(),
            ));
        }
        Ok(Group::Rational(RationalGroup {
            coords: vec![Coord::Cyclic(step.clone())],
            generators: vec![vec![step]],
        }))
    }

    /// ℚᵏ.
    pub fn dense(rank: usize) -> Group {
        Group::Rational(RationalGroup {
            coords: vec![Coord::Dense; rank],
            generators: Vec::new(),
        })
    }

    pub fn from_coords(coords: Vec<Coord>) -> Result<Group> {
        let k = coords.len();
        let mut generators = Vec::new();
        for (i, c) in coords.iter().enumerate() {
            if let Coord::Cyclic(s) = c {
                if !s.is_positive() {
                    return Err(MvError::InvalidParameter(
                        "cyclic step must be positive".into(),
                    ));
                }
                let mut g = vec![rational::int(0); k];
                g[i] = s.clone();
                generators.push(g);
            }
        }
        Ok(Group::Rational(RationalGroup { coords, generators }))
    }

    /// The subgroup of ℚᵏ generated by integer combinations of `generators`.
    ///
    /// Accepted only when the span is a product of coordinate groups, which
    /// makes the coordinatewise order a lattice order on it.
    pub fn span(generators: Vec<Vec<Rational>>) -> Result<Group> {
        let k = generators.first().map(Vec::len).unwrap_or(0);
        if k == 0 || generators.iter().any(|g| g.len() != k) {
            return Err(MvError::InvalidParameter(
                "generators must be non-empty vectors of equal length".into(),
            ));
        }
        let d = rational::common_denominator(generators.iter().flatten());
        let scale = Rational::from_integer(d.clone());
        let rows: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| g.iter().map(|q| (q * &scale).to_integer()).collect())
            .collect();
        let basis = lattice::echelon(rows.clone(), k);
        let mut coords = Vec::with_capacity(k);
        let mut product_shaped = true;
        for i in 0..k {
            let s = rows.iter().fold(BigInt::zero(), |acc, r| acc.gcd(&r[i]));
            if s.is_zero() {
                return Err(MvError::InvalidParameter(format!(
                    "coordinate {i} is identically zero"
                )));
            }
            let mut e = vec![BigInt::zero(); k];
            e[i] = s.clone();
            if !lattice::contains(&basis, &e) {
                product_shaped = false;
            }
            coords.push(Coord::Cyclic(Rational::new(s, d.clone())));
        }
        if !product_shaped {
            let in_span = |v: &[Rational]| {
                let w: Vec<BigInt> = v
                    .iter()
                    .map(|q| q * &scale)
                    .map(|q| q.to_integer())
                    .collect();
                v.iter().all(|q| (q * &scale).is_integer()) && lattice::contains(&basis, &w)
            };
            let zero = vec![rational::int(0); k];
            for g in &generators {
                let pos: Vec<Rational> =
                    g.iter().zip(&zero).map(|(a, b)| a.max(b).clone()).collect();
                if !in_span(&pos) {
                    return Err(MvError::NotALattice(
                        "coordinatewise join leaves the generated subgroup".into(),
                    ));
                }
            }
            return Err(MvError::UnsupportedInstance(
                "only spans that split into coordinate groups are supported".into(),
            ));
        }
        Ok(Group::Rational(RationalGroup { coords, generators }))
    }

    pub fn lex(first: Group, second: Group) -> Group {
        Group::Lex(Box::new(first), Box::new(second))
    }

    pub fn name(&self) -> String {
        match self {
            Group::Rational(r) => {
                let parts: Vec<String> = r.coords.iter().map(Coord::name).collect();
                parts.join(" x ")
            }
            Group::Lex(a, b) => format!("({} xlex {})", a.name(), b.name()),
            Group::Chang(m) => format!("Xi({})", m.name()),
        }
    }

    pub fn zero(&self) -> GroupElement {
        match self {
            Group::Rational(r) => GroupElement::Vector(vec![rational::int(0); r.rank()]),
            Group::Lex(a, b) => GroupElement::Pair(Box::new(a.zero()), Box::new(b.zero())),
            Group::Chang(m) => GroupElement::Chang(ChangElement {
                base: m.id(),
                pos: GoodSequence::empty(),
                neg: GoodSequence::empty(),
            }),
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (Group::Rational(r), GroupElement::Vector(v)) => {
                v.len() == r.rank() && r.coords.iter().zip(v).all(|(c, q)| c.contains(q))
            }
            (Group::Lex(a, b), GroupElement::Pair(x1, x2)) => a.contains(x1) && b.contains(x2),
            (Group::Chang(m), GroupElement::Chang(c)) => c.base == m.id(),
            _ => false,
        }
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(mismatch())
        }
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, y))
    }

    fn add_raw(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        match (self, x, y) {
            (Group::Rational(_), GroupElement::Vector(a), GroupElement::Vector(b)) => {
                GroupElement::Vector(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (Group::Lex(g1, g2), GroupElement::Pair(a1, a2), GroupElement::Pair(b1, b2)) => {
                GroupElement::Pair(Box::new(g1.add_raw(a1, b1)), Box::new(g2.add_raw(a2, b2)))
            }
            (Group::Chang(m), GroupElement::Chang(a), GroupElement::Chang(b)) => {
                chang_normalize(m, a.pos.add(m, &b.pos), a.neg.add(m, &b.neg))
            }
            _ => unreachable!("checked membership"),
        }
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(self.neg_raw(x))
    }

    fn neg_raw(&self, x: &GroupElement) -> GroupElement {
        match (self, x) {
            (Group::Rational(_), GroupElement::Vector(a)) => {
                GroupElement::Vector(a.iter().map(|p| -p).collect())
            }
            (Group::Lex(g1, g2), GroupElement::Pair(a1, a2)) => {
                GroupElement::Pair(Box::new(g1.neg_raw(a1)), Box::new(g2.neg_raw(a2)))
            }
            (Group::Chang(_), GroupElement::Chang(a)) => GroupElement::Chang(ChangElement {
                base: a.base,
                pos: a.neg.clone(),
                neg: a.pos.clone(),
            }),
            _ => unreachable!("checked membership"),
        }
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.add(x, &self.neg(y)?)
    }

    /// `n·x` for an integer `n`.
    pub fn times(&self, n: i64, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        let base = if n < 0 { self.neg_raw(x) } else { x.clone() };
        let mut acc = self.zero();
        for _ in 0..n.unsigned_abs() {
            acc = self.add_raw(&acc, &base);
        }
        Ok(acc)
    }

    pub fn leq(&self, x: &GroupElement, y: &GroupElement) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.leq_raw(x, y))
    }

    fn leq_raw(&self, x: &GroupElement, y: &GroupElement) -> bool {
        match (self, x, y) {
            (Group::Rational(_), GroupElement::Vector(a), GroupElement::Vector(b)) => {
                a.iter().zip(b).all(|(p, q)| p <= q)
            }
            (Group::Lex(g1, g2), GroupElement::Pair(a1, a2), GroupElement::Pair(b1, b2)) => {
                if a1 == b1 {
                    g2.leq_raw(a2, b2)
                } else {
                    g1.leq_raw(a1, b1)
                }
            }
            (Group::Chang(m), GroupElement::Chang(a), GroupElement::Chang(b)) => {
                a.pos.add(m, &b.neg).leq(m, &b.pos.add(m, &a.neg))
            }
            _ => unreachable!("checked membership"),
        }
    }

    pub fn compare(&self, x: &GroupElement, y: &GroupElement) -> Result<Option<Ordering>> {
        Ok(match (self.leq(x, y)?, self.leq(y, x)?) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        })
    }

    /// Whether the order is total.
    pub fn is_linear(&self) -> bool {
        match self {
            Group::Rational(r) => r.rank() == 1,
            Group::Lex(a, b) => a.is_linear() && b.is_linear(),
            Group::Chang(m) => {
                let n = m.size().unwrap_or(0);
                (0..n).all(|x| (x + 1..n).all(|y| m.leq_idx(x, y) || m.leq_idx(y, x)))
            }
        }
    }

    /// Whether joins and meets exist for this representation.
    pub fn is_lattice_ordered(&self) -> bool {
        match self {
            Group::Rational(_) | Group::Chang(_) => true,
            Group::Lex(a, b) => a.is_linear() && b.is_lattice_ordered(),
        }
    }

    pub fn join(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.lattice_op(x, y, true)
    }

    pub fn meet(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.lattice_op(x, y, false)
    }

    fn lattice_op(&self, x: &GroupElement, y: &GroupElement, join: bool) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        if !self.is_lattice_ordered() {
            return Err(MvError::NotALattice(format!(
                "{}: the first lexicographic factor is not linearly ordered",
                self.name()
            )));
        }
        Ok(self.lattice_raw(x, y, join))
    }

    fn lattice_raw(&self, x: &GroupElement, y: &GroupElement, join: bool) -> GroupElement {
        match (self, x, y) {
            (Group::Rational(_), GroupElement::Vector(a), GroupElement::Vector(b)) => {
                GroupElement::Vector(
                    a.iter()
                        .zip(b)
                        .map(|(p, q)| {
                            if (p < q) == join {
                                q.clone()
                            } else {
                                p.clone()
                            }
                        })
                        .collect(),
                )
            }
            (Group::Lex(g1, g2), GroupElement::Pair(a1, a2), GroupElement::Pair(b1, b2)) => {
                if a1 == b1 {
                    GroupElement::Pair(a1.clone(), Box::new(g2.lattice_raw(a2, b2, join)))
                } else if g1.leq_raw(a1, b1) == join {
                    y.clone()
                } else {
                    x.clone()
                }
            }
            (Group::Chang(m), GroupElement::Chang(a), GroupElement::Chang(b)) => {
                // (a⁺ − a⁻) ∨ (b⁺ − b⁻) = ((a⁺ + b⁻) ∨ (b⁺ + a⁻)) − (a⁻ + b⁻)
                let l = a.pos.add(m, &b.neg);
                let r = b.pos.add(m, &a.neg);
                let top = if join { l.join(m, &r) } else { l.meet(m, &r) };
                chang_normalize(m, top, a.neg.add(m, &b.neg))
            }
            _ => unreachable!("checked membership"),
        }
    }

    pub fn format(&self, x: &GroupElement) -> String {
        match (self, x) {
            (Group::Rational(_), GroupElement::Vector(v)) if v.len() == 1 => {
                rational::to_short(&v[0])
            }
            (Group::Rational(_), GroupElement::Vector(v)) => {
                let parts: Vec<String> = v.iter().map(rational::to_short).collect();
                format!("({})", parts.join(", "))
            }
            (Group::Lex(g1, g2), GroupElement::Pair(a, b)) => {
                format!("<{}, {}>", g1.format(a), g2.format(b))
            }
            (Group::Chang(m), GroupElement::Chang(c)) => {
                let mut s = String::from("g(");
                let fmt = |seq: &GoodSequence| {
                    seq.entries()
                        .iter()
                        .map(|&i| m.format_value(&Value::Index(i)))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                let _ = write!(s, "{} | {})", fmt(&c.pos), fmt(&c.neg));
                s
            }
            _ => format!("{x:?}"),
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        let bad = |m: &str| MvError::Parse {
            line: 0,
            message: format!("{m}: `{s}`"),
        };
        let x = match self {
            Group::Rational(r) => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .unwrap_or(s);
                let parts = split_top_level(inner);
                if parts.len() != r.rank() {
                    return Err(bad("wrong number of coordinates"));
                }
                GroupElement::Vector(
                    parts
                        .iter()
                        .map(|p| rational::parse(p))
                        .collect::<Result<_>>()?,
                )
            }
            Group::Lex(g1, g2) => {
                let inner = s
                    .strip_prefix('<')
                    .and_then(|t| t.strip_suffix('>'))
                    .ok_or_else(|| bad("expected <g1, g2>"))?;
                let parts = split_top_level(inner);
                if parts.len() != 2 {
                    return Err(bad("expected two components"));
                }
                GroupElement::Pair(
                    Box::new(g1.parse_element(parts[0])?),
                    Box::new(g2.parse_element(parts[1])?),
                )
            }
            Group::Chang(m) => {
                let inner = s
                    .strip_prefix("g(")
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| bad("expected g(x, … | y, …)"))?;
                let (p, n) = inner.split_once('|').ok_or_else(|| bad("missing `|`"))?;
                let seq = |t: &str| -> Result<GoodSequence> {
                    let t = t.trim();
                    let entries = if t.is_empty() {
                        Vec::new()
                    } else {
                        split_top_level(t)
                            .into_iter()
                            .map(|e| m.parse_element(e))
                            .collect::<Result<Vec<_>>>()?
                    };
                    GoodSequence::new(m, &entries)
                };
                chang_normalize(m, seq(p)?, seq(n)?)
            }
        };
        if !self.contains(&x) {
            return Err(bad("not in the group"));
        }
        Ok(x)
    }

    /// Canonical representative (normal form for Chang elements).
    pub fn canonical(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(match (self, x) {
            (Group::Chang(m), GroupElement::Chang(c)) => {
                chang_normalize(m, c.pos.clone(), c.neg.clone())
            }
            _ => x.clone(),
        })
    }
}

/// Subtracts the largest common summand `a ∧ b` from both sides.
fn chang_normalize(m: &Algebra, pos: GoodSequence, neg: GoodSequence) -> GroupElement {
    let common = pos.meet(m, &neg);
    let pos = pos.subtract(m, &common).expect("meet is a summand");
    let neg = neg.subtract(m, &common).expect("meet is a summand");
    GroupElement::Chang(ChangElement {
        base: m.id(),
        pos,
        neg,
    })
}

/// A group with a strong unit.
#[derive(Clone, Debug)]
pub struct UnitalGroup {
    group: Group,
    unit: GroupElement,
    /// `(generator index, n)` with generator ≤ n·u.
    certificates: Vec<(usize, u64)>,
}

impl UnitalGroup {
    /// Checks that `unit` is a strong unit and records a bound for every
    /// stored generator.
    pub fn new(group: Group, unit: GroupElement) -> Result<UnitalGroup> {
        if !group.contains(&unit) {
            return Err(MvError::InvalidParameter(
                "unit is not a group element".into(),
            ));
        }
        let strong = match (&group, &unit) {
            (Group::Rational(_), GroupElement::Vector(u)) => u.iter().all(Signed::is_positive),
            (Group::Lex(g1, _), GroupElement::Pair(u1, _)) => {
                g1.is_linear() && g1.leq_raw(&g1.zero(), u1) && **u1 != g1.zero()
            }
            (Group::Chang(m), GroupElement::Chang(c)) => {
                c.neg.is_empty() && c.pos == GoodSequence::single(m, m.one_idx())
            }
            _ => false,
        };
        if !strong {
            return Err(MvError::InvalidParameter(format!(
                "{} is not a strong unit of {}",
                group.format(&unit),
                group.name()
            )));
        }
        let mut g = UnitalGroup {
            group,
            unit,
            certificates: Vec::new(),
        };
        if let Group::Rational(r) = &g.group {
            let gens: Vec<GroupElement> = r
                .generators
                .iter()
                .cloned()
                .map(GroupElement::Vector)
                .collect();
            for (i, x) in gens.iter().enumerate() {
                let n = g.unit_bound(x)?;
                g.certificates.push((i, n));
            }
        }
        if !g.recheck_certificates() {
            return Err(MvError::InvalidParameter(
                "strong-unit certificate failed".into(),
            ));
        }
        Ok(g)
    }

    /// (ℤ, 1).
    pub fn integers() -> UnitalGroup {
        UnitalGroup::new(
            Group::integers(),
            GroupElement::Vector(vec![rational::int(1)]),
        )
        .unwrap()
    }

    /// ((1/n)ℤ, 1), whose Γ is Ł_{n+1}.
    pub fn chain_group(n: u32) -> Result<UnitalGroup> {
        if n == 0 {
            return Err(MvError::InvalidParameter("n must be positive".into()));
        }
        UnitalGroup::new(
            Group::cyclic(rational::rat(1, n as i64))?,
            GroupElement::Vector(vec![rational::int(1)]),
        )
    }

    /// (ℚᵏ, u).
    pub fn dense(unit: Vec<Rational>) -> Result<UnitalGroup> {
        UnitalGroup::new(Group::dense(unit.len()), GroupElement::Vector(unit))
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn unit(&self) -> &GroupElement {
        &self.unit
    }

    pub fn certificates(&self) -> &[(usize, u64)] {
        &self.certificates
    }

    pub fn recheck_certificates(&self) -> bool {
        let Group::Rational(r) = &self.group else {
            return self.certificates.is_empty();
        };
        self.certificates.iter().all(|&(i, n)| {
            let g = GroupElement::Vector(r.generators[i].clone());
            let nu = self.group.times(n as i64, &self.unit).unwrap();
            self.group.leq_raw(&g, &nu)
        })
    }

    /// A concrete `n` with `g ≤ n·u`.
    pub fn unit_bound(&self, g: &GroupElement) -> Result<u64> {
        self.group.check(g)?;
        let n = match (&self.group, g, &self.unit) {
            (Group::Rational(_), GroupElement::Vector(v), GroupElement::Vector(u)) => v
                .iter()
                .zip(u)
                .map(|(x, y)| rational::ceil(&(x / y)).to_i64().unwrap_or(i64::MAX).max(0) as u64)
                .max()
                .unwrap_or(0),
            (Group::Lex(g1, _), GroupElement::Pair(x1, _), GroupElement::Pair(u1, _)) => {
                // smallest n with x₁ < n·u₁ in the linear first factor
                let mut n = 0u64;
                let mut acc = g1.zero();
                while g1.leq_raw(&acc, x1) {
                    acc = g1.add_raw(&acc, u1);
                    n += 1;
                }
                n
            }
            (Group::Chang(_), GroupElement::Chang(c), _) => c.pos.len() as u64,
            _ => unreachable!(),
        };
        let nu = self.group.times(n as i64, &self.unit)?;
        debug_assert!(self.group.leq_raw(g, &nu));
        Ok(n)
    }

    pub fn name(&self) -> String {
        format!("({}, {})", self.group.name(), self.group.format(&self.unit))
    }

    pub fn zero(&self) -> GroupElement {
        self.group.zero()
    }

    pub fn leq(&self, x: &GroupElement, y: &GroupElement) -> Result<bool> {
        self.group.leq(x, y)
    }

    pub fn in_interval(&self, x: &GroupElement) -> bool {
        self.group.contains(x)
            && self.group.leq_raw(&self.group.zero(), x)
            && self.group.leq_raw(x, &self.unit)
    }

    /// `(x + y) ∧ u`.
    pub fn truncated_add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let s = self.group.add(x, y)?;
        self.group.meet(&s, &self.unit)
    }

    /// `u − x`.
    pub fn complement(&self, x: &GroupElement) -> Result<GroupElement> {
        self.group.sub(&self.unit, x)
    }

    pub fn is_lattice_ordered(&self) -> bool {
        self.group.is_lattice_ordered()
    }

    pub fn format(&self, x: &GroupElement) -> String {
        self.group.format(x)
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        self.group.parse_element(s)
    }

    pub fn canonical(&self, x: &GroupElement) -> Result<GroupElement> {
        self.group.canonical(x)
    }

    /// The interval `[0, u]` when it is finite and has at most `cap`
    /// elements; `None` otherwise.
    pub fn interval_elements(&self, cap: usize) -> Result<Option<Vec<GroupElement>>> {
        match (&self.group, &self.unit) {
            (Group::Rational(r), GroupElement::Vector(u)) => {
                let mut axes: Vec<Vec<Rational>> = Vec::new();
                let mut total: usize = 1;
                for (c, ui) in r.coords.iter().zip(u) {
                    let Coord::Cyclic(s) = c else {
                        return Ok(None);
                    };
                    let steps = (ui / s).to_integer().to_usize();
                    let Some(steps) = steps.filter(|&k| k < cap) else {
                        return Ok(None);
                    };
                    total = total.saturating_mul(steps + 1);
                    if total > cap {
                        return Ok(None);
                    }
                    axes.push(
                        (0..=steps)
                            .map(|k| s * Rational::from_integer(k.into()))
                            .collect(),
                    );
                }
                let mut out = vec![Vec::new()];
                for axis in axes {
                    out = out
                        .into_iter()
                        .flat_map(|p: Vec<Rational>| {
                            axis.iter().map(move |q| {
                                let mut p = p.clone();
                                p.push(q.clone());
                                p
                            })
                        })
                        .collect();
                }
                Ok(Some(out.into_iter().map(GroupElement::Vector).collect()))
            }
            (Group::Lex(..), _) => Ok(None),
            (Group::Chang(m), _) => {
                m.finite_size("Chang groups")?;
                // candidates: positive elements given by good sequences of
                // length ≤ 2, filtered by x ≤ u
                let mut out = Vec::new();
                for s in all_good_sequences(m, 2)? {
                    let x = chang_normalize(m, s, GoodSequence::empty());
                    if self.in_interval(&x) && !out.contains(&x) {
                        out.push(x);
                    }
                }
                if out.len() > cap {
                    return Ok(None);
                }
                Ok(Some(out))
            }
            _ => unreachable!(),
        }
    }
}

/// Γ(G, u).
pub fn gamma(g: UnitalGroup) -> Result<Algebra> {
    Algebra::gamma_raw(g)
}

/// Ξ(M): the Chang group of a finite algebra with unit `(1)`.
pub fn xi(base: &Algebra) -> Result<UnitalGroup> {
    base.finite_size("Chang groups")?;
    let group = Group::Chang(base.clone());
    let unit = chang_normalize(
        base,
        GoodSequence::single(base, base.one_idx()),
        GoodSequence::empty(),
    );
    UnitalGroup::new(group, unit)
}

/// The class of the one-term sequence `(x)` in Ξ(M).
pub fn chang_embed(base: &Algebra, x: usize) -> GroupElement {
    chang_normalize(base, GoodSequence::single(base, x), GoodSequence::empty())
}

/// Ξ(f): apply `f` entrywise to both good sequences.
pub fn xi_map(f: &Hom, x: &GroupElement) -> Result<GroupElement> {
    let GroupElement::Chang(c) = x else {
        return Err(MvError::UnsupportedKind(
            "Xi on morphisms needs Chang groups".into(),
        ));
    };
    let (a, b) = (f.source(), f.target());
    if c.base != a.id() {
        return Err(MvError::ForeignElement);
    }
    b.finite_size("Chang groups")?;
    let map = |s: &GoodSequence| -> Result<GoodSequence> {
        let v = s
            .entries()
            .iter()
            .map(|&i| f.images()[i].index().ok_or(MvError::ForeignElement))
            .collect::<Result<Vec<_>>>()?;
        GoodSequence::from_indices(b, v)
    };
    Ok(chang_normalize(b, map(&c.pos)?, map(&c.neg)?))
}

/// The natural map `x ↦ (x)` from M onto Γ(Ξ(M)), verified to be a
/// bijective homomorphism.
pub fn mundici_roundtrip(base: &Algebra) -> Result<(Algebra, Hom)> {
    let n = base.finite_size("round trip")?;
    if n > ROUNDTRIP_CAP {
        return Err(MvError::TooLarge {
            what: format!("round trip of {}", base.name()),
            size: n,
            cap: ROUNDTRIP_CAP,
        });
    }
    let g = gamma(xi(base)?)?;
    if g.size() != Some(n) {
        return Err(MvError::RoundTripFailure(format!(
            "[0, u] has {:?} elements, base has {n}",
            g.size()
        )));
    }
    let images = (0..n)
        .into_par_iter()
        .map(|x| {
            g.gamma_index(&chang_embed(base, x))
                .map(Value::Index)
                .ok_or_else(|| MvError::RoundTripFailure(format!("({x}) is not in [0, u]")))
        })
        .collect::<Result<Vec<_>>>()?;
    let hom = Hom::new(base.clone(), g.clone(), images, HomOrigin::RoundTrip)
        .map_err(|e| MvError::RoundTripFailure(e.to_string()))?;
    if !hom.is_injective() || !hom.is_surjective()? {
        return Err(MvError::RoundTripFailure(
            "natural map is not bijective".into(),
        ));
    }
    Ok((g, hom))
}

#[cfg(test)]
mod tests;
