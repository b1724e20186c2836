//! MV-algebras and their concrete representations.
//!
//! An [`Algebra`] is an immutable, cheaply clonable handle. Finite algebras
//! index their carrier `0..size` in canonical order: a linear extension of the
//! lattice order, so index `0` is always the bottom and `size - 1` the top.
//! Elements are tagged with the identity of the algebra that produced them and
//! every public operation rejects foreign elements.

mod order;
mod subalgebra;
mod verify;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{MvError, Result};
use crate::ideals::Ideal;
use crate::lgroup::{GroupElement, UnitalGroup};
use crate::rational::{self, Rational};

pub use order::linear_extension;
pub use subalgebra::{classify, generate_subalgebra, Classification};
pub(crate) use subalgebra::{close_indices, restrict};
pub use verify::{first_violation, verify_axioms, Certificate, VerificationReport};

/// Largest finite carrier that may be expanded into an explicit table.
pub const MATERIALIZE_CAP: usize = 10_000;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraId(u64);

impl AlgebraId {
    fn fresh() -> Self {
        AlgebraId(NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed))
    }
}

/// Payload of an element. Finite algebras always use `Index`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Index(usize),
    Rational(Rational),
    Tuple(Vec<Value>),
    Group(GroupElement),
}

impl Value {
    pub fn index(&self) -> Option<usize> {
        match self {
            Value::Index(i) => Some(*i),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    algebra: AlgebraId,
    value: Value,
}

impl Element {
    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    /// Carrier index for elements of finite algebras.
    pub fn index(&self) -> Option<usize> {
        self.value.index()
    }
}

/// Raw operation tables as supplied by a user, before verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableSpec {
    pub size: usize,
    /// Row-major `size * size` table.
    pub oplus: Vec<usize>,
    pub neg: Vec<usize>,
    pub zero: usize,
    pub one: usize,
}

impl TableSpec {
    pub fn oplus(&self, x: usize, y: usize) -> usize {
        self.oplus[x * self.size + y]
    }
}

/// A verified operation table in canonical order.
#[derive(Clone, Debug)]
pub struct Table {
    size: usize,
    oplus: Vec<usize>,
    neg: Vec<usize>,
    /// canonical index -> index in the user's table
    original: Vec<usize>,
}

impl Table {
    pub fn original_index(&self, i: usize) -> usize {
        self.original[i]
    }
}

#[derive(Clone, Debug)]
pub struct QuotientData {
    base: Algebra,
    ideal: Ideal,
    /// base index -> class index
    class_of: Vec<usize>,
    /// class index -> least base representative
    reps: Vec<usize>,
}

impl QuotientData {
    pub fn base(&self) -> &Algebra {
        &self.base
    }
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }
    pub fn class_of(&self, base_index: usize) -> usize {
        self.class_of[base_index]
    }
    pub fn representative(&self, class: usize) -> usize {
        self.reps[class]
    }
}

#[derive(Clone, Debug)]
pub struct GammaCarrier {
    elems: Vec<GroupElement>,
    lookup: HashMap<GroupElement, usize>,
}

#[derive(Clone, Debug)]
pub struct GammaData {
    group: UnitalGroup,
    carrier: Option<GammaCarrier>,
}

impl GammaData {
    pub fn group(&self) -> &UnitalGroup {
        &self.group
    }
    pub fn carrier(&self) -> Option<&[GroupElement]> {
        self.carrier.as_ref().map(|c| c.elems.as_slice())
    }
}

#[derive(Clone, Debug)]
pub enum Kind {
    Table(Table),
    /// Ł_{n+1} = Γ((1/n)ℤ, 1), carrier {0, 1/n, …, 1}.
    Chain {
        n: u32,
    },
    /// Γ(ℚ, 1) = ℚ ∩ [0, 1].
    RationalChain,
    Product {
        factors: Vec<Algebra>,
        /// mixed-radix strides, present when every factor is finite
        strides: Option<Vec<usize>>,
    },
    Quotient(QuotientData),
    Gamma(GammaData),
}

struct Inner {
    id: AlgebraId,
    name: String,
    kind: Kind,
    size: Option<usize>,
}

#[derive(Clone)]
pub struct Algebra {
    inner: Arc<Inner>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({} #{})", self.inner.name, self.inner.id.0)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}
impl Eq for Algebra {}

/// Requests understood by [`construct_standard`].
#[derive(Clone, Debug)]
pub enum Construction {
    Chain(u32),
    RationalChain,
    Boolean(u32),
    Trivial,
    Product(Vec<Algebra>),
    Table(TableSpec),
}

pub fn construct_standard(request: Construction) -> Result<Algebra> {
    match request {
        Construction::Chain(n) => Algebra::chain(n),
        Construction::RationalChain => Ok(Algebra::rational_chain()),
        Construction::Boolean(k) => Algebra::boolean(k),
        Construction::Trivial => Ok(Algebra::trivial()),
        Construction::Product(f) => Algebra::product(f),
        Construction::Table(t) => Algebra::from_table(t),
    }
}

/// Operations accepted by [`Algebra::op_eval`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Oplus,
    Neg,
    Odot,
    Ominus,
    Join,
    Meet,
    Leq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpResult {
    Element(Element),
    Bool(bool),
}

/// `n.x` (truncated sum) or `xⁿ` (truncated product).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Sum,
    Power,
}

impl Algebra {
    fn build(name: impl Into<String>, kind: Kind, size: Option<usize>) -> Algebra {
        Algebra {
            inner: Arc::new(Inner {
                id: AlgebraId::fresh(),
                name: name.into(),
                kind,
                size,
            }),
        }
    }

    /// The Łukasiewicz chain Ł_{n+1}.
    pub fn chain(n: u32) -> Result<Algebra> {
        if n == 0 {
            return Err(MvError::InvalidParameter(
                "chain parameter n must be at least 1".into(),
            ));
        }
        Ok(Algebra::build(
            format!("L{}", n + 1),
            Kind::Chain { n },
            Some(n as usize + 1),
        ))
    }

    pub fn rational_chain() -> Algebra {
        Algebra::build("Q[0,1]", Kind::RationalChain, None)
    }

    /// The Boolean algebra 2^k as a product of k copies of Ł₂.
    pub fn boolean(k: u32) -> Result<Algebra> {
        if k == 0 {
            return Err(MvError::InvalidParameter(
                "Boolean exponent must be at least 1".into(),
            ));
        }
        if k == 1 {
            return Algebra::chain(1);
        }
        let factors = (0..k)
            .map(|_| Algebra::chain(1))
            .collect::<Result<Vec<_>>>()?;
        let alg = Algebra::product(factors)?;
        Ok(alg.renamed(format!("2^{k}")))
    }

    /// The one-element algebra (0 = 1).
    pub fn trivial() -> Algebra {
        Algebra::build(
            "1",
            Kind::Table(Table {
                size: 1,
                oplus: vec![0],
                neg: vec![0],
                original: vec![0],
            }),
            Some(1),
        )
    }

    pub fn product(factors: Vec<Algebra>) -> Result<Algebra> {
        if factors.is_empty() {
            return Err(MvError::InvalidParameter(
                "product needs at least one factor".into(),
            ));
        }
        let name = factors
            .iter()
            .map(|f| f.name().to_string())
            .collect::<Vec<_>>()
            .join("x");
        let sizes: Option<Vec<usize>> = factors.iter().map(|f| f.size()).collect();
        let (strides, size) = match sizes {
            Some(sizes) => {
                let mut strides = vec![1usize; sizes.len()];
                let mut total: usize = 1;
                for i in (0..sizes.len()).rev() {
                    strides[i] = total;
                    total = total
                        .checked_mul(sizes[i])
                        .ok_or_else(|| MvError::TooLarge {
                            what: "product".into(),
                            size: usize::MAX,
                            cap: usize::MAX,
                        })?;
                }
                (Some(strides), Some(total))
            }
            None => (None, None),
        };
        Ok(Algebra::build(
            name,
            Kind::Product { factors, strides },
            size,
        ))
    }

    /// Verifies a user-supplied table and relabels it into canonical order.
    pub fn from_table(spec: TableSpec) -> Result<Algebra> {
        Algebra::from_table_named("table", spec)
    }

    pub fn from_table_named(name: impl Into<String>, spec: TableSpec) -> Result<Algebra> {
        check_table_shape(&spec)?;
        if let Some((axiom, witness)) = first_violation(&spec) {
            return Err(MvError::AxiomViolation { axiom, witness });
        }
        let n = spec.size;
        let leq = |x: usize, y: usize| spec.oplus(spec.neg[x], y) == spec.one;
        let order = linear_extension(n, leq);
        Ok(Algebra::build(
            name,
            Kind::Table(relabel(&spec, &order)),
            Some(n),
        ))
    }

    pub(crate) fn quotient_raw(
        base: Algebra,
        ideal: Ideal,
        class_of: Vec<usize>,
        reps: Vec<usize>,
    ) -> Algebra {
        let name = format!("{}/I", base.name());
        let size = reps.len();
        Algebra::build(
            name,
            Kind::Quotient(QuotientData {
                base,
                ideal,
                class_of,
                reps,
            }),
            Some(size),
        )
    }

    /// Γ(G, u). The carrier is enumerated when it is finite and at most
    /// [`MATERIALIZE_CAP`] elements.
    pub(crate) fn gamma_raw(group: UnitalGroup) -> Result<Algebra> {
        let carrier = match group.interval_elements(MATERIALIZE_CAP)? {
            Some(elems) => {
                let n = elems.len();
                let leq = |x: usize, y: usize| group.leq(&elems[x], &elems[y]).unwrap_or(false);
                let order = linear_extension(n, leq);
                let elems: Vec<GroupElement> = order.iter().map(|&i| elems[i].clone()).collect();
                let lookup = elems
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (e.clone(), i))
                    .collect();
                Some(GammaCarrier { elems, lookup })
            }
            None => None,
        };
        let size = carrier.as_ref().map(|c| c.elems.len());
        let name = format!("Gamma({})", group.name());
        Ok(Algebra::build(
            name,
            Kind::Gamma(GammaData { group, carrier }),
            size,
        ))
    }

    /// Carrier index of an interval element of a finite Γ(G, u).
    pub(crate) fn gamma_index(&self, x: &GroupElement) -> Option<usize> {
        match self.kind() {
            Kind::Gamma(g) => {
                let c = g.carrier.as_ref()?;
                let x = g.group.canonical(x).ok()?;
                c.lookup.get(&x).copied()
            }
            _ => None,
        }
    }

    /// Interval element behind a carrier index of a finite Γ(G, u).
    pub(crate) fn gamma_element(&self, i: usize) -> GroupElement {
        match self.kind() {
            Kind::Gamma(g) => g.carrier.as_ref().expect("finite gamma").elems[i].clone(),
            _ => panic!("not a gamma algebra"),
        }
    }

    /// Same algebra, new name and identity.
    pub fn renamed(&self, name: impl Into<String>) -> Algebra {
        Algebra::build(name, self.inner.kind.clone(), self.inner.size)
    }

    pub fn id(&self) -> AlgebraId {
        self.inner.id
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn kind(&self) -> &Kind {
        &self.inner.kind
    }

    pub fn size(&self) -> Option<usize> {
        self.inner.size
    }

    pub fn is_finite(&self) -> bool {
        self.inner.size.is_some()
    }

    pub(crate) fn finite_size(&self, what: &str) -> Result<usize> {
        self.size().ok_or_else(|| {
            MvError::UnsupportedKind(format!(
                "{what} needs a finite algebra, got {}",
                self.name()
            ))
        })
    }

    /// True for Ł_{n+1} and for ℚ ∩ [0,1]; these have structural answers.
    pub fn is_symbolic_chain(&self) -> bool {
        matches!(self.kind(), Kind::Chain { .. } | Kind::RationalChain)
    }

    pub fn factors(&self) -> Option<&[Algebra]> {
        match self.kind() {
            Kind::Product { factors, .. } => Some(factors),
            _ => None,
        }
    }

    // ----- index-level operations (finite algebras) -----

    pub fn zero_idx(&self) -> usize {
        0
    }

    pub fn one_idx(&self) -> usize {
        self.inner.size.expect("finite algebra") - 1
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        match self.kind() {
            Kind::Table(t) => t.oplus[a * t.size + b],
            Kind::Chain { n } => (a + b).min(*n as usize),
            Kind::Product { factors, strides } => {
                let strides = strides.as_ref().expect("finite product");
                let mut r = 0;
                for (f, &s) in factors.iter().zip(strides) {
                    let m = f.inner.size.unwrap();
                    let da = (a / s) % m;
                    let db = (b / s) % m;
                    r += f.add_idx(da, db) * s;
                }
                r
            }
            Kind::Quotient(q) => q.class_of[q.base.add_idx(q.reps[a], q.reps[b])],
            Kind::Gamma(g) => {
                let c = g.carrier.as_ref().expect("finite gamma");
                let s = g
                    .group
                    .truncated_add(&c.elems[a], &c.elems[b])
                    .expect("interval elements");
                *c.lookup
                    .get(&s)
                    .expect("interval closed under truncated sum")
            }
            Kind::RationalChain => unreachable!("index operation on an infinite algebra"),
        }
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        match self.kind() {
            Kind::Table(t) => t.neg[a],
            Kind::Chain { n } => *n as usize - a,
            Kind::Product { factors, strides } => {
                let strides = strides.as_ref().expect("finite product");
                let mut r = 0;
                for (f, &s) in factors.iter().zip(strides) {
                    let m = f.inner.size.unwrap();
                    r += f.neg_idx((a / s) % m) * s;
                }
                r
            }
            Kind::Quotient(q) => q.class_of[q.base.neg_idx(q.reps[a])],
            Kind::Gamma(g) => {
                let c = g.carrier.as_ref().expect("finite gamma");
                let s = g.group.complement(&c.elems[a]).expect("interval element");
                *c.lookup.get(&s).expect("interval closed under complement")
            }
            Kind::RationalChain => unreachable!("index operation on an infinite algebra"),
        }
    }

    pub fn odot_idx(&self, a: usize, b: usize) -> usize {
        self.neg_idx(self.add_idx(self.neg_idx(a), self.neg_idx(b)))
    }

    pub fn ominus_idx(&self, a: usize, b: usize) -> usize {
        self.neg_idx(self.add_idx(self.neg_idx(a), b))
    }

    pub fn join_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(self.ominus_idx(a, b), b)
    }

    pub fn meet_idx(&self, a: usize, b: usize) -> usize {
        self.odot_idx(a, self.add_idx(self.neg_idx(a), b))
    }

    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.add_idx(self.neg_idx(a), b) == self.one_idx()
    }

    pub fn lt_idx(&self, a: usize, b: usize) -> bool {
        a != b && self.leq_idx(a, b)
    }

    /// n.x on indices.
    pub fn nat_sum_idx(&self, n: u64, a: usize) -> usize {
        let mut acc = self.zero_idx();
        for _ in 0..n {
            let next = self.add_idx(acc, a);
            if next == acc {
                break;
            }
            acc = next;
        }
        acc
    }

    pub fn is_boolean_idx(&self, a: usize) -> bool {
        self.add_idx(a, a) == a
    }

    /// Factor digits of a product index.
    pub fn digits(&self, a: usize) -> Option<Vec<usize>> {
        match self.kind() {
            Kind::Product {
                factors,
                strides: Some(strides),
            } => Some(
                factors
                    .iter()
                    .zip(strides)
                    .map(|(f, &s)| (a / s) % f.inner.size.unwrap())
                    .collect(),
            ),
            _ => None,
        }
    }

    pub fn compose_digits(&self, digits: &[usize]) -> Option<usize> {
        match self.kind() {
            Kind::Product {
                strides: Some(strides),
                ..
            } => Some(digits.iter().zip(strides).map(|(d, s)| d * s).sum()),
            _ => None,
        }
    }

    // ----- value-level operations -----

    pub(crate) fn add_val(&self, a: &Value, b: &Value) -> Value {
        if self.is_finite() {
            return Value::Index(self.add_idx(idx(a), idx(b)));
        }
        match (self.kind(), a, b) {
            (Kind::RationalChain, Value::Rational(x), Value::Rational(y)) => {
                let s = x + y;
                Value::Rational(if s > Rational::one() {
                    Rational::one()
                } else {
                    s
                })
            }
            (Kind::Product { factors, .. }, Value::Tuple(xs), Value::Tuple(ys)) => Value::Tuple(
                factors
                    .iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(f, (x, y))| f.add_val(x, y))
                    .collect(),
            ),
            (Kind::Gamma(g), Value::Group(x), Value::Group(y)) => {
                Value::Group(g.group.truncated_add(x, y).expect("interval elements"))
            }
            _ => unreachable!("value shape does not match {}", self.name()),
        }
    }

    pub(crate) fn neg_val(&self, a: &Value) -> Value {
        if self.is_finite() {
            return Value::Index(self.neg_idx(idx(a)));
        }
        match (self.kind(), a) {
            (Kind::RationalChain, Value::Rational(x)) => Value::Rational(Rational::one() - x),
            (Kind::Product { factors, .. }, Value::Tuple(xs)) => {
                Value::Tuple(factors.iter().zip(xs).map(|(f, x)| f.neg_val(x)).collect())
            }
            (Kind::Gamma(g), Value::Group(x)) => {
                Value::Group(g.group.complement(x).expect("interval element"))
            }
            _ => unreachable!("value shape does not match {}", self.name()),
        }
    }

    pub(crate) fn zero_val(&self) -> Value {
        if self.is_finite() {
            return Value::Index(0);
        }
        match self.kind() {
            Kind::RationalChain => Value::Rational(Rational::zero()),
            Kind::Product { factors, .. } => {
                Value::Tuple(factors.iter().map(|f| f.zero_val()).collect())
            }
            Kind::Gamma(g) => Value::Group(g.group.zero()),
            _ => unreachable!(),
        }
    }

    pub(crate) fn one_val(&self) -> Value {
        if self.is_finite() {
            return Value::Index(self.one_idx());
        }
        self.neg_val(&self.zero_val())
    }

    pub(crate) fn odot_val(&self, a: &Value, b: &Value) -> Value {
        self.neg_val(&self.add_val(&self.neg_val(a), &self.neg_val(b)))
    }

    pub(crate) fn ominus_val(&self, a: &Value, b: &Value) -> Value {
        self.neg_val(&self.add_val(&self.neg_val(a), b))
    }

    pub(crate) fn join_val(&self, a: &Value, b: &Value) -> Value {
        self.add_val(&self.ominus_val(a, b), b)
    }

    pub(crate) fn meet_val(&self, a: &Value, b: &Value) -> Value {
        self.odot_val(a, &self.add_val(&self.neg_val(a), b))
    }

    pub(crate) fn leq_val(&self, a: &Value, b: &Value) -> bool {
        self.add_val(&self.neg_val(a), b) == self.one_val()
    }

    pub(crate) fn nat_sum_val(&self, n: u64, a: &Value) -> Value {
        let mut acc = self.zero_val();
        let one = self.one_val();
        for _ in 0..n {
            acc = self.add_val(&acc, a);
            if acc == one {
                break;
            }
        }
        acc
    }

    pub(crate) fn power_val(&self, n: u64, a: &Value) -> Value {
        let mut acc = self.one_val();
        let zero = self.zero_val();
        for _ in 0..n {
            acc = self.odot_val(&acc, a);
            if acc == zero {
                break;
            }
        }
        acc
    }

    /// Checks that a raw value is an element of this algebra.
    pub fn contains_value(&self, v: &Value) -> bool {
        match (self.kind(), v) {
            (_, Value::Index(i)) if self.is_finite() => *i < self.inner.size.unwrap(),
            (Kind::RationalChain, Value::Rational(q)) => rational::in_unit_interval(q),
            (Kind::Product { factors, .. }, Value::Tuple(xs)) if !self.is_finite() => {
                xs.len() == factors.len()
                    && factors.iter().zip(xs).all(|(f, x)| f.contains_value(x))
            }
            (Kind::Gamma(g), Value::Group(x)) if !self.is_finite() => g.group.in_interval(x),
            _ => false,
        }
    }

    // ----- element API -----

    pub fn wrap(&self, value: Value) -> Result<Element> {
        if !self.contains_value(&value) {
            return Err(MvError::NotAMember(format!("{value:?} in {}", self.name())));
        }
        Ok(Element {
            algebra: self.id(),
            value,
        })
    }

    pub(crate) fn wrap_unchecked(&self, value: Value) -> Element {
        Element {
            algebra: self.id(),
            value,
        }
    }

    pub fn element(&self, i: usize) -> Result<Element> {
        self.wrap(Value::Index(i))
    }

    /// All elements of a finite algebra in canonical order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        let n = self.finite_size("enumeration")?;
        Ok((0..n)
            .map(|i| self.wrap_unchecked(Value::Index(i)))
            .collect())
    }

    pub fn zero(&self) -> Element {
        self.wrap_unchecked(self.zero_val())
    }

    pub fn one(&self) -> Element {
        self.wrap_unchecked(self.one_val())
    }

    /// The element with rational value `q` of a chain (or ℚ ∩ [0,1]).
    pub fn rational(&self, q: &Rational) -> Result<Element> {
        match self.kind() {
            Kind::Chain { n } => {
                let scaled = q * Rational::from_integer((*n).into());
                if !scaled.is_integer() || !rational::in_unit_interval(q) {
                    return Err(MvError::NotAMember(format!(
                        "{} in {}",
                        rational::to_text(q),
                        self.name()
                    )));
                }
                let i: usize = scaled.to_integer().try_into().expect("bounded by n");
                Ok(self.wrap_unchecked(Value::Index(i)))
            }
            Kind::RationalChain => self.wrap(Value::Rational(q.clone())),
            _ => Err(MvError::UnsupportedKind(format!(
                "{} is not a rational chain",
                self.name()
            ))),
        }
    }

    /// Rational value of a chain element.
    pub fn rational_value(&self, x: &Element) -> Option<Rational> {
        match (self.kind(), &x.value) {
            (Kind::Chain { n }, Value::Index(i)) => Some(rational::rat(*i as i64, *n as i64)),
            (Kind::RationalChain, Value::Rational(q)) => Some(q.clone()),
            _ => None,
        }
    }

    /// Builds a product element from factor elements.
    pub fn tuple(&self, parts: &[Element]) -> Result<Element> {
        let factors = self
            .factors()
            .ok_or_else(|| MvError::UnsupportedKind(format!("{} is not a product", self.name())))?;
        if parts.len() != factors.len() {
            return Err(MvError::InvalidParameter(
                "wrong number of components".into(),
            ));
        }
        for (f, p) in factors.iter().zip(parts) {
            f.check(p)?;
        }
        if self.is_finite() {
            let digits: Vec<usize> = parts.iter().map(|p| idx(&p.value)).collect();
            Ok(self.wrap_unchecked(Value::Index(self.compose_digits(&digits).unwrap())))
        } else {
            Ok(self.wrap_unchecked(Value::Tuple(
                parts.iter().map(|p| p.value.clone()).collect(),
            )))
        }
    }

    /// Factor components of a product element.
    pub fn components(&self, x: &Element) -> Result<Vec<Element>> {
        self.check(x)?;
        let factors = self
            .factors()
            .ok_or_else(|| MvError::UnsupportedKind(format!("{} is not a product", self.name())))?;
        Ok(match &x.value {
            Value::Index(i) => self
                .digits(*i)
                .unwrap()
                .into_iter()
                .zip(factors)
                .map(|(d, f)| f.wrap_unchecked(Value::Index(d)))
                .collect(),
            Value::Tuple(xs) => xs
                .iter()
                .zip(factors)
                .map(|(v, f)| f.wrap_unchecked(v.clone()))
                .collect(),
            _ => unreachable!(),
        })
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if x.algebra != self.id() {
            return Err(MvError::ForeignElement);
        }
        Ok(())
    }

    pub fn oplus(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap_unchecked(self.add_val(&x.value, &y.value)))
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.wrap_unchecked(self.neg_val(&x.value)))
    }

    pub fn odot(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap_unchecked(self.odot_val(&x.value, &y.value)))
    }

    pub fn ominus(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap_unchecked(self.ominus_val(&x.value, &y.value)))
    }

    pub fn join(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap_unchecked(self.join_val(&x.value, &y.value)))
    }

    pub fn meet(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap_unchecked(self.meet_val(&x.value, &y.value)))
    }

    pub fn leq(&self, x: &Element, y: &Element) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.leq_val(&x.value, &y.value))
    }

    /// Evaluates a basic or derived operation; binary operations need `y`.
    pub fn op_eval(&self, op: Op, x: &Element, y: Option<&Element>) -> Result<OpResult> {
        let need_y =
            || y.ok_or_else(|| MvError::InvalidParameter(format!("{op:?} needs two arguments")));
        Ok(match op {
            Op::Neg => OpResult::Element(self.neg(x)?),
            Op::Oplus => OpResult::Element(self.oplus(x, need_y()?)?),
            Op::Odot => OpResult::Element(self.odot(x, need_y()?)?),
            Op::Ominus => OpResult::Element(self.ominus(x, need_y()?)?),
            Op::Join => OpResult::Element(self.join(x, need_y()?)?),
            Op::Meet => OpResult::Element(self.meet(x, need_y()?)?),
            Op::Leq => OpResult::Bool(self.leq(x, need_y()?)?),
        })
    }

    /// `n.x` (with `0.x = 0`) or `xⁿ` (with `x⁰ = 1`, `x¹ = x`).
    pub fn nat_scalar(&self, n: u64, x: &Element, mode: ScalarMode) -> Result<Element> {
        self.check(x)?;
        Ok(self.wrap_unchecked(match mode {
            ScalarMode::Sum => self.nat_sum_val(n, &x.value),
            ScalarMode::Power => self.power_val(n, &x.value),
        }))
    }

    pub fn is_boolean(&self, x: &Element) -> Result<bool> {
        Ok(self.oplus(x, x)? == *x)
    }

    // ----- text form -----

    pub fn format_value(&self, v: &Value) -> String {
        match (self.kind(), v) {
            (Kind::Chain { n }, Value::Index(i)) => {
                rational::to_short(&rational::rat(*i as i64, *n as i64))
            }
            (Kind::Table(t), Value::Index(i)) => format!("#{}", t.original[*i]),
            (Kind::Product { factors, .. }, Value::Index(i)) => {
                let parts: Vec<String> = self
                    .digits(*i)
                    .unwrap()
                    .iter()
                    .zip(factors)
                    .map(|(d, f)| f.format_value(&Value::Index(*d)))
                    .collect();
                format!("({})", parts.join(", "))
            }
            (Kind::Product { factors, .. }, Value::Tuple(xs)) => {
                let parts: Vec<String> = xs
                    .iter()
                    .zip(factors)
                    .map(|(x, f)| f.format_value(x))
                    .collect();
                format!("({})", parts.join(", "))
            }
            (Kind::Quotient(q), Value::Index(i)) => {
                format!("[{}]", q.base.format_value(&Value::Index(q.reps[*i])))
            }
            (Kind::Gamma(g), Value::Index(i)) => {
                g.group.format(&g.carrier.as_ref().unwrap().elems[*i])
            }
            (Kind::Gamma(g), Value::Group(x)) => g.group.format(x),
            (Kind::RationalChain, Value::Rational(q)) => rational::to_short(q),
            (_, v) => format!("{v:?}"),
        }
    }

    pub fn format(&self, x: &Element) -> String {
        self.format_value(&x.value)
    }

    /// Parses the text form produced by [`Algebra::format`] (plus a few
    /// conveniences: bare indices for tables, base literals for quotients).
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let s = s.trim();
        let bad = |m: &str| MvError::Parse {
            line: 0,
            message: format!("cannot read `{s}` as an element of {}: {m}", self.name()),
        };
        match self.kind() {
            Kind::Chain { .. } | Kind::RationalChain => self.rational(&rational::parse(s)?),
            Kind::Table(t) => {
                let k: usize = s
                    .trim_start_matches('#')
                    .parse()
                    .map_err(|_| bad("expected index"))?;
                let pos = t
                    .original
                    .iter()
                    .position(|&o| o == k)
                    .ok_or_else(|| bad("index out of range"))?;
                self.element(pos)
            }
            Kind::Product { factors, .. } => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| bad("expected a parenthesized tuple"))?;
                let parts = split_top_level(inner);
                if parts.len() != factors.len() {
                    return Err(bad("wrong number of components"));
                }
                let elems = factors
                    .iter()
                    .zip(parts)
                    .map(|(f, p)| f.parse_element(p))
                    .collect::<Result<Vec<_>>>()?;
                self.tuple(&elems)
            }
            Kind::Quotient(q) => {
                let inner = s
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .unwrap_or(s);
                let b = q.base.parse_element(inner)?;
                self.element(q.class_of[idx(&b.value)])
            }
            Kind::Gamma(g) => {
                let x = g.group.parse_element(s)?;
                if !g.group.in_interval(&x) {
                    return Err(bad("outside [0,u]"));
                }
                match &g.carrier {
                    Some(c) => {
                        let x = g.group.canonical(&x)?;
                        let i = c.lookup.get(&x).ok_or_else(|| bad("not in the interval"))?;
                        self.element(*i)
                    }
                    None => self.wrap(Value::Group(x)),
                }
            }
        }
    }

    /// Expands a finite algebra into an explicit table (in canonical order).
    pub fn materialize(&self) -> Result<Algebra> {
        let n = self.finite_size("materialization")?;
        if n > MATERIALIZE_CAP {
            return Err(MvError::TooLarge {
                what: format!("materialization of {}", self.name()),
                size: n,
                cap: MATERIALIZE_CAP,
            });
        }
        Ok(Algebra::build(
            format!("{}*", self.name()),
            Kind::Table(Table {
                size: n,
                oplus: (0..n * n).map(|k| self.add_idx(k / n, k % n)).collect(),
                neg: (0..n).map(|i| self.neg_idx(i)).collect(),
                original: (0..n).collect(),
            }),
            Some(n),
        ))
    }

    /// Raw tables of a finite algebra, indexed canonically.
    pub fn table_spec(&self) -> Result<TableSpec> {
        let n = self.finite_size("table export")?;
        if n > MATERIALIZE_CAP {
            return Err(MvError::TooLarge {
                what: format!("table of {}", self.name()),
                size: n,
                cap: MATERIALIZE_CAP,
            });
        }
        Ok(TableSpec {
            size: n,
            oplus: (0..n * n).map(|k| self.add_idx(k / n, k % n)).collect(),
            neg: (0..n).map(|i| self.neg_idx(i)).collect(),
            zero: 0,
            one: n - 1,
        })
    }
}

pub(crate) fn idx(v: &Value) -> usize {
    match v {
        Value::Index(i) => *i,
        other => unreachable!("expected an index, got {other:?}"),
    }
}

fn check_table_shape(spec: &TableSpec) -> Result<()> {
    let n = spec.size;
    let bad = |m: String| Err(MvError::InvalidParameter(m));
    if n == 0 {
        return bad("empty carrier".into());
    }
    if spec.oplus.len() != n * n {
        return bad(format!(
            "oplus has {} entries, expected {}",
            spec.oplus.len(),
            n * n
        ));
    }
    if spec.neg.len() != n {
        return bad(format!("neg has {} entries, expected {n}", spec.neg.len()));
    }
    if spec.zero >= n || spec.one >= n {
        return bad("constant out of range".into());
    }
    if let Some(v) = spec.oplus.iter().chain(&spec.neg).find(|&&v| v >= n) {
        return bad(format!("table entry {v} out of range"));
    }
    Ok(())
}

fn relabel(spec: &TableSpec, order: &[usize]) -> Table {
    let n = spec.size;
    let mut pos = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let mut oplus = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            oplus[a * n + b] = pos[spec.oplus(order[a], order[b])];
        }
    }
    Table {
        size: n,
        oplus,
        neg: order.iter().map(|&o| pos[spec.neg[o]]).collect(),
        original: order.to_vec(),
    }
}

/// Splits on commas that are not nested inside brackets.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '<' => depth += 1,
            ')' | ']' | '>' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

#[cfg(test)]
mod tests;
