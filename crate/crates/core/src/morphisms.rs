//! Homomorphisms between algebras: verification, enumeration and
//! epimorphism evidence.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{close_indices, Algebra, Element, Value};
use crate::catalog;
use crate::error::{MvError, Result};
use crate::ideals::{ideal_from_members, Ideal};

/// Largest source accepted by [`enumerate_homs`].
pub const HOM_SOURCE_CAP: usize = 64;
/// Largest target accepted by [`enumerate_homs`].
pub const HOM_TARGET_CAP: usize = 256;
/// Default cotarget bound of [`bounded_epi_oracle`].
pub const DEFAULT_EPI_BOUND: usize = 8;

/// How a map came about; used for structural epi rules and reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HomOrigin {
    Enumerated,
    Inclusion,
    Projection,
    Identity,
    Composite,
    HullEmbedding,
    RoundTrip,
    Isomorphism,
    User,
}

/// A homomorphism out of a finite algebra, stored as the image of every
/// carrier index.
#[derive(Clone, Debug)]
pub struct Hom {
    source: Algebra,
    target: Algebra,
    images: Vec<Value>,
    origin: HomOrigin,
}

impl PartialEq for Hom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.images == other.images
    }
}

impl Hom {
    /// Verifies that `images` preserves 0, ⊕ and ′.
    pub fn new(
        source: Algebra,
        target: Algebra,
        images: Vec<Value>,
        origin: HomOrigin,
    ) -> Result<Hom> {
        let n = source.finite_size("homomorphisms")?;
        if images.len() != n {
            return Err(MvError::InvalidParameter(format!(
                "{} images for a carrier of {n}",
                images.len()
            )));
        }
        if let Some(v) = images.iter().find(|v| !target.contains_value(v)) {
            return Err(MvError::NotAMember(format!("{v:?} in {}", target.name())));
        }
        let h = Hom::new_unchecked(source, target, images, origin);
        if let Some(reason) = h.first_failure() {
            return Err(MvError::InvalidParameter(format!(
                "not a homomorphism: {reason}"
            )));
        }
        Ok(h)
    }

    pub(crate) fn new_unchecked(
        source: Algebra,
        target: Algebra,
        images: Vec<Value>,
        origin: HomOrigin,
    ) -> Hom {
        Hom {
            source,
            target,
            images,
            origin,
        }
    }

    pub fn identity(a: &Algebra) -> Result<Hom> {
        let n = a.finite_size("identity maps")?;
        Ok(Hom::new_unchecked(
            a.clone(),
            a.clone(),
            (0..n).map(Value::Index).collect(),
            HomOrigin::Identity,
        ))
    }

    fn first_failure(&self) -> Option<String> {
        let (s, t) = (&self.source, &self.target);
        let n = s.size().unwrap();
        if self.images[s.zero_idx()] != t.zero_val() {
            return Some("0 is not preserved".into());
        }
        for x in 0..n {
            if self.images[s.neg_idx(x)] != t.neg_val(&self.images[x]) {
                return Some(format!("negation at {}", s.format_value(&Value::Index(x))));
            }
            for y in x..n {
                if self.images[s.add_idx(x, y)] != t.add_val(&self.images[x], &self.images[y]) {
                    return Some(format!(
                        "sum at ({}, {})",
                        s.format_value(&Value::Index(x)),
                        s.format_value(&Value::Index(y))
                    ));
                }
            }
        }
        None
    }

    /// Re-runs the exhaustive homomorphism check.
    pub fn verify(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn images(&self) -> &[Value] {
        &self.images
    }

    pub fn origin(&self) -> HomOrigin {
        self.origin
    }

    pub fn with_origin(mut self, origin: HomOrigin) -> Hom {
        self.origin = origin;
        self
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.source.check(x)?;
        let i = x.index().ok_or(MvError::ForeignElement)?;
        Ok(self.target.wrap_unchecked(self.images[i].clone()))
    }

    /// Image of a carrier index.
    pub fn image_idx(&self, i: usize) -> Option<usize> {
        self.images[i].index()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Hom) -> Result<Hom> {
        if next.source != self.target {
            return Err(MvError::ForeignElement);
        }
        let images = self
            .images
            .iter()
            .map(|v| {
                v.index()
                    .map(|i| next.images[i].clone())
                    .ok_or(MvError::ForeignElement)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Hom::new_unchecked(
            self.source.clone(),
            next.target.clone(),
            images,
            HomOrigin::Composite,
        ))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.images.iter().all(|v| seen.insert(v))
    }

    pub fn is_surjective(&self) -> Result<bool> {
        match self.target.size() {
            Some(m) => {
                let mut hit = vec![false; m];
                for v in &self.images {
                    if let Some(i) = v.index() {
                        hit[i] = true;
                    }
                }
                Ok(hit.into_iter().all(|h| h))
            }
            None => Ok(false),
        }
    }

    /// Sorted carrier indices of the image (finite targets).
    pub fn image_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.images.iter().filter_map(Value::index).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn check_caps(a: &Algebra, b: &Algebra) -> Result<(usize, usize)> {
    let n = a.finite_size("homomorphism enumeration")?;
    let m = b.finite_size("homomorphism enumeration")?;
    if n > HOM_SOURCE_CAP {
        return Err(MvError::TooLarge {
            what: format!("hom source {}", a.name()),
            size: n,
            cap: HOM_SOURCE_CAP,
        });
    }
    if m > HOM_TARGET_CAP {
        return Err(MvError::TooLarge {
            what: format!("hom target {}", b.name()),
            size: m,
            cap: HOM_TARGET_CAP,
        });
    }
    Ok((n, m))
}

/// Generators picked greedily in canonical order.
fn generating_set(a: &Algebra) -> Vec<usize> {
    let n = a.size().unwrap();
    let mut gens = Vec::new();
    let mut closed = close_indices(a, &gens);
    for x in 0..n {
        if closed.binary_search(&x).is_err() {
            gens.push(x);
            closed = close_indices(a, &gens);
        }
    }
    gens
}

/// Extends a partial map along ⊕ and ′; `false` on a conflict.
fn propagate(a: &Algebra, b: &Algebra, map: &mut [Option<usize>], fresh: Vec<usize>) -> bool {
    let mut queue = fresh;
    let assign = |map: &mut [Option<usize>], queue: &mut Vec<usize>, x: usize, v: usize| -> bool {
        match map[x] {
            Some(w) => w == v,
            None => {
                map[x] = Some(v);
                queue.push(x);
                true
            }
        }
    };
    while let Some(x) = queue.pop() {
        let fx = map[x].unwrap();
        if !assign(map, &mut queue, a.neg_idx(x), b.neg_idx(fx)) {
            return false;
        }
        for y in 0..map.len() {
            if let Some(fy) = map[y] {
                if !assign(map, &mut queue, a.add_idx(x, y), b.add_idx(fx, fy)) {
                    return false;
                }
            }
        }
    }
    true
}

fn search(
    a: &Algebra,
    b: &Algebra,
    gens: &[usize],
    map: Vec<Option<usize>>,
    out: &mut Vec<Vec<usize>>,
) {
    let Some((&g, rest)) = gens.split_first() else {
        out.push(map.into_iter().map(Option::unwrap).collect());
        return;
    };
    if map[g].is_some() {
        search(a, b, rest, map, out);
        return;
    }
    for v in 0..b.size().unwrap() {
        let mut next = map.clone();
        next[g] = Some(v);
        if propagate(a, b, &mut next, vec![g]) {
            search(a, b, rest, next, out);
        }
    }
}

/// All homomorphisms `a → b`, sorted by their image vectors.
pub fn enumerate_homs(a: &Algebra, b: &Algebra) -> Result<Vec<Hom>> {
    let (n, m) = check_caps(a, b)?;
    let gens = generating_set(a);
    let mut seed = vec![None; n];
    seed[a.zero_idx()] = Some(b.zero_idx());
    if !propagate(a, b, &mut seed, vec![a.zero_idx()]) {
        return Ok(Vec::new());
    }
    let maps: Vec<Vec<usize>> = match gens.split_first() {
        None => {
            let mut out = Vec::new();
            search(a, b, &[], seed, &mut out);
            out
        }
        Some((&g, rest)) => (0..m)
            .into_par_iter()
            .flat_map_iter(|v| {
                let mut map = seed.clone();
                let mut out = Vec::new();
                let ok = match map[g] {
                    Some(w) => w == v,
                    None => {
                        map[g] = Some(v);
                        propagate(a, b, &mut map, vec![g])
                    }
                };
                if ok {
                    search(a, b, rest, map, &mut out);
                }
                out
            })
            .collect(),
    };
    let mut maps = maps;
    maps.sort();
    maps.dedup();
    Ok(maps
        .into_iter()
        .map(|m| {
            let images = m.into_iter().map(Value::Index).collect();
            Hom::new_unchecked(a.clone(), b.clone(), images, HomOrigin::Enumerated)
        })
        .filter(Hom::verify)
        .collect())
}

/// Whether two finite algebras are isomorphic.
pub fn is_isomorphic(a: &Algebra, b: &Algebra) -> Result<bool> {
    if a.size() != b.size() {
        return Ok(false);
    }
    Ok(find_isomorphism(a, b)?.is_some())
}

pub fn find_isomorphism(a: &Algebra, b: &Algebra) -> Result<Option<Hom>> {
    if a.size() != b.size() {
        return Ok(None);
    }
    Ok(enumerate_homs(a, b)?
        .into_iter()
        .find(|h| h.is_injective())
        .map(|h| h.with_origin(HomOrigin::Isomorphism)))
}

#[derive(Clone, Debug)]
pub struct HomClass {
    pub injective: bool,
    pub surjective: bool,
    pub kernel: Ideal,
}

pub fn classify_hom(f: &Hom) -> Result<HomClass> {
    let zero = f.target.zero_val();
    let members: Vec<usize> = (0..f.images.len())
        .filter(|&i| f.images[i] == zero)
        .collect();
    let kernel = ideal_from_members(&f.source, &members)?;
    Ok(HomClass {
        injective: f.is_injective(),
        surjective: f.is_surjective()?,
        kernel,
    })
}

#[derive(Clone, Debug)]
pub enum EpiEvidence {
    EpiCertified(String),
    NotEpi {
        cotarget: Algebra,
        alpha: Hom,
        beta: Hom,
    },
    UnknownUpTo(usize),
}

impl EpiEvidence {
    pub fn is_refuted(&self) -> bool {
        matches!(self, EpiEvidence::NotEpi { .. })
    }

    pub fn label(&self) -> String {
        match self {
            EpiEvidence::EpiCertified(r) => format!("epi ({r})"),
            EpiEvidence::NotEpi { cotarget, .. } => {
                format!("not epi (separated in {})", cotarget.name())
            }
            EpiEvidence::UnknownUpTo(k) => format!("unknown up to cotarget size {k}"),
        }
    }
}

/// Checks a `NotEpi` witness: `α∘f = β∘f` and `α ≠ β`.
pub fn replay_not_epi(f: &Hom, alpha: &Hom, beta: &Hom) -> Result<bool> {
    if !alpha.verify() || !beta.verify() {
        return Ok(false);
    }
    let af = f.then(alpha)?;
    let bf = f.then(beta)?;
    Ok(af.images == bf.images && alpha.images != beta.images)
}

/// Searches cotargets of size at most `k` for a pair `α ≠ β` with
/// `α∘f = β∘f`.
///
/// Surjections and divisible-hull embeddings are certified without search.
/// Otherwise the verdict is a witness or an explicit "unknown up to k".
pub fn bounded_epi_oracle(f: &Hom, k: usize) -> Result<EpiEvidence> {
    if f.is_surjective()? {
        return Ok(EpiEvidence::EpiCertified("surjective".into()));
    }
    if f.origin == HomOrigin::HullEmbedding {
        return Ok(EpiEvidence::EpiCertified(
            "embedding into the divisible hull".into(),
        ));
    }
    let cap = catalog::CATALOG_MAX_SIZE;
    if k > cap {
        return Err(MvError::TooLarge {
            what: "epi cotarget bound".into(),
            size: k,
            cap,
        });
    }
    let t = &f.target;
    t.finite_size("epi search")?;
    let cotargets: Vec<Algebra> = catalog::default_catalog()
        .iter()
        .filter(|c| c.size().unwrap() <= k)
        .cloned()
        .collect();
    let found: Vec<Option<(Algebra, Hom, Hom)>> = cotargets
        .par_iter()
        .map(|c| separating_pair(f, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(match found.into_iter().flatten().next() {
        Some((cotarget, alpha, beta)) => EpiEvidence::NotEpi {
            cotarget,
            alpha,
            beta,
        },
        None => EpiEvidence::UnknownUpTo(k),
    })
}

fn separating_pair(f: &Hom, c: &Algebra) -> Result<Option<(Algebra, Hom, Hom)>> {
    let homs = enumerate_homs(&f.target, c)?;
    let mut by_restriction: HashMap<Vec<Value>, usize> = HashMap::new();
    for (j, h) in homs.iter().enumerate() {
        let r = f.then(h)?.images;
        if let Some(&i) = by_restriction.get(&r) {
            return Ok(Some((c.clone(), homs[i].clone(), h.clone())));
        }
        by_restriction.insert(r, j);
    }
    Ok(None)
}

/// The inclusion Ł_{m+1} ↪ Ł_{n+1}, `k/m ↦ (k·n/m)/n`.
pub fn chain_inclusion(m: u32, n: u32) -> Result<Hom> {
    if m == 0 || n == 0 || !n.is_multiple_of(m) {
        return Err(MvError::NotASubchain { m, n });
    }
    let (a, b) = (Algebra::chain(m)?, Algebra::chain(n)?);
    let step = (n / m) as usize;
    let images = (0..=m as usize).map(|k| Value::Index(k * step)).collect();
    Hom::new(a, b, images, HomOrigin::Inclusion)
}

/// Epi certificate for Ł_{m+1} ↪ Ł_{n+1} when `m | n`.
///
/// A hom out of Ł_{n+1} is determined by the image `x` of `1/n`, which must
/// satisfy `n·x = 1` and `x′ = (n−1)·x`. In the torsion-free enveloping group
/// that forces `x = u/n`, so any two homs out of Ł_{n+1} coincide. The
/// certificate is also machine-checked: the bounded oracle must find no
/// separating pair up to `bound`.
pub fn chain_inclusion_epi(m: u32, n: u32, bound: usize) -> Result<EpiEvidence> {
    let f = chain_inclusion(m, n)?;
    let check = bounded_epi_oracle(&f, bound)?;
    match check {
        EpiEvidence::NotEpi { cotarget, .. } => Err(MvError::CriterionMismatch(format!(
            "Ł{} ↪ Ł{} separated in {}",
            m + 1,
            n + 1,
            cotarget.name()
        ))),
        _ => Ok(EpiEvidence::EpiCertified(format!(
            "torsion-free uniqueness; no separating pair up to cotarget size {bound}"
        ))),
    }
}

/// Elements of the image of `f` (finite target) as elements.
pub fn image_elements(f: &Hom) -> Vec<Element> {
    f.image_indices()
        .into_iter()
        .map(|i| f.target.wrap_unchecked(Value::Index(i)))
        .collect()
}

#[cfg(test)]
mod tests;
