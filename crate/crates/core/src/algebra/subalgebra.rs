use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{Algebra, Element, Kind, TableSpec, Value, MATERIALIZE_CAP};
use crate::error::{MvError, Result};
use crate::ideals;
use crate::morphisms::{Hom, HomOrigin};
use crate::rational::{self, Rational};

/// The subalgebra generated by `gens` together with its inclusion map.
///
/// Finite algebras are closed under ⊕ and ′ by a work-list. In ℚ ∩ [0,1] a
/// finite generator set always lands in some Ł_{d+1}, `d` the common
/// denominator; the closure is still computed explicitly and refused beyond
/// [`MATERIALIZE_CAP`] elements.
pub fn generate_subalgebra(a: &Algebra, gens: &[Element]) -> Result<(Algebra, Hom)> {
    for g in gens {
        a.check(g)?;
    }
    match a.kind() {
        Kind::RationalChain => rational_closure(a, gens),
        _ if a.is_finite() => {
            let seeds: Vec<usize> = gens.iter().map(|g| g.index().unwrap()).collect();
            let members = close_indices(a, &seeds);
            let (sub, images) = restrict(a, &members)?;
            let images = images.into_iter().map(Value::Index).collect();
            let inclusion =
                Hom::new_unchecked(sub.clone(), a.clone(), images, HomOrigin::Inclusion);
            Ok((sub, inclusion))
        }
        _ => Err(MvError::UnsupportedKind(format!(
            "subalgebra generation in {}",
            a.name()
        ))),
    }
}

/// Closure of `seeds ∪ {0, 1}` under ⊕ and ′, sorted canonically.
pub(crate) fn close_indices(a: &Algebra, seeds: &[usize]) -> Vec<usize> {
    let n = a.size().unwrap();
    let mut member = vec![false; n];
    let mut list = Vec::new();
    let mut queue = Vec::new();
    for s in [a.zero_idx(), a.one_idx()]
        .into_iter()
        .chain(seeds.iter().copied())
    {
        if !member[s] {
            member[s] = true;
            queue.push(s);
        }
    }
    while let Some(x) = queue.pop() {
        list.push(x);
        let mut found = vec![a.neg_idx(x)];
        for &y in &list {
            found.push(a.add_idx(x, y));
        }
        for z in found {
            if !member[z] {
                member[z] = true;
                queue.push(z);
            }
        }
    }
    (0..n).filter(|&i| member[i]).collect()
}

/// The subalgebra on `members` (sorted, closed) as an explicit table,
/// together with the image in `a` of each canonical index.
pub(crate) fn restrict(a: &Algebra, members: &[usize]) -> Result<(Algebra, Vec<usize>)> {
    let m = members.len();
    let pos = |x: usize| {
        members
            .binary_search(&x)
            .map_err(|_| MvError::NotASubalgebra(format!("{} is not closed", a.name())))
    };
    let mut oplus = Vec::with_capacity(m * m);
    for &x in members {
        for &y in members {
            oplus.push(pos(a.add_idx(x, y))?);
        }
    }
    let neg = members
        .iter()
        .map(|&x| pos(a.neg_idx(x)))
        .collect::<Result<Vec<_>>>()?;
    let spec = TableSpec {
        size: m,
        oplus,
        neg,
        zero: 0,
        one: m - 1,
    };
    let sub = Algebra::from_table_named(format!("sub({})", a.name()), spec)?;
    let images = match sub.kind() {
        Kind::Table(t) => (0..m).map(|i| members[t.original_index(i)]).collect(),
        _ => unreachable!(),
    };
    Ok((sub, images))
}

fn rational_closure(a: &Algebra, gens: &[Element]) -> Result<(Algebra, Hom)> {
    let values: Vec<Rational> = gens.iter().map(|g| a.rational_value(g).unwrap()).collect();
    let d = rational::common_denominator(values.iter());
    let d = d
        .to_usize()
        .filter(|&d| d < MATERIALIZE_CAP)
        .ok_or_else(|| {
            MvError::UnsupportedGenerators(format!("common denominator {d} too large"))
        })?;
    let mut set: BTreeSet<Rational> = [rational::int(0), rational::int(1)].into_iter().collect();
    set.extend(values.iter().cloned());
    loop {
        let current: Vec<Rational> = set.iter().cloned().collect();
        let before = set.len();
        for x in &current {
            set.insert(rational::int(1) - x);
            for y in &current {
                let s = x + y;
                set.insert(if s > rational::int(1) {
                    rational::int(1)
                } else {
                    s
                });
            }
        }
        if set.len() > MATERIALIZE_CAP {
            return Err(MvError::UnsupportedGenerators(
                "closure exceeds the size cap".into(),
            ));
        }
        if set.len() == before {
            break;
        }
    }
    // the closure is {k/e} for the generated step 1/e, where e | d
    let e = set.len() - 1;
    debug_assert_eq!(d % e.max(1), 0);
    let e = e.max(1);
    let sub = Algebra::chain(e as u32)?;
    let images = (0..=e)
        .map(|k| Value::Rational(Rational::new(BigInt::from(k), BigInt::from(e))))
        .collect::<Vec<_>>();
    for v in &images {
        if let Value::Rational(q) = v {
            if !set.contains(q) {
                return Err(MvError::UnsupportedGenerators(
                    "closure is not a finite chain".into(),
                ));
            }
        }
    }
    let inclusion = Hom::new_unchecked(sub.clone(), a.clone(), images, HomOrigin::Inclusion);
    Ok((sub, inclusion))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_linear: bool,
    pub is_simple: bool,
    pub is_boolean: bool,
}

/// Linear (≤ total), simple (exactly the ideals {0} and M) and Boolean
/// (x ⊕ x = x everywhere).
pub fn classify(a: &Algebra) -> Result<Classification> {
    match a.kind() {
        Kind::RationalChain => Ok(Classification {
            is_linear: true,
            is_simple: true,
            is_boolean: false,
        }),
        _ if a.is_finite() => {
            let n = a.size().unwrap();
            let is_linear = (0..n).all(|x| (x + 1..n).all(|y| a.leq_idx(x, y) || a.leq_idx(y, x)));
            let is_boolean = (0..n).all(|x| a.is_boolean_idx(x));
            let is_simple = ideals::enumerate_ideals(a)?.ideals.len() == 2;
            Ok(Classification {
                is_linear,
                is_simple,
                is_boolean,
            })
        }
        _ => Err(MvError::UnsupportedKind(format!(
            "classification of {}",
            a.name()
        ))),
    }
}
