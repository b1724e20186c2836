//! Good sequences over a finite algebra.
//!
//! A good sequence is a finite list `(x₁, …, x_k)` with `x_i ⊕ x_{i+1} = x_i`,
//! padded with zeros on the right. Stored as carrier indices with trailing
//! zeros removed, so equality is plain vector equality.

use std::cmp::Ordering;

use serde::Serialize;

use crate::algebra::{Algebra, Element};
use crate::error::{MvError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GoodSequence(Vec<usize>);

impl GoodSequence {
    pub fn empty() -> Self {
        GoodSequence(Vec::new())
    }

    /// Validates adjacent absorption and trims trailing zeros.
    pub fn new(base: &Algebra, entries: &[Element]) -> Result<Self> {
        let mut idx = Vec::with_capacity(entries.len());
        for e in entries {
            base.check(e)?;
            idx.push(e.index().ok_or_else(|| {
                MvError::UnsupportedKind("good sequences need a finite base".into())
            })?);
        }
        Self::from_indices(base, idx)
    }

    pub fn from_indices(base: &Algebra, entries: Vec<usize>) -> Result<Self> {
        let n = base.finite_size("good sequences")?;
        if let Some(&bad) = entries.iter().find(|&&e| e >= n) {
            return Err(MvError::NotGoodSequence(format!(
                "index {bad} out of range"
            )));
        }
        for w in entries.windows(2) {
            if base.add_idx(w[0], w[1]) != w[0] {
                return Err(MvError::NotGoodSequence(format!(
                    "{} + {} != {}",
                    base.format_value(&crate::algebra::Value::Index(w[0])),
                    base.format_value(&crate::algebra::Value::Index(w[1])),
                    base.format_value(&crate::algebra::Value::Index(w[0]))
                )));
            }
        }
        Ok(Self::trimmed(base, entries))
    }

    pub(crate) fn trimmed(base: &Algebra, mut entries: Vec<usize>) -> Self {
        while entries.last() == Some(&base.zero_idx()) {
            entries.pop();
        }
        GoodSequence(entries)
    }

    /// The one-term sequence `(x)`.
    pub fn single(base: &Algebra, x: usize) -> Self {
        Self::trimmed(base, vec![x])
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn at(&self, base: &Algebra, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(base.zero_idx())
    }

    /// `c_i = x_i ⊕ (x_{i−1} ⊙ y₁) ⊕ … ⊕ (x₁ ⊙ y_{i−1}) ⊕ y_i`.
    pub fn add(&self, base: &Algebra, other: &Self) -> Self {
        let len = self.len() + other.len();
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let mut c = base.add_idx(self.at(base, i), other.at(base, i));
            for j in 0..i {
                // x_{i-j} ⊙ y_{j+1} in 0-based terms: x[i-1-j] ⊙ y[j]
                let t = base.odot_idx(self.at(base, i - 1 - j), other.at(base, j));
                c = base.add_idx(c, t);
            }
            out.push(c);
        }
        Self::trimmed(base, out)
    }

    /// Componentwise order after padding; `None` when incomparable.
    pub fn compare(&self, base: &Algebra, other: &Self) -> Option<Ordering> {
        let len = self.len().max(other.len());
        let (mut le, mut ge) = (true, true);
        for i in 0..len {
            let (x, y) = (self.at(base, i), other.at(base, i));
            le &= base.leq_idx(x, y);
            ge &= base.leq_idx(y, x);
        }
        match (le, ge) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    pub fn leq(&self, base: &Algebra, other: &Self) -> bool {
        matches!(
            self.compare(base, other),
            Some(Ordering::Less | Ordering::Equal)
        )
    }

    pub fn meet(&self, base: &Algebra, other: &Self) -> Self {
        let len = self.len().min(other.len());
        let v = (0..len)
            .map(|i| base.meet_idx(self.at(base, i), other.at(base, i)))
            .collect();
        Self::trimmed(base, v)
    }

    pub fn join(&self, base: &Algebra, other: &Self) -> Self {
        let len = self.len().max(other.len());
        let v = (0..len)
            .map(|i| base.join_idx(self.at(base, i), other.at(base, i)))
            .collect();
        Self::trimmed(base, v)
    }

    /// The unique `d` with `other + d = self`, when `other ≤ self`.
    ///
    /// `d` is the largest good sequence with `other + d ≤ self`, so it can be
    /// built entry by entry: each `d_i` is the largest `x` extending
    /// `(d_1, …, d_{i−1})` to a good sequence that still fits under `self`.
    pub fn subtract(&self, base: &Algebra, other: &Self) -> Result<Self> {
        if !other.leq(base, self) {
            return Err(MvError::NotGoodSequence(
                "subtraction of a larger sequence".into(),
            ));
        }
        let n = base.size().unwrap();
        let mut d: Vec<usize> = Vec::new();
        while d.len() < self.len() {
            let fits = |x: usize| {
                if let Some(&last) = d.last() {
                    if base.add_idx(last, x) != last {
                        return false;
                    }
                }
                let mut t = d.clone();
                t.push(x);
                other.add(base, &Self::trimmed(base, t)).leq(base, self)
            };
            let best = (0..n).filter(|&x| fits(x)).fold(base.zero_idx(), |b, x| {
                if base.leq_idx(x, b) {
                    b
                } else {
                    x
                }
            });
            if best == base.zero_idx() {
                break;
            }
            d.push(best);
        }
        let d = Self::trimmed(base, d);
        if other.add(base, &d) != *self {
            return Err(MvError::NotGoodSequence("monoid subtraction failed".into()));
        }
        Ok(d)
    }

    pub fn format(&self, base: &Algebra) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&i| base.format_value(&crate::algebra::Value::Index(i)))
            .collect();
        format!("({})", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqOp {
    Add,
    Compare,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqResult {
    Sequence(GoodSequence),
    /// `None` when incomparable.
    Ordering(Option<Ordering>),
}

pub fn good_seq_arith(
    base: &Algebra,
    op: SeqOp,
    a: &GoodSequence,
    b: &GoodSequence,
) -> Result<SeqResult> {
    let n = base.finite_size("good sequences")?;
    for s in [a, b] {
        GoodSequence::from_indices(base, s.0.clone())?;
        debug_assert!(s.0.iter().all(|&e| e < n));
    }
    Ok(match op {
        SeqOp::Add => SeqResult::Sequence(a.add(base, b)),
        SeqOp::Compare => SeqResult::Ordering(a.compare(base, b)),
    })
}

/// Every good sequence of length at most `max_len`.
pub fn all_good_sequences(base: &Algebra, max_len: usize) -> Result<Vec<GoodSequence>> {
    let n = base.finite_size("good sequences")?;
    let mut out = vec![GoodSequence::empty()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for x in 0..n {
                if x == base.zero_idx() {
                    continue;
                }
                if let Some(&last) = s.last() {
                    if base.add_idx(last, x) != last {
                        continue;
                    }
                }
                let mut t = s.clone();
                t.push(x);
                out.push(GoodSequence(t.clone()));
                next.push(t);
            }
        }
        frontier = next;
    }
    Ok(out)
}
