//! Word expansion in the free associative algebra with integer coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeElem<L: Ord + Clone> {
    terms: BTreeMap<Vec<L>, i64>,
}

impl<L: Ord + Clone> FreeElem<L> {
    pub fn zero() -> Self {
        FreeElem { terms: BTreeMap::new() }
    }

    pub fn letter(l: L) -> Self {
        FreeElem {
            terms: BTreeMap::from([(vec![l], 1)]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Words with nonzero coefficients, in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&[L], i64)> {
        self.terms.iter().map(|(w, &c)| (w.as_slice(), c))
    }

    fn insert(&mut self, w: Vec<L>, c: i64) {
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if c != 0 {
                    v.insert(c);
                }
            }
        }
    }

    pub fn scale(&self, s: i64) -> Self {
        if s == 0 {
            return Self::zero();
        }
        FreeElem {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Replaces every letter by a word and concatenates.
    pub fn substitute<T: Clone, F: Fn(&L) -> Vec<T>>(&self, f: F) -> Vec<(Vec<T>, i64)> {
        self.terms
            .iter()
            .map(|(w, &c)| (w.iter().flat_map(&f).collect(), c))
            .collect()
    }
}

impl<L: Ord + Clone> Add for &FreeElem<L> {
    type Output = FreeElem<L>;
    fn add(self, o: &FreeElem<L>) -> FreeElem<L> {
        let mut out = self.clone();
        for (w, &c) in &o.terms {
            out.insert(w.clone(), c);
        }
        out
    }
}

impl<L: Ord + Clone> Sub for &FreeElem<L> {
    type Output = FreeElem<L>;
    fn sub(self, o: &FreeElem<L>) -> FreeElem<L> {
        self + &o.scale(-1)
    }
}

impl<L: Ord + Clone> Mul for &FreeElem<L> {
    type Output = FreeElem<L>;
    fn mul(self, o: &FreeElem<L>) -> FreeElem<L> {
        let mut out = FreeElem::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut w = a.clone();
                w.extend(b.iter().cloned());
                out.insert(w, ca * cb);
            }
        }
        out
    }
}

/// `[[[a₀, a₁], a₂], …]`.
pub fn left_nested<L: Ord + Clone>(items: &[FreeElem<L>]) -> FreeElem<L> {
    let mut it = items.iter();
    let first = it.next().cloned().unwrap_or_else(FreeElem::zero);
    it.fold(first, |acc, x| acc.commutator(x))
}
