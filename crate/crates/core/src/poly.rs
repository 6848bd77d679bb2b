//! Canonical multilinear polynomials over binary variables.
//!
//! A [`Polynomial`] is stored as a sorted list of `(Monomial, coefficient)`
//! pairs in graded-lexicographic order with no zero coefficients and no
//! repeated monomials, so two polynomials denote the same pseudo-Boolean
//! function exactly when they compare equal. Coefficients are `i64` and
//! every arithmetic step is checked.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Index of a binary variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub u32);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl From<u32> for VarId {
    fn from(v: u32) -> Self {
        VarId(v)
    }
}

/// A product of distinct variables. The empty monomial is the constant 1.
///
/// Ordering is graded-lexicographic: first by order, then by the sorted
/// variable sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[VarId; 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    /// Builds a monomial from any variable multiset, applying `x*x = x`.
    pub fn new<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        let mut v: SmallVec<[VarId; 6]> = vars.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Monomial(v)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[VarId] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn contains(&self, v: VarId) -> bool {
        // Monomials are short; a linear scan beats binary search here.
        self.0.contains(&v)
    }

    /// The monomial with `v` removed (unchanged if `v` is absent).
    pub fn without(&self, v: VarId) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&x| x != v).collect())
    }

    /// Multilinear product of two monomials.
    pub fn product(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Value of the monomial under `assignment`, or the first unbound variable.
    pub fn evaluate(&self, assignment: &Assignment) -> std::result::Result<bool, VarId> {
        let mut value = true;
        for &v in &self.0 {
            match assignment.get(v) {
                Some(b) => value &= b,
                None => return Err(v),
            }
        }
        Ok(value)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A partial or total map from variables to bits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment(BTreeMap<VarId, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `v`, returning the previous binding if there was one.
    pub fn set(&mut self, v: VarId, bit: bool) -> Option<bool> {
        self.0.insert(v, bit)
    }

    pub fn get(&self, v: VarId) -> Option<bool> {
        self.0.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    /// True if every variable bound in both assignments has the same bit.
    pub fn is_consistent_with(&self, other: &Assignment) -> bool {
        self.iter()
            .all(|(v, b)| other.get(v).is_none_or(|o| o == b))
    }
}

impl FromIterator<(VarId, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (VarId, bool)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

impl Extend<(VarId, bool)> for Assignment {
    fn extend<I: IntoIterator<Item = (VarId, bool)>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

/// Canonical multilinear polynomial with exact integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: Vec<(Monomial, i64)>,
    support: Vec<VarId>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::from_sorted_unique(if c == 0 {
            Vec::new()
        } else {
            vec![(Monomial::one(), c)]
        })
    }

    pub fn var(v: VarId) -> Self {
        Self::from_sorted_unique(vec![(Monomial::new([v]), 1)])
    }

    pub fn monomial(m: Monomial, c: i64) -> Self {
        Self::from_sorted_unique(if c == 0 { Vec::new() } else { vec![(m, c)] })
    }

    /// Normal form of an arbitrary list of `(coefficient, variable multiset)`.
    pub fn canonicalize<I, M>(raw_terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, M)>,
        M: IntoIterator<Item = VarId>,
    {
        Self::from_terms(
            raw_terms
                .into_iter()
                .map(|(c, vars)| (Monomial::new(vars), c))
                .collect(),
        )
    }

    /// Sorts, merges like monomials and drops zeros.
    pub fn from_terms(mut terms: Vec<(Monomial, i64)>) -> Result<Self> {
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Monomial, i64)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match merged.last_mut() {
                Some((last, acc)) if *last == m => {
                    *acc = acc.checked_add(c).ok_or(Error::Overflow)?;
                }
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| *c != 0);
        Ok(Self::from_sorted_unique(merged))
    }

    fn from_sorted_unique(terms: Vec<(Monomial, i64)>) -> Self {
        let mut support: Vec<VarId> = terms
            .iter()
            .flat_map(|(m, _)| m.vars().iter().copied())
            .collect();
        support.sort_unstable();
        support.dedup();
        Polynomial { terms, support }
    }

    /// Terms in graded-lexicographic order.
    pub fn terms(&self) -> &[(Monomial, i64)] {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> i64 {
        self.terms
            .binary_search_by(|(x, _)| x.cmp(m))
            .map(|k| self.terms[k].1)
            .unwrap_or(0)
    }

    pub fn constant_term(&self) -> i64 {
        match self.terms.first() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.last().map_or(0, |(m, _)| m.order())
    }

    /// Sorted distinct variables occurring in at least one term.
    pub fn support(&self) -> &[VarId] {
        &self.support
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.support.is_empty()
    }

    pub fn max_var(&self) -> Option<VarId> {
        self.support.last().copied()
    }

    /// Sum of absolute coefficient values, including the constant.
    pub fn l1_norm(&self) -> Result<i64> {
        self.terms.iter().try_fold(0i64, |acc, (_, c)| {
            c.checked_abs()
                .and_then(|a| acc.checked_add(a))
                .ok_or(Error::Overflow)
        })
    }

    pub fn evaluate(&self, assignment: &Assignment) -> Result<i64> {
        let mut total = 0i64;
        for (m, c) in &self.terms {
            if m.evaluate(assignment).map_err(Error::UnboundVariable)? {
                total = total.checked_add(*c).ok_or(Error::Overflow)?;
            }
        }
        Ok(total)
    }

    /// Fixes `v` to `bit`. Absent variables leave the polynomial unchanged.
    pub fn substitute(&self, v: VarId, bit: bool) -> Result<Polynomial> {
        if self.support.binary_search(&v).is_err() {
            return Ok(self.clone());
        }
        if !bit {
            // Dropping terms keeps the order intact.
            let terms = self
                .terms
                .iter()
                .filter(|(m, _)| !m.contains(v))
                .cloned()
                .collect();
            return Ok(Self::from_sorted_unique(terms));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.contains(v) {
                    (m.without(v), *c)
                } else {
                    (m.clone(), *c)
                }
            })
            .collect();
        Self::from_terms(terms)
    }

    /// Applies every binding of `prefix` in turn.
    pub fn restrict(&self, prefix: &Assignment) -> Result<Polynomial> {
        let mut p = self.clone();
        for (v, b) in prefix.iter() {
            p = p.substitute(v, b)?;
        }
        Ok(p)
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        terms.extend(self.terms.iter().cloned());
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(terms)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.scale(-1)?)
    }

    pub fn scale(&self, factor: i64) -> Result<Polynomial> {
        if factor == 0 {
            return Ok(Polynomial::zero());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), c.checked_mul(factor).ok_or(Error::Overflow)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_sorted_unique(terms))
    }

    pub fn multiply(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca.checked_mul(*cb).ok_or(Error::Overflow)?;
                terms.push((ma.product(mb), c));
            }
        }
        Self::from_terms(terms)
    }

    /// Renames variables through `f`, which must be injective on the support.
    pub fn map_vars<F: Fn(VarId) -> VarId>(&self, f: F) -> Result<Polynomial> {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.vars().iter().map(|&v| f(v))), *c))
                .collect(),
        )
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            if k == 0 {
                if *c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.unsigned_abs();
            match (m.is_one(), abs) {
                (true, _) => write!(f, "{abs}")?,
                (false, 1) => write!(f, "{m}")?,
                (false, _) => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }
}
