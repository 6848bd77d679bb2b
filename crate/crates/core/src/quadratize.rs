//! Order reduction by substituting a fresh variable for a product of two.
//!
//! Each step replaces `a1*a2` by `b` in every term that contains both and
//! adds `lambda * (a1*a2 - 2*a1*b - 2*a2*b + 3*b)`, which is zero exactly
//! when `b = a1*a2` and at least `lambda` otherwise.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Assignment, Monomial, Polynomial, VarId};
use crate::split::ramp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxDefinition {
    pub aux: VarId,
    pub pair: (VarId, VarId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadratizationResult {
    pub reduced: Polynomial,
    /// In application order; later definitions may refer to earlier aux.
    pub aux_defs: Vec<AuxDefinition>,
    pub lambda: i64,
}

impl QuadratizationResult {
    /// Extends an assignment of the original variables with the consistent
    /// auxiliary values `b = a1*a2`.
    pub fn extend(&self, original: &Assignment) -> Assignment {
        let mut out = original.clone();
        for d in &self.aux_defs {
            let bit = out.get(d.pair.0).unwrap_or(false) && out.get(d.pair.1).unwrap_or(false);
            out.set(d.aux, bit);
        }
        out
    }

    pub fn aux_count(&self) -> usize {
        self.aux_defs.len()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaPolicy {
    /// [`choose_lambda`] of the input.
    #[default]
    Auto,
    Fixed(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratizeOptions {
    pub target_order: usize,
    pub lambda: LambdaPolicy,
    /// Refuse to introduce more than this many auxiliaries.
    pub max_aux: Option<usize>,
}

impl QuadratizeOptions {
    pub fn new(target_order: usize) -> Self {
        QuadratizeOptions {
            target_order,
            lambda: LambdaPolicy::Auto,
            max_aux: None,
        }
    }
}

/// `a1*a2 - 2*a1*b - 2*a2*b + 3*b`.
pub fn penalty(a1: VarId, a2: VarId, b: VarId) -> Result<Polynomial> {
    if a1 == a2 || a1 == b || a2 == b {
        return Err(Error::DuplicateVariables);
    }
    Polynomial::canonicalize([
        (1, vec![a1, a2]),
        (-2, vec![a1, b]),
        (-2, vec![a2, b]),
        (3, vec![b]),
    ])
}

/// Penalty weight large enough that no inconsistent auxiliary value can
/// beat a consistent one: `1 + sum |c|`.
pub fn choose_lambda(h: &Polynomial) -> Result<i64> {
    h.l1_norm()?.checked_add(1).ok_or(Error::Overflow)
}

fn substitute_pair(h: &Polynomial, a1: VarId, a2: VarId, b: VarId) -> Result<Polynomial> {
    Polynomial::from_terms(
        h.terms()
            .iter()
            .map(|(m, c)| {
                if m.contains(a1) && m.contains(a2) {
                    let rest = m.vars().iter().copied().filter(|&v| v != a1 && v != a2);
                    (Monomial::new(rest.chain([b])), *c)
                } else {
                    (m.clone(), *c)
                }
            })
            .collect(),
    )
}

/// One substitution step: `a1*a2 → b` everywhere, plus `lambda` times the
/// penalty.
pub fn reduce_once(
    h: &Polynomial,
    pair: (VarId, VarId),
    b: VarId,
    lambda: i64,
) -> Result<Polynomial> {
    let (a1, a2) = pair;
    if a1 == a2 {
        return Err(Error::DuplicateVariables);
    }
    if h.support().binary_search(&b).is_ok() {
        return Err(Error::NonFreshAux(b));
    }
    if lambda < 1 {
        return Err(Error::InvalidOptions(format!(
            "lambda must be >= 1, got {lambda}"
        )));
    }
    substitute_pair(h, a1, a2, b)?.add(&penalty(a1, a2, b)?.scale(lambda)?)
}

/// Most shared pair among the terms above `target_order`; ties go to the
/// lexicographically smallest pair.
fn best_pair(h: &Polynomial, target_order: usize) -> Option<(VarId, VarId)> {
    let mut counts: BTreeMap<(VarId, VarId), usize> = BTreeMap::new();
    for (m, _) in h.terms().iter().filter(|(m, _)| m.order() > target_order) {
        for (&a, &b) in m.vars().iter().tuple_combinations() {
            *counts.entry((a, b)).or_default() += 1;
        }
    }
    let mut best: Option<((VarId, VarId), usize)> = None;
    for (pair, count) in counts {
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((pair, count));
        }
    }
    best.map(|(p, _)| p)
}

/// Auxiliary-count ceiling: `sum over terms of ramp(order - target)`.
pub fn aux_bound(h: &Polynomial, target_order: usize) -> u64 {
    h.terms()
        .iter()
        .map(|(m, _)| ramp(m.order() as i64 - target_order as i64))
        .sum()
}

pub fn quadratize(
    h: &Polynomial,
    target_order: usize,
    lambda: LambdaPolicy,
) -> Result<QuadratizationResult> {
    quadratize_with(
        h,
        &QuadratizeOptions {
            lambda,
            ..QuadratizeOptions::new(target_order)
        },
    )
}

/// Repeats the pair substitution until every term has order at most
/// `target_order`. New variables are numbered after the input's largest.
pub fn quadratize_with(h: &Polynomial, opts: &QuadratizeOptions) -> Result<QuadratizationResult> {
    if opts.target_order < 2 {
        return Err(Error::InvalidOptions(
            "target order must be at least 2".into(),
        ));
    }
    let lambda = match opts.lambda {
        LambdaPolicy::Auto => choose_lambda(h)?,
        LambdaPolicy::Fixed(l) if l >= 1 => l,
        LambdaPolicy::Fixed(l) => {
            return Err(Error::InvalidOptions(format!(
                "lambda must be >= 1, got {l}"
            )))
        }
    };
    let mut next = h.max_var().map_or(0, |v| v.0 + 1);
    let mut objective = h.clone();
    let mut aux_defs = Vec::new();
    while let Some(pair) = best_pair(&objective, opts.target_order) {
        if opts.max_aux.is_some_and(|cap| aux_defs.len() >= cap) {
            return Err(Error::AuxBudgetExceeded(aux_defs.len()));
        }
        let b = VarId(next);
        next = next.checked_add(1).ok_or(Error::Overflow)?;
        objective = substitute_pair(&objective, pair.0, pair.1, b)?;
        aux_defs.push(AuxDefinition { aux: b, pair });
    }
    let mut reduced = objective;
    for d in &aux_defs {
        reduced = reduced.add(&penalty(d.pair.0, d.pair.1, d.aux)?.scale(lambda)?)?;
    }
    Ok(QuadratizationResult {
        reduced,
        aux_defs,
        lambda,
    })
}
