//! Hardware cost model: when a Hamiltonian is small enough to run, and
//! which variable to branch on when it is not.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, VarId};

/// How ties in the branching score are resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Smallest variable id wins.
    #[default]
    Lowest,
    /// A seeded hash of the variable id orders tied candidates.
    Seeded(u64),
}

/// Device model used by the feasibility test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostConfig {
    /// Qubit capacity `Q`.
    pub qubit_budget: usize,
    /// Highest interaction order the device implements natively.
    pub target_order: usize,
    /// Whether leftover qubits may host quadratization auxiliaries.
    pub allow_aux: bool,
    #[serde(default)]
    pub tie_break: TieBreak,
}

impl CostConfig {
    pub fn new(qubit_budget: usize, target_order: usize, allow_aux: bool) -> Self {
        CostConfig {
            qubit_budget,
            target_order,
            allow_aux,
            tie_break: TieBreak::Lowest,
        }
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }
}

pub fn ramp(k: i64) -> u64 {
    k.max(0) as u64
}

/// Upper bound on the auxiliaries needed to bring `t` down to `target_order`.
pub fn term_aux_cost(t: &Monomial, target_order: usize) -> u64 {
    ramp(t.order() as i64 - target_order as i64)
}

/// Qubits used by `h` once every term is reduced: live variables plus the
/// per-term auxiliary bound.
pub fn hamiltonian_cost(h: &Polynomial, cfg: &CostConfig) -> u64 {
    let aux: u64 = h
        .terms()
        .iter()
        .map(|(t, _)| term_aux_cost(t, cfg.target_order))
        .sum();
    h.support().len() as u64 + aux
}

pub fn is_desirable(h: &Polynomial, cfg: &CostConfig) -> bool {
    if h.is_constant() {
        return true;
    }
    if cfg.allow_aux {
        hamiltonian_cost(h, cfg) <= cfg.qubit_budget as u64
    } else {
        h.degree() <= cfg.target_order && h.support().len() <= cfg.qubit_budget
    }
}

#[inline]
fn branch_weight(t: &Monomial, target_order: usize) -> u64 {
    ramp(t.order() as i64 - target_order as i64 + 1)
}

/// Branching score of `v`: summed `ramp(order - target + 1)` over the terms
/// containing it.
pub fn variable_cost(h: &Polynomial, v: VarId, target_order: usize) -> u64 {
    h.terms()
        .iter()
        .filter(|(t, _)| t.contains(v))
        .map(|(t, _)| branch_weight(t, target_order))
        .sum()
}

/// Scores for every variable in the support, in support order.
pub fn variable_costs(h: &Polynomial, target_order: usize) -> Vec<(VarId, u64)> {
    let support = h.support();
    let Some(max) = h.max_var() else {
        return Vec::new();
    };
    let mut score = vec![0u64; max.index() + 1];
    for (t, _) in h.terms() {
        let w = branch_weight(t, target_order);
        if w > 0 {
            for v in t.vars() {
                score[v.index()] += w;
            }
        }
    }
    support.iter().map(|&v| (v, score[v.index()])).collect()
}

fn mix(seed: u64, v: VarId) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ (v.0 as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Variable with the largest branching score.
pub fn select_split_variable(h: &Polynomial, cfg: &CostConfig) -> Result<VarId> {
    let scores = variable_costs(h, cfg.target_order);
    let best = scores
        .iter()
        .map(|&(_, s)| s)
        .max()
        .ok_or(Error::EmptySupport)?;
    let mut tied = scores.iter().filter(|&&(_, s)| s == best).map(|&(v, _)| v);
    Ok(match cfg.tie_break {
        TieBreak::Lowest => tied.next().expect("max exists"),
        TieBreak::Seeded(seed) => tied.min_by_key(|&v| (mix(seed, v), v)).expect("max exists"),
    })
}
