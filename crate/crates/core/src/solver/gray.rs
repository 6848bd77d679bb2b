//! Reflected-Gray-code walk over a sub-cube with incremental energy updates.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::poly::{Assignment, Polynomial, VarId};

/// Bit-mask form of a polynomial over its dense support.
pub(crate) struct Compiled {
    pub vars: Vec<VarId>,
    constant: i64,
    terms: Vec<(u64, i64)>,
    /// For each variable: (mask of the other variables, coefficient) of
    /// every term containing it.
    adjacency: Vec<Vec<(u64, i64)>>,
}

impl Compiled {
    pub fn new(p: &Polynomial, limit: usize) -> Result<Self> {
        let vars = p.support().to_vec();
        if vars.len() > limit {
            return Err(Error::TooManyVariables {
                count: vars.len(),
                limit,
            });
        }
        // Every partial sum is bounded by the l1 norm, so the walk itself
        // never needs checked arithmetic.
        p.l1_norm()?;
        let dense = |v: VarId| vars.binary_search(&v).expect("in support");
        let mut adjacency = vec![Vec::new(); vars.len()];
        let mut terms = Vec::with_capacity(p.num_terms());
        let mut constant = 0;
        for (m, c) in p.terms() {
            if m.is_one() {
                constant = *c;
                continue;
            }
            let mask = m.vars().iter().fold(0u64, |acc, &v| acc | 1 << dense(v));
            terms.push((mask, *c));
            for &v in m.vars() {
                let k = dense(v);
                adjacency[k].push((mask & !(1 << k), *c));
            }
        }
        Ok(Compiled {
            vars,
            constant,
            terms,
            adjacency,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn energy(&self, state: u64) -> i64 {
        self.constant
            + self
                .terms
                .iter()
                .filter(|&&(mask, _)| state & mask == mask)
                .map(|&(_, c)| c)
                .sum::<i64>()
    }

    pub fn assignment(&self, state: u64) -> Assignment {
        self.vars
            .iter()
            .enumerate()
            .map(|(k, &v)| (v, state >> k & 1 == 1))
            .collect()
    }

    /// Energy change from flipping bit `k` of `state`.
    #[inline]
    fn delta(&self, state: u64, k: usize) -> i64 {
        let s: i64 = self.adjacency[k]
            .iter()
            .filter(|&&(others, _)| state & others == others)
            .map(|&(_, c)| c)
            .sum();
        if state >> k & 1 == 0 {
            s
        } else {
            -s
        }
    }
}

/// Outcome of walking one sub-cube.
#[derive(Clone, Debug)]
pub(crate) struct BlockResult {
    pub min_energy: i64,
    /// Step index of the first minimum inside the block.
    pub position: u64,
    pub state: u64,
    pub minima: u64,
    pub evaluations: u64,
    pub hit_target: bool,
}

pub(crate) struct Walk<'a> {
    pub compiled: &'a Compiled,
    /// Number of high bits fixed per block.
    pub fixed_bits: usize,
    pub stop_at: Option<i64>,
    /// Lowest block index that reached `stop_at`; later blocks abandon.
    pub stop: &'a AtomicU64,
}

impl Walk<'_> {
    /// Walks block `b`. Concatenating blocks `0, 1, ...` reproduces the
    /// reflected Gray order over all variables.
    pub fn block(&self, b: u64) -> BlockResult {
        let n = self.compiled.num_vars();
        let free = n - self.fixed_bits;
        let high = (b ^ (b >> 1)) << free;
        let low = if b & 1 == 1 && free > 0 {
            1u64 << (free - 1)
        } else {
            0
        };
        let mut state = high | low;
        let mut energy = self.compiled.energy(state);
        let mut best = BlockResult {
            min_energy: energy,
            position: 0,
            state,
            minima: 1,
            evaluations: 1,
            hit_target: false,
        };
        if self.stop_at.is_some_and(|t| energy <= t) {
            best.hit_target = true;
            self.stop.fetch_min(b, Ordering::Relaxed);
            return best;
        }
        let steps: u64 = 1 << free;
        for j in 1..steps {
            if j & 0xfff == 0 && self.stop.load(Ordering::Relaxed) < b {
                break;
            }
            let k = j.trailing_zeros() as usize;
            energy += self.compiled.delta(state, k);
            state ^= 1 << k;
            best.evaluations += 1;
            if cfg!(debug_assertions) && j & 0x3ff == 0 {
                debug_assert_eq!(energy, self.compiled.energy(state));
            }
            if energy < best.min_energy {
                best.min_energy = energy;
                best.position = j;
                best.state = state;
                best.minima = 1;
                if self.stop_at.is_some_and(|t| energy <= t) {
                    best.hit_target = true;
                    self.stop.fetch_min(b, Ordering::Relaxed);
                    break;
                }
            } else if energy == best.min_energy {
                best.minima += 1;
            }
        }
        best
    }
}
