//! Exact minimization: exhaustive Gray-code search, its sub-cube parallel
//! form, and split-assisted solving for objectives too large to enumerate
//! directly.

mod gray;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::poly::{Assignment, Polynomial, VarId};
use crate::split::{fold_leaves, CostConfig, SplitLimits};

use gray::{BlockResult, Compiled, Walk};

/// Hard cap on variables for exhaustive enumeration.
pub const MAX_EXHAUSTIVE_VARS: usize = 40;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Count every minimizing assignment. Incompatible with `stop_at`.
    pub count_minima: bool,
    /// Stop as soon as an assignment with energy `<= stop_at` is seen.
    pub stop_at: Option<i64>,
}

impl SolveOptions {
    pub fn counting() -> Self {
        SolveOptions {
            count_minima: true,
            stop_at: None,
        }
    }

    /// Stop at the first zero-energy assignment. Sound whenever the
    /// objective is nonnegative, as Ramsey Hamiltonians are.
    pub fn early_exit_zero() -> Self {
        SolveOptions {
            count_minima: false,
            stop_at: Some(0),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.count_minima && self.stop_at.is_some() {
            return Err(Error::InvalidOptions(
                "counting minima requires a full search; drop the early exit".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub min_energy: i64,
    /// A minimizing assignment of every variable in the objective's support.
    pub witness: Assignment,
    /// Exact number of minimizers over the support, when requested.
    pub num_minima: Option<u64>,
    pub evaluations: u64,
    /// Number of sub-problems solved (1 unless split-assisted).
    pub leaves: u64,
    /// The search stopped early on reaching the `stop_at` target.
    pub stopped_early: bool,
}

/// Single-threaded exhaustive search in reflected Gray-code order.
///
/// The witness is the first minimizer met in that order.
pub fn exhaustive_min(p: &Polynomial, opts: &SolveOptions) -> Result<SolveResult> {
    opts.validate()?;
    let compiled = Compiled::new(p, MAX_EXHAUSTIVE_VARS)?;
    let stop = AtomicU64::new(u64::MAX);
    let walk = Walk {
        compiled: &compiled,
        fixed_bits: 0,
        stop_at: opts.stop_at,
        stop: &stop,
    };
    Ok(merge_blocks(&compiled, vec![walk.block(0)], opts))
}

/// Exhaustive search split across sub-cubes that fix the
/// `ceil(log2(workers))` highest variables.
///
/// The result equals [`exhaustive_min`] exactly, witness included. With
/// early exit only `evaluations` depends on scheduling.
pub fn parallel_min(p: &Polynomial, workers: usize, opts: &SolveOptions) -> Result<SolveResult> {
    opts.validate()?;
    let compiled = Compiled::new(p, MAX_EXHAUSTIVE_VARS)?;
    let workers = workers.max(1);
    let fixed_bits =
        (workers.next_power_of_two().trailing_zeros() as usize).min(compiled.num_vars());
    let stop = AtomicU64::new(u64::MAX);
    let walk = Walk {
        compiled: &compiled,
        fixed_bits,
        stop_at: opts.stop_at,
        stop: &stop,
    };
    let blocks = par::with_workers(workers, || {
        par::map_indexed(1 << fixed_bits, |b| walk.block(b as u64))
    });
    Ok(merge_blocks(&compiled, blocks, opts))
}

fn merge_blocks(compiled: &Compiled, blocks: Vec<BlockResult>, opts: &SolveOptions) -> SolveResult {
    let free = compiled.num_vars() - blocks.len().trailing_zeros() as usize;
    // The earliest block that met the target has seen every earlier
    // assignment, so its first hit is the global first hit.
    let best = blocks
        .iter()
        .find(|r| r.hit_target)
        .or_else(|| {
            blocks
                .iter()
                .enumerate()
                .min_by_key(|(b, r)| (r.min_energy, ((*b as u64) << free) + r.position))
                .map(|(_, r)| r)
        })
        .expect("at least one block");
    let minima = blocks
        .iter()
        .filter(|r| r.min_energy == best.min_energy)
        .map(|r| r.minima)
        .sum();
    SolveResult {
        min_energy: best.min_energy,
        witness: compiled.assignment(best.state),
        num_minima: opts.count_minima.then_some(minima),
        evaluations: blocks.iter().map(|r| r.evaluations).sum(),
        leaves: 1,
        stopped_early: blocks.iter().any(|r| r.hit_target),
    }
}

/// Settings for [`solve_via_split`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSolveOptions {
    pub limits: SplitLimits,
    /// Largest leaf support handed to the exhaustive search.
    pub leaf_var_cap: usize,
    pub solve: SolveOptions,
}

impl Default for SplitSolveOptions {
    fn default() -> Self {
        SplitSolveOptions {
            limits: SplitLimits::default(),
            leaf_var_cap: 32,
            solve: SolveOptions::default(),
        }
    }
}

struct LeafOutcome {
    min_energy: i64,
    witness: Assignment,
    minima: u64,
    evaluations: u64,
    leaves: u64,
    hit_target: bool,
}

/// Splits `p` under `cfg`, minimizes every leaf exactly and returns the
/// smallest leaf minimum. Ties go to the earliest leaf in depth-first order.
pub fn solve_via_split(
    p: &Polynomial,
    cfg: &CostConfig,
    workers: usize,
    opts: &SplitSolveOptions,
) -> Result<SolveResult> {
    opts.solve.validate()?;
    let support = p.support();
    let stop = AtomicBool::new(false);
    let leaf = |path: &[(VarId, bool)], h: &Polynomial| -> Result<Option<LeafOutcome>> {
        if stop.load(Ordering::Relaxed) {
            return Ok(None);
        }
        let mut r = solve_leaf(h, opts)?;
        if r.hit_target {
            stop.store(true, Ordering::Relaxed);
        }
        // Variables cancelled out of the leaf without being fixed are free.
        let unconstrained = support
            .iter()
            .filter(|v| r.witness.get(**v).is_none() && !path.iter().any(|(f, _)| f == *v))
            .copied()
            .collect::<Vec<_>>();
        r.minima = r
            .minima
            .checked_shl(unconstrained.len() as u32)
            .ok_or(Error::Overflow)?;
        r.witness.extend(path.iter().copied());
        r.witness
            .extend(unconstrained.into_iter().map(|v| (v, false)));
        Ok(Some(r))
    };
    let merge = |a: Option<LeafOutcome>, b: Option<LeafOutcome>| match (a, b) {
        (Some(a), Some(b)) => {
            let (mut keep, other) = if b.min_energy < a.min_energy {
                (b, a)
            } else {
                (a, b)
            };
            if other.min_energy == keep.min_energy {
                keep.minima += other.minima;
            }
            keep.evaluations += other.evaluations;
            keep.leaves += other.leaves;
            keep.hit_target |= other.hit_target;
            Some(keep)
        }
        (a, b) => a.or(b),
    };
    let best = par::with_workers(workers.max(1), || {
        fold_leaves(p, cfg, &opts.limits, leaf, merge)
    })?
    .expect("the first leaf is always solved");
    Ok(SolveResult {
        min_energy: best.min_energy,
        witness: best.witness,
        num_minima: opts.solve.count_minima.then_some(best.minima),
        evaluations: best.evaluations,
        leaves: best.leaves,
        stopped_early: best.hit_target,
    })
}

fn solve_leaf(h: &Polynomial, opts: &SplitSolveOptions) -> Result<LeafOutcome> {
    if h.support().len() > opts.leaf_var_cap {
        return Err(Error::TooManyVariables {
            count: h.support().len(),
            limit: opts.leaf_var_cap,
        });
    }
    if h.degree() <= 1 {
        // Separable: each variable independently takes its cheaper value,
        // and every live coefficient is nonzero so the minimizer is unique.
        let mut witness = Assignment::new();
        let mut energy = h.constant_term();
        for (m, c) in h.terms().iter().filter(|(m, _)| !m.is_one()) {
            witness.set(m.vars()[0], *c < 0);
            if *c < 0 {
                energy = energy.checked_add(*c).ok_or(Error::Overflow)?;
            }
        }
        return Ok(LeafOutcome {
            hit_target: opts.solve.stop_at.is_some_and(|t| energy <= t),
            min_energy: energy,
            witness,
            minima: 1,
            evaluations: 1,
            leaves: 1,
        });
    }
    let r = exhaustive_min(h, &opts.solve)?;
    Ok(LeafOutcome {
        min_energy: r.min_energy,
        witness: r.witness,
        minima: r.num_minima.unwrap_or(1),
        evaluations: r.evaluations,
        leaves: 1,
        hit_target: r.stopped_early,
    })
}

/// How a [`SolvePlan`] attacks the objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SolveMode {
    Exhaustive,
    SplitThenExhaustive { cost: CostConfig },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvePlan {
    pub mode: SolveMode,
    pub workers: usize,
    pub split: SplitSolveOptions,
}

impl SolvePlan {
    pub fn exhaustive(workers: usize) -> Self {
        SolvePlan {
            mode: SolveMode::Exhaustive,
            workers,
            split: SplitSolveOptions::default(),
        }
    }

    pub fn split(cost: CostConfig, workers: usize) -> Self {
        SolvePlan {
            mode: SolveMode::SplitThenExhaustive { cost },
            workers,
            split: SplitSolveOptions::default(),
        }
    }

    pub fn with_options(mut self, solve: SolveOptions) -> Self {
        self.split.solve = solve;
        self
    }

    pub fn run(&self, p: &Polynomial) -> Result<SolveResult> {
        match self.mode {
            SolveMode::Exhaustive => parallel_min(p, self.workers, &self.split.solve),
            SolveMode::SplitThenExhaustive { cost } => {
                solve_via_split(p, &cost, self.workers, &self.split)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse;

    fn section2() -> Polynomial {
        parse("1 + x1*x2*x5 + x1*x6*x7*x8 + x3*x4*x8 - x1*x3*x4")
            .unwrap()
            .0
    }

    #[test]
    fn final_ramsey_leaf() {
        let (p, t) = parse("2 - a27 - a28 + a27*a28").unwrap();
        let r = exhaustive_min(&p, &SolveOptions::counting()).unwrap();
        assert_eq!(r.min_energy, 1);
        assert_eq!(r.num_minima, Some(3));
        // Gray order visits 00, 10, 11, 01: first minimum is a27=1, a28=0.
        assert_eq!(r.witness.get(t.lookup("a27").unwrap()), Some(true));
        assert_eq!(r.witness.get(t.lookup("a28").unwrap()), Some(false));
        assert_eq!(p.evaluate(&r.witness).unwrap(), r.min_energy);
    }

    #[test]
    fn section2_minimum() {
        let h = section2();
        let r = exhaustive_min(&h, &SolveOptions::default()).unwrap();
        assert_eq!(r.min_energy, 0);
        assert_eq!(r.evaluations, 256);
        assert_eq!(h.evaluate(&r.witness).unwrap(), 0);
    }

    #[test]
    fn constant_objective() {
        let r = exhaustive_min(&Polynomial::constant(1), &SolveOptions::counting()).unwrap();
        assert_eq!(r.min_energy, 1);
        assert!(r.witness.is_empty());
        assert_eq!(r.num_minima, Some(1));
        let s = solve_via_split(
            &Polynomial::constant(1),
            &CostConfig::new(8, 2, true),
            2,
            &SplitSolveOptions::default(),
        )
        .unwrap();
        assert_eq!(s.min_energy, 1);
    }

    #[test]
    fn parallel_equals_sequential() {
        let h = section2();
        let seq = exhaustive_min(&h, &SolveOptions::counting()).unwrap();
        for w in [1, 2, 3, 8, 1000] {
            assert_eq!(parallel_min(&h, w, &SolveOptions::counting()).unwrap(), seq);
        }
    }

    #[test]
    fn split_solve_section2() {
        let h = section2();
        let r = solve_via_split(
            &h,
            &CostConfig::new(8, 2, true),
            2,
            &SplitSolveOptions {
                solve: SolveOptions::counting(),
                ..Default::default()
            },
        )
        .unwrap();
        let full = exhaustive_min(&h, &SolveOptions::counting()).unwrap();
        assert_eq!(r.min_energy, 0);
        assert_eq!(r.leaves, 3);
        assert_eq!(r.num_minima, full.num_minima);
        assert_eq!(h.evaluate(&r.witness).unwrap(), 0);
    }

    #[test]
    fn early_exit_and_counting_conflict() {
        let opts = SolveOptions {
            count_minima: true,
            stop_at: Some(0),
        };
        assert!(matches!(
            exhaustive_min(&section2(), &opts),
            Err(Error::InvalidOptions(_))
        ));
    }

    #[test]
    fn early_exit_finds_target() {
        let h = section2();
        let r = parallel_min(&h, 4, &SolveOptions::early_exit_zero()).unwrap();
        assert_eq!(r.min_energy, 0);
        assert!(r.stopped_early);
        assert_eq!(h.evaluate(&r.witness).unwrap(), 0);
    }

    #[test]
    fn leaf_cap_is_enforced() {
        let h = section2();
        let opts = SplitSolveOptions {
            leaf_var_cap: 2,
            ..Default::default()
        };
        assert!(matches!(
            solve_via_split(&h, &CostConfig::new(8, 2, true), 1, &opts),
            Err(Error::TooManyVariables { .. })
        ));
    }
}
