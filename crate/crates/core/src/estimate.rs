//! A-priori estimates of how many leaves a split will produce.
//!
//! Two greedy walks down the split tree drive everything: always fixing the
//! selected variable to 0 gives the shortest path `s`, always fixing it to 1
//! gives the longest path `l`. Along the all-ones walk we also record how
//! many 0-fixings would still be needed at each node; those counts locate
//! the positions `R_i` that feed the combinatorial estimate.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::split::{is_desirable, select_split_variable, CostConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EstimateReport {
    /// 0-fixings on the greedy all-zeros path.
    pub shortest_path: usize,
    /// 1-fixings on the greedy all-ones path.
    pub longest_path: usize,
    /// Entry `j`: 0-fixings still needed after `j` 1-fixings. Length
    /// `longest_path + 1`, last entry 0.
    pub left_moves_needed: Vec<usize>,
    /// `i → R_i` for `i = 1..=shortest_path`, as 1-based positions.
    pub right_move_positions: BTreeMap<usize, usize>,
    #[serde(serialize_with = "decimal")]
    pub lower_bound: BigUint,
    #[serde(serialize_with = "decimal")]
    pub upper_bound: BigUint,
    /// `sum_{k=0}^{s} C(l, k)`.
    #[serde(serialize_with = "decimal")]
    pub binomial_estimate: BigUint,
    /// `1 + sum_{k=1}^{s} C(R_{s-k+1} - 1 + k, k)`.
    #[serde(serialize_with = "decimal")]
    pub combinatorial_estimate: BigUint,
    /// Substitutions performed while estimating.
    pub substitutions: usize,
}

fn decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

#[derive(Default)]
struct Counter(usize);

impl Counter {
    fn substitute(&mut self, h: &Polynomial, cfg: &CostConfig, bit: bool) -> Result<Polynomial> {
        self.0 += 1;
        let v = select_split_variable(h, cfg)?;
        h.substitute(v, bit)
    }

    fn shortest(&mut self, h: &Polynomial, cfg: &CostConfig) -> Result<usize> {
        let mut h = h.clone();
        let mut steps = 0;
        while !is_desirable(&h, cfg) {
            h = self.substitute(&h, cfg, false)?;
            steps += 1;
        }
        Ok(steps)
    }

    fn longest(&mut self, h: &Polynomial, cfg: &CostConfig) -> Result<(usize, Vec<usize>)> {
        let mut h = h.clone();
        let mut needed = vec![self.shortest(&h, cfg)?];
        while !is_desirable(&h, cfg) {
            h = self.substitute(&h, cfg, true)?;
            needed.push(self.shortest(&h, cfg)?);
        }
        Ok((needed.len() - 1, needed))
    }
}

/// Number of greedy 0-fixings until `h` is desirable.
pub fn shortest_path_zero(h: &Polynomial, cfg: &CostConfig) -> Result<usize> {
    Counter::default().shortest(h, cfg)
}

/// Number of greedy 1-fixings until `h` is desirable, with the
/// remaining-0-fixings count recorded before each step and at the end.
pub fn longest_path_one(h: &Polynomial, cfg: &CostConfig) -> Result<(usize, Vec<usize>)> {
    Counter::default().longest(h, cfg)
}

/// `R_i` for `i = 1..=s`: one plus the last index holding `s - i + 1`, or,
/// when that value is skipped, one plus the last index holding anything
/// larger.
pub fn compute_r(needed: &[usize], s: usize) -> Result<BTreeMap<usize, usize>> {
    if needed.is_empty() {
        return Err(Error::EmptySequence);
    }
    (1..=s)
        .map(|i| {
            let target = s - i + 1;
            let pos = needed
                .iter()
                .rposition(|&d| d == target)
                .or_else(|| needed.iter().rposition(|&d| d > target))
                .ok_or_else(|| {
                    Error::InvalidOptions(format!("no entry >= {target} in the d-sequence"))
                })?;
            Ok((i, pos + 1))
        })
        .collect()
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `sum_{k=0}^{s} C(l, k)`.
pub fn estimate_eq8(l: usize, s: usize) -> BigUint {
    (0..=s as u64).map(|k| binomial(l as u64, k)).sum()
}

/// `1 + sum_{k=1}^{s} C(R_{s-k+1} - 1 + k, k)`.
pub fn estimate_eq9(r: &BTreeMap<usize, usize>, s: usize) -> Result<BigUint> {
    let mut total = BigUint::from(1u32);
    for k in 1..=s {
        let ri = *r
            .get(&(s - k + 1))
            .ok_or_else(|| Error::InvalidOptions(format!("R_{} missing", s - k + 1)))?;
        total += binomial((ri + k - 1) as u64, k as u64);
    }
    Ok(total)
}

/// Every estimate for `h` under `cfg`, using the same variable choice as
/// the splitter. Costs O(n^2) substitutions for `n` variables.
pub fn estimate(h: &Polynomial, cfg: &CostConfig) -> Result<EstimateReport> {
    let mut counter = Counter::default();
    let s = counter.shortest(h, cfg)?;
    let (l, needed) = counter.longest(h, cfg)?;
    let r = compute_r(&needed, s)?;
    let two = BigUint::from(2u32);
    Ok(EstimateReport {
        shortest_path: s,
        longest_path: l,
        lower_bound: two.pow(s as u32),
        upper_bound: two.pow(l as u32),
        binomial_estimate: estimate_eq8(l, s),
        combinatorial_estimate: estimate_eq9(&r, s)?,
        left_moves_needed: needed,
        right_move_positions: r,
        substitutions: counter.0,
    })
}
