//! Ramsey-number Hamiltonians over edge variables and the decision loop
//! that searches for the first vertex count with a positive ground energy.
//!
//! An edge variable set to 1 means the edge is present (colour red). The
//! Hamiltonian counts red `K_m` cliques plus independent `n`-sets, so a
//! graph on `N` vertices has energy 0 exactly when it witnesses
//! `R(m, n) > N`.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::io::SymbolTable;
use crate::poly::{Assignment, Monomial, Polynomial, VarId};
use crate::solver::{SolvePlan, SolveResult};

/// Raw-term budget for [`hamiltonian`] before expansion is refused.
pub const DEFAULT_EXPANSION_CAP: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RamseySpec {
    /// Clique size.
    pub m: usize,
    /// Independent-set size.
    pub n: usize,
    pub vertices: usize,
}

impl RamseySpec {
    pub fn new(m: usize, n: usize, vertices: usize) -> Result<Self> {
        if m < 2 || n < 2 || vertices < 2 {
            return Err(Error::InvalidOptions(format!(
                "Ramsey parameters must be at least 2, got m={m} n={n} N={vertices}"
            )));
        }
        Ok(RamseySpec { m, n, vertices })
    }

    pub fn edges(&self) -> EdgeIndexer {
        EdgeIndexer::new(self.vertices)
    }
}

/// Row-major bijection `(i, j), i < j` ↔ `VarId`: `(0,1) → 0, (0,2) → 1, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeIndexer {
    vertices: usize,
}

impl EdgeIndexer {
    pub fn new(vertices: usize) -> Self {
        EdgeIndexer { vertices }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices * self.vertices.saturating_sub(1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Variable of edge `{i, j}` (either order). Panics on loops or
    /// out-of-range vertices.
    pub fn var(&self, i: usize, j: usize) -> VarId {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        assert!(i != j && j < self.vertices, "bad edge ({i}, {j})");
        let n = self.vertices;
        VarId((i * (2 * n - i - 1) / 2 + (j - i - 1)) as u32)
    }

    pub fn pair(&self, v: VarId) -> (usize, usize) {
        let mut k = v.index();
        assert!(k < self.len(), "edge index {k} out of range");
        let n = self.vertices;
        let mut i = 0;
        while k >= n - i - 1 {
            k -= n - i - 1;
            i += 1;
        }
        (i, i + 1 + k)
    }

    /// Names `e{i}_{j}` in variable order.
    pub fn symbols(&self) -> SymbolTable {
        SymbolTable::with_names((0..self.len()).map(|k| {
            let (i, j) = self.pair(VarId(k as u32));
            format!("e{i}_{j}")
        }))
    }

    fn clique_vars(&self, vertices: &[usize]) -> Vec<VarId> {
        vertices
            .iter()
            .tuple_combinations()
            .map(|(&a, &b)| self.var(a, b))
            .collect()
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| {
        acc.saturating_mul((n - i) as u64) / (i as u64 + 1)
    })
}

/// `H(m, n, N)` in canonical multilinear form.
pub fn hamiltonian(spec: &RamseySpec) -> Result<Polynomial> {
    hamiltonian_with_cap(spec, DEFAULT_EXPANSION_CAP)
}

pub fn hamiltonian_with_cap(spec: &RamseySpec, cap: u64) -> Result<Polynomial> {
    let edges = spec.edges();
    let n_vertices = spec.vertices;
    let set_edges = binomial(spec.n, 2);
    let raw = binomial(n_vertices, spec.m).saturating_add(
        binomial(n_vertices, spec.n)
            .saturating_mul(1u64.checked_shl(set_edges as u32).unwrap_or(u64::MAX)),
    );
    if set_edges >= 63 || raw > cap {
        return Err(Error::ExpansionTooLarge(cap as usize));
    }
    let mut terms: Vec<(Monomial, i64)> = Vec::with_capacity(raw as usize);
    for clique in (0..n_vertices).combinations(spec.m) {
        terms.push((Monomial::new(edges.clique_vars(&clique)), 1));
    }
    for set in (0..n_vertices).combinations(spec.n) {
        // prod (1 - e) over the set's edges, expanded over edge subsets.
        let vars = edges.clique_vars(&set);
        for mask in 0u64..(1 << vars.len()) {
            let chosen = vars
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &v)| v);
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            terms.push((Monomial::new(chosen), sign));
        }
    }
    Polynomial::from_terms(terms)
}

/// Direct count of red `K_m` plus independent `n`-sets in `graph`.
///
/// Bits are indexed by [`EdgeIndexer`]; `graph[k]` is edge `k`.
pub fn count_oracle(spec: &RamseySpec, graph: &[bool]) -> u64 {
    let edges = spec.edges();
    assert_eq!(graph.len(), edges.len(), "graph must bind every edge");
    let edge = |a: usize, b: usize| graph[edges.var(a, b).index()];
    let cliques = (0..spec.vertices)
        .combinations(spec.m)
        .filter(|s| s.iter().tuple_combinations().all(|(&a, &b)| edge(a, b)))
        .count();
    let independent = (0..spec.vertices)
        .combinations(spec.n)
        .filter(|s| s.iter().tuple_combinations().all(|(&a, &b)| !edge(a, b)))
        .count();
    (cliques + independent) as u64
}

/// Edge bits of `assignment` in variable order; unbound edges read as 0.
pub fn graph_bits(spec: &RamseySpec, assignment: &Assignment) -> Vec<bool> {
    (0..spec.edges().len())
        .map(|k| assignment.get(VarId(k as u32)).unwrap_or(false))
        .collect()
}

/// Result of the decision loop at one vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub min_energy: i64,
    pub leaves: u64,
    /// Edge colouring reaching `min_energy`, over every edge variable.
    pub witness: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamseyOutcome {
    pub m: usize,
    pub n: usize,
    /// First `N` whose ground energy is positive; `None` if not reached.
    pub number: Option<usize>,
    pub evidence: BTreeMap<usize, Evidence>,
}

impl RamseyOutcome {
    pub fn is_determined(&self) -> bool {
        self.number.is_some()
    }
}

/// Builds and minimizes `H(m, n, N)` for `N = start, start+1, ...` until
/// the minimum is positive or `max_vertices` is passed.
///
/// `start` defaults to `max(m, n)`. The loop stops at the first positive
/// minimum; an undetermined outcome is not an error.
pub fn determine_ramsey(
    m: usize,
    n: usize,
    start: Option<usize>,
    max_vertices: usize,
    plan: &SolvePlan,
) -> Result<RamseyOutcome> {
    let start = start.unwrap_or(m.max(n));
    if start > max_vertices {
        return Err(Error::InvalidOptions(format!(
            "start N={start} exceeds max N={max_vertices}"
        )));
    }
    let mut outcome = RamseyOutcome {
        m,
        n,
        number: None,
        evidence: BTreeMap::new(),
    };
    for vertices in start..=max_vertices {
        let spec = RamseySpec::new(m, n, vertices)?;
        let result = minimize(&spec, plan)?;
        let positive = result.min_energy > 0;
        outcome.evidence.insert(
            vertices,
            Evidence {
                min_energy: result.min_energy,
                leaves: result.leaves,
                witness: graph_bits(&spec, &result.witness),
            },
        );
        if positive {
            outcome.number = Some(vertices);
            break;
        }
    }
    Ok(outcome)
}

/// Ground energy of `H(m, n, N)` under `plan`.
pub fn minimize(spec: &RamseySpec, plan: &SolvePlan) -> Result<SolveResult> {
    plan.run(&hamiltonian(spec)?)
}
