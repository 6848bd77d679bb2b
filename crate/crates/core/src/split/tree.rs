use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Limit, Result};
use crate::par;
use crate::poly::{Assignment, Polynomial, VarId};
use crate::split::cost::{hamiltonian_cost, is_desirable, select_split_variable, CostConfig};

/// Bounds on the size of a split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitLimits {
    pub max_leaves: usize,
    /// Longest allowed root-to-leaf path; `None` means the root's support size.
    pub max_depth: Option<usize>,
}

impl Default for SplitLimits {
    fn default() -> Self {
        SplitLimits {
            max_leaves: 10_000_000,
            max_depth: None,
        }
    }
}

impl SplitLimits {
    fn depth_for(&self, root: &Polynomial) -> usize {
        self.max_depth.unwrap_or(root.support().len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Split {
        var: VarId,
        zero: usize,
        one: usize,
    },
    /// Not expanded because a limit stopped construction.
    Pending,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitNode {
    /// The fixing that produced this node; `None` at the root.
    pub fixed: Option<(VarId, bool)>,
    pub depth: usize,
    pub hamiltonian: Polynomial,
    pub kind: NodeKind,
}

/// Fully materialized split. Node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTree {
    nodes: Vec<SplitNode>,
    config: CostConfig,
}

/// A desirable Hamiltonian together with the fixings that led to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    /// Fixings in the order they were made.
    pub path: Vec<(VarId, bool)>,
    pub prefix: Assignment,
    pub hamiltonian: Polynomial,
}

impl Leaf {
    fn new(path: &[(VarId, bool)], hamiltonian: Polynomial) -> Self {
        Leaf {
            path: path.to_vec(),
            prefix: path.iter().copied().collect(),
            hamiltonian,
        }
    }
}

/// Aggregate shape of a split.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub leaf_count: u64,
    pub max_depth: usize,
    pub max_leaf_cost: u64,
}

impl SplitSummary {
    fn leaf(depth: usize, cost: u64) -> Self {
        SplitSummary {
            leaf_count: 1,
            max_depth: depth,
            max_leaf_cost: cost,
        }
    }

    fn merge(self, other: Self) -> Self {
        SplitSummary {
            leaf_count: self.leaf_count + other.leaf_count,
            max_depth: self.max_depth.max(other.max_depth),
            max_leaf_cost: self.max_leaf_cost.max(other.max_leaf_cost),
        }
    }
}

impl SplitTree {
    pub fn root(&self) -> &SplitNode {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[SplitNode] {
        &self.nodes
    }

    pub fn config(&self) -> &CostConfig {
        &self.config
    }

    /// Leaves in depth-first order, 0-branch before 1-branch.
    pub fn leaves(&self) -> Vec<Leaf> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect(0, &mut path, &mut out);
        out
    }

    fn collect(&self, idx: usize, path: &mut Vec<(VarId, bool)>, out: &mut Vec<Leaf>) {
        let node = &self.nodes[idx];
        match node.kind {
            NodeKind::Leaf => out.push(Leaf::new(path, node.hamiltonian.clone())),
            NodeKind::Split { var, zero, one } => {
                path.push((var, false));
                self.collect(zero, path, out);
                path.pop();
                path.push((var, true));
                self.collect(one, path, out);
                path.pop();
            }
            NodeKind::Pending => {}
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Leaf)
            .count()
    }

    pub fn is_complete(&self) -> bool {
        self.nodes.iter().all(|n| n.kind != NodeKind::Pending)
    }

    pub fn summary(&self) -> SplitSummary {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Leaf)
            .map(|n| SplitSummary::leaf(n.depth, hamiltonian_cost(&n.hamiltonian, &self.config)))
            .fold(SplitSummary::default(), SplitSummary::merge)
    }
}

/// Splits `h` until every leaf is desirable under `cfg`, keeping every node.
///
/// Memory grows with the whole tree; use [`walk_leaves`] or [`count_leaves`]
/// for large splits.
pub fn build_split_tree(
    h: &Polynomial,
    cfg: &CostConfig,
    limits: &SplitLimits,
) -> Result<SplitTree> {
    let mut tree = SplitTree {
        nodes: vec![SplitNode {
            fixed: None,
            depth: 0,
            hamiltonian: h.clone(),
            kind: NodeKind::Pending,
        }],
        config: *cfg,
    };
    let mut leaves = 0usize;
    let max_depth = limits.depth_for(h);
    match expand(&mut tree, 0, limits.max_leaves, max_depth, &mut leaves) {
        Ok(()) => Ok(tree),
        Err(Expand::Limit(limit)) => Err(Error::LimitExceeded {
            limit,
            partial: Some(Box::new(tree)),
        }),
        Err(Expand::Other(e)) => Err(e),
    }
}

enum Expand {
    Limit(Limit),
    Other(Error),
}

impl From<Error> for Expand {
    fn from(e: Error) -> Self {
        Expand::Other(e)
    }
}

fn expand(
    tree: &mut SplitTree,
    idx: usize,
    max_leaves: usize,
    max_depth: usize,
    leaves: &mut usize,
) -> std::result::Result<(), Expand> {
    let cfg = tree.config;
    let (depth, h) = {
        let n = &tree.nodes[idx];
        (n.depth, n.hamiltonian.clone())
    };
    if is_desirable(&h, &cfg) {
        if *leaves >= max_leaves {
            return Err(Expand::Limit(Limit::MaxLeaves(max_leaves)));
        }
        *leaves += 1;
        tree.nodes[idx].kind = NodeKind::Leaf;
        return Ok(());
    }
    if depth >= max_depth {
        return Err(Expand::Limit(Limit::MaxDepth(max_depth)));
    }
    let var = select_split_variable(&h, &cfg)?;
    let zero = tree.nodes.len();
    let one = zero + 1;
    for bit in [false, true] {
        tree.nodes.push(SplitNode {
            fixed: Some((var, bit)),
            depth: depth + 1,
            hamiltonian: h.substitute(var, bit)?,
            kind: NodeKind::Pending,
        });
    }
    tree.nodes[idx].kind = NodeKind::Split { var, zero, one };
    expand(tree, zero, max_leaves, max_depth, leaves)?;
    expand(tree, one, max_leaves, max_depth, leaves)
}

/// Streams leaves in depth-first order without keeping the tree.
pub fn walk_leaves<F>(
    h: &Polynomial,
    cfg: &CostConfig,
    limits: &SplitLimits,
    mut visit: F,
) -> Result<SplitSummary>
where
    F: FnMut(&[(VarId, bool)], &Polynomial) -> Result<()>,
{
    let mut summary = SplitSummary::default();
    let mut path = Vec::new();
    let max_depth = limits.depth_for(h);
    walk(
        h,
        cfg,
        limits.max_leaves,
        max_depth,
        &mut path,
        &mut summary,
        &mut visit,
    )?;
    Ok(summary)
}

fn walk<F>(
    h: &Polynomial,
    cfg: &CostConfig,
    max_leaves: usize,
    max_depth: usize,
    path: &mut Vec<(VarId, bool)>,
    summary: &mut SplitSummary,
    visit: &mut F,
) -> Result<()>
where
    F: FnMut(&[(VarId, bool)], &Polynomial) -> Result<()>,
{
    if is_desirable(h, cfg) {
        if summary.leaf_count >= max_leaves as u64 {
            return Err(limit(Limit::MaxLeaves(max_leaves)));
        }
        *summary = summary.merge(SplitSummary::leaf(path.len(), hamiltonian_cost(h, cfg)));
        return visit(path, h);
    }
    if path.len() >= max_depth {
        return Err(limit(Limit::MaxDepth(max_depth)));
    }
    let var = select_split_variable(h, cfg)?;
    for bit in [false, true] {
        let child = h.substitute(var, bit)?;
        path.push((var, bit));
        let r = walk(&child, cfg, max_leaves, max_depth, path, summary, visit);
        path.pop();
        r?;
    }
    Ok(())
}

fn limit(limit: Limit) -> Error {
    Error::LimitExceeded {
        limit,
        partial: None,
    }
}

/// Maps every leaf through `leaf` and combines the results with `merge`,
/// branches in parallel when the `parallel` feature is on.
///
/// `merge(left, right)` always receives the earlier leaves on the left, so
/// an order-sensitive merge gives the same answer as a sequential walk.
pub fn fold_leaves<T, L, M>(
    h: &Polynomial,
    cfg: &CostConfig,
    limits: &SplitLimits,
    leaf: L,
    merge: M,
) -> Result<T>
where
    T: Send,
    L: Fn(&[(VarId, bool)], &Polynomial) -> Result<T> + Sync,
    M: Fn(T, T) -> T + Sync,
{
    let ctx = FoldCtx {
        cfg,
        max_leaves: limits.max_leaves,
        max_depth: limits.depth_for(h),
        seen: AtomicUsize::new(0),
        leaf: &leaf,
        merge: &merge,
    };
    ctx.fold(h, Vec::new())
}

struct FoldCtx<'a, L, M> {
    cfg: &'a CostConfig,
    max_leaves: usize,
    max_depth: usize,
    seen: AtomicUsize,
    leaf: &'a L,
    merge: &'a M,
}

impl<T, L, M> FoldCtx<'_, L, M>
where
    T: Send,
    L: Fn(&[(VarId, bool)], &Polynomial) -> Result<T> + Sync,
    M: Fn(T, T) -> T + Sync,
{
    fn fold(&self, h: &Polynomial, path: Vec<(VarId, bool)>) -> Result<T> {
        if is_desirable(h, self.cfg) {
            if self.seen.fetch_add(1, Ordering::Relaxed) >= self.max_leaves {
                return Err(limit(Limit::MaxLeaves(self.max_leaves)));
            }
            return (self.leaf)(&path, h);
        }
        if path.len() >= self.max_depth {
            return Err(limit(Limit::MaxDepth(self.max_depth)));
        }
        let var = select_split_variable(h, self.cfg)?;
        let mut zero_path = path.clone();
        zero_path.push((var, false));
        let mut one_path = path;
        one_path.push((var, true));
        let (a, b) = par::join(
            || self.fold(&h.substitute(var, false)?, zero_path),
            || self.fold(&h.substitute(var, true)?, one_path),
        );
        Ok((self.merge)(a?, b?))
    }
}

/// Leaf count, deepest leaf and costliest leaf, without materializing leaves.
pub fn count_leaves(
    h: &Polynomial,
    cfg: &CostConfig,
    limits: &SplitLimits,
) -> Result<SplitSummary> {
    fold_leaves(
        h,
        cfg,
        limits,
        |path, leaf| Ok(SplitSummary::leaf(path.len(), hamiltonian_cost(leaf, cfg))),
        SplitSummary::merge,
    )
}
