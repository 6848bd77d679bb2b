//! Split-reduc: branch on high-cost variables until every leaf Hamiltonian
//! fits the device.

mod cost;
mod tree;

pub use cost::{
    hamiltonian_cost, is_desirable, ramp, select_split_variable, term_aux_cost, variable_cost,
    variable_costs, CostConfig, TieBreak,
};
pub use tree::{
    build_split_tree, count_leaves, fold_leaves, walk_leaves, Leaf, NodeKind, SplitLimits,
    SplitNode, SplitSummary, SplitTree,
};
