//! Split-and-reduce compilation of high-order pseudo-Boolean objectives.
//!
//! A Hamiltonian too large or too high-order for a device is split by
//! fixing variables to 0 and 1 until every branch fits; the resulting
//! family of small Hamiltonians has the same global minimum. Around that
//! core sit an a-priori leaf-count estimator, a penalty quadratizer, the
//! Ramsey-number Hamiltonians, and an exact Gray-code minimizer.

pub mod error;
pub mod estimate;
pub mod io;
mod par;
pub mod poly;
pub mod quadratize;
pub mod ramsey;
pub mod solver;
pub mod split;

pub use error::{Error, Limit, Result};
pub use poly::{Assignment, Monomial, Polynomial, VarId};
pub use split::{CostConfig, SplitLimits};

/// Whether this build was compiled with the rayon-backed `parallel` feature.
pub const fn parallel_enabled() -> bool {
    par::is_parallel()
}
