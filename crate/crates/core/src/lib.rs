//! Front-door adjustment sets in causal DAGs.
//!
//! Finding, verifying, minimizing and listing the sets `Z` that satisfy the
//! front-door criterion relative to exposures `X` and outcomes `Y`, all in
//! time linear in the size of the graph (per output for listing). Also an
//! exact evaluator of the front-door formula on discrete models and
//! brute-force reference implementations for testing.
//!
//! ```
//! use frontdoor_core::{find_fd, fixtures, FdQuery};
//!
//! let g = fixtures::g1();
//! let x = g.set_by_names(["X"]).unwrap();
//! let y = g.set_by_names(["Y"]).unwrap();
//! let q = FdQuery::with_defaults(&g, x, y).unwrap();
//! let z = find_fd(&g, &q).into_set().unwrap();
//! assert_eq!(g.names_of(&z), ["Z"]);
//! ```

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod enumerate;
mod error;
pub mod estimator;
pub mod find;
pub mod fixtures;
pub mod graph;
pub mod minimal;
pub mod nodeset;
pub mod oracle;
pub mod search;

pub use enumerate::{enumerate_fd, FdEnumerator};
pub use error::QueryError;
pub use estimator::{
    do_oracle, fd_estimate, fd_estimate_observed, joint_distribution, DiscreteModel, JointTable, ModelError,
};
pub use find::{
    compute_zi, compute_zii, compute_zii_tabled, default_restrict, find_fd, find_fd_traced, verify_fd, FdQuery,
    FdResult, FindTrace,
};
pub use graph::{expand_bidirected, Dag, DagBuilder, EdgeKind, EdgeMask, GraphError};
pub use minimal::{find_minimal_fd, minimal_decomposition, MinimalDecomposition};
pub use nodeset::NodeSet;
pub use search::{bayes_ball, d_separated, directed_reachable, generic_search, Case, RuleTable, SearchStats, Step};
