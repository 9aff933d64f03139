//! Spanning trees with per-vertex degree caps and few leaves.
//!
//! Given a `k`-connected graph and caps `d(w) >= 2`, with `d_1 <= ... <= d_k`
//! the `k` smallest, [`solver::solve`] looks for a spanning tree `T` with
//! `deg_T(w) <= d(w)` for every vertex and at most
//! `L = 2 + sum_{j<=k} (d_j - 2)` leaves. It succeeds whenever every pair of
//! non-adjacent vertices has degree sum at least `n - 1 - sum_{j<=k} (d_j - 2)`;
//! otherwise it may still succeed, or it returns a witness pair or separator.
//!
//! Modules:
//! - [`graph`]: graphs, bound specifications, file formats, the degree-sum check.
//! - [`connectivity`]: vertex-disjoint paths, k-connectivity, fans.
//! - [`tree`]: the work tree and its exchange transformations.
//! - [`solver`]: the growth loop, the Hamiltonian-path special case, verification.
//! - [`oracle`]: brute-force ground truth and instance generators.

pub mod connectivity;
pub mod graph;
pub mod oracle;
pub mod solver;
pub mod tree;

pub use connectivity::{Fan, KConnectivity, Separator};
pub use graph::{BoundSpec, Edge, Graph, OreCheck};
pub use solver::{solve, solve_max_leaves, SolveError, SolveOutcome, StepKind, StepTrace, Witness};
pub use tree::{Host, TreeError, WorkTree};
