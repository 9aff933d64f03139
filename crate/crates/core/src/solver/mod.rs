//! Grows a degree-capped subtree with a bounded number of leaves until it
//! spans the graph.
//!
//! Each round either attaches new vertices (through a fan of `k` disjoint
//! paths from an outside vertex, or a single outside edge) or rewires the tree
//! on the same vertex set so that it loses a leaf. When neither is possible
//! the two leaves `u`, `v` under consideration form a non-adjacent pair whose
//! degree sum is below the threshold, which is returned as a witness.
//!
//! Hypotheses are not checked up front: instances that violate them may still
//! succeed, and failures always carry a certificate.

mod ore;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use ore::{hamiltonian_path_traced, ore_hamiltonian_path, OreWitness};
pub use verify::{verify_edges, verify_solution, VerificationReport, Violation};

use crate::connectivity::{fan_to_tree, FanFailure, Separator};
use crate::graph::{validate_bounds, BoundSpec, BoundViolation, Edge, Graph};
use crate::tree::{Host, TreeError, WorkTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    GrowUnsaturated,
    GrowAtLeaf,
    GrowOutsideNeighbor,
    LeafSwap,
    SiblingSwap,
    Case1AtR1,
    Case1General,
    Case2OnPath,
    Case2OffPath,
    OrePathStep,
}

impl StepKind {
    pub const ALL: [StepKind; 10] = [
        StepKind::GrowUnsaturated,
        StepKind::GrowAtLeaf,
        StepKind::GrowOutsideNeighbor,
        StepKind::LeafSwap,
        StepKind::SiblingSwap,
        StepKind::Case1AtR1,
        StepKind::Case1General,
        StepKind::Case2OnPath,
        StepKind::Case2OffPath,
        StepKind::OrePathStep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::GrowUnsaturated => "grow-unsaturated",
            StepKind::GrowAtLeaf => "grow-at-leaf",
            StepKind::GrowOutsideNeighbor => "grow-outside-neighbor",
            StepKind::LeafSwap => "leaf-swap",
            StepKind::SiblingSwap => "sibling-swap",
            StepKind::Case1AtR1 => "case1-at-r1",
            StepKind::Case1General => "case1-general",
            StepKind::Case2OnPath => "case2-onpath",
            StepKind::Case2OffPath => "case2-offpath",
            StepKind::OrePathStep => "ore-path-step",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub kind: StepKind,
    pub edges_added: Vec<Edge>,
    pub edges_removed: Vec<Edge>,
    pub tree_size: usize,
    pub leaf_count: usize,
}

/// Starting tree plus every transformation applied to it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepTrace {
    pub initial_path: Vec<usize>,
    pub records: Vec<StepRecord>,
}

impl StepTrace {
    fn start(path: &[usize]) -> Self {
        StepTrace {
            initial_path: path.to_vec(),
            records: Vec::new(),
        }
    }

    fn push(&mut self, kind: StepKind, before: &BTreeSet<Edge>, after: &WorkTree) {
        self.records.push(StepRecord {
            kind,
            edges_added: after.edges().difference(before).copied().collect(),
            edges_removed: before.difference(after.edges()).copied().collect(),
            tree_size: after.size(),
            leaf_count: after.leaf_count(),
        });
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn initial_potential(&self) -> (usize, usize) {
        let size = self.initial_path.len();
        (size, if size >= 2 { 2 } else { 0 })
    }

    /// Checks that `(tree_size, -leaf_count)` strictly increases from the
    /// initial path through every record, and that the trace is no longer
    /// than `n * (budget - 1)`.
    pub fn check_progress(&self, n: usize, budget: usize) -> Result<(), String> {
        let limit = n * budget.saturating_sub(1);
        if self.len() > limit {
            return Err(format!("{} records exceed n(L-1) = {limit}", self.len()));
        }
        let mut prev = self.initial_potential();
        for (i, r) in self.records.iter().enumerate() {
            let grew = r.tree_size > prev.0;
            let shed = r.tree_size == prev.0 && r.leaf_count < prev.1;
            if !(grew || shed) {
                return Err(format!(
                    "record {i} ({}) moves ({}, {}) -> ({}, {})",
                    r.kind, prev.0, prev.1, r.tree_size, r.leaf_count
                ));
            }
            prev = (r.tree_size, r.leaf_count);
        }
        Ok(())
    }

    /// Re-applies the recorded edge changes to the initial path.
    pub fn replay(&self) -> BTreeSet<Edge> {
        let mut edges: BTreeSet<Edge> = self
            .initial_path
            .windows(2)
            .map(|w| crate::graph::edge(w[0], w[1]))
            .collect();
        for r in &self.records {
            for e in &r.edges_removed {
                edges.remove(e);
            }
            edges.extend(r.edges_added.iter().copied());
        }
        edges
    }
}

/// Certificate that one of the two hypotheses fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Non-adjacent pair with `degree(u) + degree(v) = sum < threshold`.
    DegreeSum {
        u: usize,
        v: usize,
        sum: usize,
        threshold: i64,
    },
    /// Fewer than `k` vertices separating the stated pair.
    Separator(Separator),
}

impl Witness {
    /// Re-checks the certificate against `g` and `spec`.
    pub fn is_sound(&self, g: &Graph, spec: &BoundSpec) -> bool {
        match self {
            Witness::DegreeSum {
                u,
                v,
                sum,
                threshold,
            } => {
                u != v
                    && !g.has_edge(*u, *v)
                    && g.degree(*u) + g.degree(*v) == *sum
                    && (*sum as i64) < *threshold
                    && *threshold == spec.ore_threshold()
            }
            Witness::Separator(s) => s.size() < spec.k && s.disconnects(g),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Spanning { tree: WorkTree, trace: StepTrace },
    Failed { witness: Witness, trace: StepTrace },
}

impl SolveOutcome {
    pub fn trace(&self) -> &StepTrace {
        match self {
            SolveOutcome::Spanning { trace, .. } | SolveOutcome::Failed { trace, .. } => trace,
        }
    }

    pub fn tree(&self) -> Option<&WorkTree> {
        match self {
            SolveOutcome::Spanning { tree, .. } => Some(tree),
            SolveOutcome::Failed { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SolveOutcome::Failed { witness, .. } => Some(witness),
            SolveOutcome::Spanning { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid bounds: {0}")]
    InvalidBounds(#[from] BoundViolation),
    #[error("leaf bound s = {s} outside 2..={max}")]
    InvalidLeafBound { s: usize, max: usize },
    /// A step the construction guarantees did not hold: a bug, not an input problem.
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl From<TreeError> for SolveError {
    fn from(e: TreeError) -> Self {
        SolveError::Internal(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InitialPathError {
    #[error("vertex {vertex} has degree {degree} < k = {k}")]
    LowDegree {
        vertex: usize,
        degree: usize,
        k: usize,
    },
}

/// Path grown from vertex 0 by repeatedly stepping from an end to its
/// smallest-id neighbour off the path. When both ends are stuck every
/// neighbour of an end lies on the path, so it has at least `k + 1` vertices.
pub fn initial_path(g: &Graph, k: usize) -> Result<WorkTree, InitialPathError> {
    if let Some((degree, vertex)) = g.min_degree() {
        if degree < k {
            return Err(InitialPathError::LowDegree { vertex, degree, k });
        }
    }
    Ok(WorkTree::from_path(g.n(), &greedy_path(g)).expect("greedy walk is a path"))
}

fn greedy_path(g: &Graph) -> Vec<usize> {
    let mut on = vec![false; g.n()];
    let mut back = vec![0];
    on[0] = true;
    let mut front: Vec<usize> = Vec::new();
    loop {
        let end = *back.last().expect("non-empty");
        match g.neighbors(end).find(|&y| !on[y]) {
            Some(y) => {
                on[y] = true;
                back.push(y);
            }
            None => break,
        }
    }
    loop {
        let end = front.last().copied().unwrap_or(0);
        match g.neighbors(end).find(|&y| !on[y]) {
            Some(y) => {
                on[y] = true;
                front.push(y);
            }
            None => break,
        }
    }
    front.reverse();
    front.extend(back);
    front
}

/// Two leaves whose tree path passes through `r1`: from the two smallest
/// neighbours of `r1`, walk outward along smallest-id neighbours.
pub fn select_uv(t: &WorkTree, r1: usize) -> Result<(usize, usize), TreeError> {
    if !t.contains(r1) {
        return Err(TreeError::NotInTree(r1));
    }
    let mut starts = t.tree_neighbors(r1);
    let (Some(a), Some(b)) = (starts.next(), starts.next()) else {
        return Err(TreeError::Precondition(format!(
            "r1 = {r1} has tree degree below 2"
        )));
    };
    let walk = |mut prev: usize, mut cur: usize| {
        while t.degree(cur) > 1 {
            let next = t
                .tree_neighbors(cur)
                .find(|&y| y != prev)
                .expect("degree > 1");
            prev = cur;
            cur = next;
        }
        cur
    };
    Ok((walk(r1, a), walk(r1, b)))
}

fn low_degree_separator(g: &Graph, vertex: usize) -> Separator {
    let other = (0..g.n())
        .find(|&y| y != vertex && !g.has_edge(vertex, y))
        .expect("a vertex of degree < k <= n-1 has a non-neighbour");
    Separator {
        cut: g.neighbors(vertex).collect(),
        pair: (vertex, other),
    }
}

struct Run<'a> {
    host: Host<'a>,
    tree: WorkTree,
    trace: StepTrace,
}

impl Run<'_> {
    fn commit(&mut self, kind: StepKind, next: WorkTree) {
        self.trace.push(kind, self.tree.edges(), &next);
        self.tree = next;
    }

    fn fail(self, witness: Witness) -> SolveOutcome {
        SolveOutcome::Failed {
            witness,
            trace: self.trace,
        }
    }
}

fn solve_ore(g: &Graph, spec: &BoundSpec) -> SolveOutcome {
    let mut trace = StepTrace::start(&[0]);
    let mut prev: BTreeSet<Edge> = BTreeSet::new();
    let res = hamiltonian_path_traced(g, |p| {
        if p.len() < 2 {
            return;
        }
        let t = WorkTree::from_path(g.n(), p).expect("rotation keeps a path");
        trace.push(StepKind::OrePathStep, &prev, &t);
        prev = t.edges().clone();
    });
    match res {
        Ok(path) => SolveOutcome::Spanning {
            tree: WorkTree::from_path(g.n(), &path).expect("hamiltonian path"),
            trace,
        },
        Err(w) => SolveOutcome::Failed {
            witness: Witness::DegreeSum {
                u: w.u,
                v: w.v,
                sum: w.sum,
                threshold: spec.ore_threshold(),
            },
            trace,
        },
    }
}

/// Builds a spanning tree with `deg(w) <= cap(w)` everywhere and at most
/// `spec.leaf_budget()` leaves, or a witness that a hypothesis fails.
pub fn solve(g: &Graph, spec: &BoundSpec) -> Result<SolveOutcome, SolveError> {
    validate_bounds(spec, g)?;
    let budget = spec.leaf_budget();
    let threshold = spec.ore_threshold();
    if budget == 2 {
        return Ok(solve_ore(g, spec));
    }

    let start = match initial_path(g, spec.k) {
        Ok(t) => t,
        Err(InitialPathError::LowDegree { vertex, .. }) => {
            return Ok(SolveOutcome::Failed {
                witness: Witness::Separator(low_degree_separator(g, vertex)),
                trace: StepTrace::default(),
            });
        }
    };
    let path: Vec<usize> = {
        let leaf = start.leaves().next().unwrap_or(0);
        let other = start.leaves().last().unwrap_or(leaf);
        start.tree_path(leaf, other)?
    };
    let mut run = Run {
        host: Host::new(g, spec),
        tree: start,
        trace: StepTrace::start(&path),
    };

    while !run.tree.is_spanning() {
        let t = &run.tree;
        let w = (0..g.n())
            .filter(|&x| !t.contains(x))
            .find(|&x| g.neighbors(x).any(|y| t.contains(y)))
            .or_else(|| (0..g.n()).find(|&x| !t.contains(x)))
            .expect("tree is not spanning");
        let fan = match fan_to_tree(g, w, t.membership(), spec.k) {
            Ok(f) => f,
            Err(FanFailure::Separated { separator, .. }) => {
                return Ok(run.fail(Witness::Separator(separator)));
            }
            Err(FanFailure::Invalid(e)) => return Err(SolveError::Internal(e.to_string())),
        };
        let leaves = t.leaf_count();

        if leaves < budget {
            let pi = fan
                .paths
                .iter()
                .find(|p| {
                    let r = *p.last().expect("non-empty");
                    t.degree(r) < spec.cap(r)
                })
                .ok_or_else(|| {
                    SolveError::Internal(format!(
                        "{leaves} leaves < budget {budget} but every fan endpoint is saturated"
                    ))
                })?;
            let next = t.attach_fan_path(&run.host, pi)?;
            run.commit(StepKind::GrowUnsaturated, next);
            continue;
        }

        if let Some(pi) = fan
            .paths
            .iter()
            .find(|p| t.is_leaf(*p.last().expect("non-empty")))
        {
            let next = t.attach_fan_path(&run.host, pi)?;
            run.commit(StepKind::GrowAtLeaf, next);
            continue;
        }

        let outside = t
            .leaves()
            .find_map(|l| g.neighbors(l).find(|&y| !t.contains(y)).map(|y| [y, l]));
        if let Some(pi) = outside {
            let next = t.attach_fan_path(&run.host, &pi)?;
            run.commit(StepKind::GrowOutsideNeighbor, next);
            continue;
        }

        let leaf_list: Vec<usize> = t.leaves().collect();
        let adjacent = leaf_list.iter().enumerate().find_map(|(i, &x)| {
            leaf_list[i + 1..]
                .iter()
                .find(|&&y| g.has_edge(x, y))
                .map(|&y| (x, y))
        });
        if let Some((x, y)) = adjacent {
            let next = t.leaf_leaf_swap(&run.host, x, y)?;
            run.commit(StepKind::LeafSwap, next);
            continue;
        }

        let pi1 = &fan.paths[0];
        let r1 = *pi1.last().expect("non-empty");
        let (u, v) = select_uv(t, r1)?;
        if g.has_edge(u, v) {
            return Err(SolveError::Internal(format!(
                "selected leaves {u}, {v} are adjacent"
            )));
        }
        let ot = t.orient(u)?;

        // B: parent of each graph neighbour of u, with that neighbour as its child z
        let mut b_set: BTreeMap<usize, usize> = BTreeMap::new();
        let mut collision = None;
        for x in g.neighbors(u) {
            let p = ot
                .parent(x)
                .ok_or_else(|| SolveError::Internal(format!("neighbour {x} of u has no parent")))?;
            if let Some(&x1) = b_set.get(&p) {
                collision = Some((x1, x));
                break;
            }
            b_set.insert(p, x);
        }
        if let Some((x1, x2)) = collision {
            let next = ot.sibling_collision_swap(&run.host, x1, x2)?;
            run.commit(StepKind::SiblingSwap, next);
            continue;
        }

        // A ∩ B
        let Some((zm, z)) = g.neighbors(v).find_map(|y| b_set.get(&y).map(|&z| (y, z))) else {
            let sum = g.degree(u) + g.degree(v);
            if sum as i64 >= threshold {
                return Err(SolveError::Internal(format!(
                    "A and B are disjoint although d({u}) + d({v}) = {sum} >= {threshold}"
                )));
            }
            return Ok(run.fail(Witness::DegreeSum {
                u,
                v,
                sum,
                threshold,
            }));
        };

        let uv = ot.tree_path(u, v)?;
        let edge_on_uv = uv.windows(2).any(|w| w == [zm, z]);
        let (kind, next) = if edge_on_uv {
            if z == r1 {
                (StepKind::Case1AtR1, ot.case1_at_r1(&run.host, pi1, v, z)?)
            } else {
                (
                    StepKind::Case1General,
                    ot.case1_general(&run.host, pi1, v, z)?,
                )
            }
        } else if uv.contains(&zm) {
            (StepKind::Case2OnPath, ot.case2_onpath(&run.host, v, z)?)
        } else {
            let branch = ot.branch_vertex(v, zm)?;
            (
                StepKind::Case2OffPath,
                ot.case2_offpath(&run.host, v, z, branch)?,
            )
        };
        run.commit(kind, next);
    }

    Ok(SolveOutcome::Spanning {
        tree: run.tree,
        trace: run.trace,
    })
}

/// Bound specification for a spanning tree with at most `s` leaves: `k = 1`,
/// vertex 0 capped at `s`, every other vertex at `n - 1`.
pub fn max_leaves_bounds(n: usize, s: usize) -> Result<BoundSpec, SolveError> {
    let max = n.saturating_sub(1);
    if s < 2 || s > max {
        return Err(SolveError::InvalidLeafBound { s, max });
    }
    let mut caps = vec![max; n];
    caps[0] = s;
    Ok(BoundSpec::new(1, caps))
}

/// Spanning tree with at most `s` leaves (hence maximum degree at most `s`).
pub fn solve_max_leaves(g: &Graph, s: usize) -> Result<SolveOutcome, SolveError> {
    let spec = max_leaves_bounds(g.n(), s)?;
    solve(g, &spec)
}
