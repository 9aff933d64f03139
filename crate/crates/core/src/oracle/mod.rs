//! Ground truth for small instances and instance generators.
//!
//! The brute-force routines here are deliberately naive: exhaustive
//! edge-subset recursion for spanning trees, subset scans for separators and
//! a fraction-free determinant for the matrix-tree count. They exist to check
//! the solver and the flow code, not to be fast.

pub mod configs;

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::connectivity::{is_k_connected, local_connectivity_at_least};
use crate::graph::{degree_sum_check, validate_bounds, BoundSpec, Edge, Graph};

/// Largest graph the enumerators accept.
pub const MAX_ENUMERATION_N: usize = 14;
/// Default cap on the number of trees an enumeration may produce.
pub const DEFAULT_TREE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices; enumeration is limited to {max}")]
    TooLarge { n: usize, max: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("more than {limit} spanning trees")]
    TooManyTrees { limit: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
}

struct UndoDsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
    history: Vec<(usize, usize, bool)>,
}

impl UndoDsu {
    fn new(n: usize) -> Self {
        UndoDsu {
            parent: (0..n).collect(),
            rank: vec![0; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.rank[ra] < self.rank[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        let bumped = self.rank[ra] == self.rank[rb];
        self.parent[rb] = ra;
        if bumped {
            self.rank[ra] += 1;
        }
        self.history.push((ra, rb, bumped));
        true
    }

    fn undo(&mut self) {
        let (ra, rb, bumped) = self.history.pop().expect("undo without union");
        self.parent[rb] = rb;
        if bumped {
            self.rank[ra] -= 1;
        }
    }
}

/// Constraints applied while enumerating: degree caps and a budget on
/// `sum over vertices of max(0, deg - 2)`, which for a tree equals
/// `leaves - 2`. Both only grow as edges are added, so they prune soundly.
struct Filter<'a> {
    caps: Option<&'a [usize]>,
    excess_budget: usize,
}

struct TreeSearch<'a> {
    n: usize,
    edges: Vec<Edge>,
    filter: Filter<'a>,
    chosen: Vec<Edge>,
    degree: Vec<usize>,
    excess: usize,
    dsu: UndoDsu,
}

impl<'a> TreeSearch<'a> {
    fn new(g: &Graph, filter: Filter<'a>) -> Self {
        TreeSearch {
            n: g.n(),
            edges: g.edges().collect(),
            filter,
            chosen: Vec::new(),
            degree: vec![0; g.n()],
            excess: 0,
            dsu: UndoDsu::new(g.n()),
        }
    }

    /// Whether the chosen edges plus `edges[from..]` still connect the graph.
    fn connectable(&self, from: usize) -> bool {
        let mut d = UndoDsu::new(self.n);
        let mut comps = self.n;
        for &(a, b) in self.chosen.iter().chain(&self.edges[from..]) {
            if d.union(a, b) {
                comps -= 1;
            }
        }
        d.history.clear();
        comps == 1
    }

    fn can_take(&self, v: usize) -> bool {
        let d = self.degree[v] + 1;
        self.filter.caps.is_none_or(|c| d <= c[v])
    }

    fn run<F>(&mut self, i: usize, visit: &mut F) -> bool
    where
        F: FnMut(&[Edge]) -> bool,
    {
        if self.chosen.len() + 1 == self.n {
            return visit(&self.chosen);
        }
        let needed = self.n - 1 - self.chosen.len();
        if self.edges.len() - i < needed {
            return true;
        }
        let (a, b) = self.edges[i];
        if self.dsu.find(a) != self.dsu.find(b) && self.can_take(a) && self.can_take(b) {
            let extra = usize::from(self.degree[a] >= 2) + usize::from(self.degree[b] >= 2);
            if self.excess + extra <= self.filter.excess_budget {
                self.dsu.union(a, b);
                self.degree[a] += 1;
                self.degree[b] += 1;
                self.excess += extra;
                self.chosen.push((a, b));
                let go_on = self.run(i + 1, visit);
                self.chosen.pop();
                self.excess -= extra;
                self.degree[a] -= 1;
                self.degree[b] -= 1;
                self.dsu.undo();
                if !go_on {
                    return false;
                }
            }
        }
        if self.connectable(i + 1) {
            return self.run(i + 1, visit);
        }
        true
    }
}

fn guard(g: &Graph) -> Result<(), OracleError> {
    if g.n() > MAX_ENUMERATION_N {
        return Err(OracleError::TooLarge {
            n: g.n(),
            max: MAX_ENUMERATION_N,
        });
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    Ok(())
}

/// Calls `visit` once per spanning tree of `g`; returns how many there were.
pub fn for_each_spanning_tree<F>(
    g: &Graph,
    limit: usize,
    mut visit: F,
) -> Result<usize, OracleError>
where
    F: FnMut(&[Edge]),
{
    guard(g)?;
    if g.n() <= 1 {
        visit(&[]);
        return Ok(1);
    }
    let mut count = 0usize;
    let mut search = TreeSearch::new(
        g,
        Filter {
            caps: None,
            excess_budget: usize::MAX,
        },
    );
    let completed = search.run(0, &mut |t: &[Edge]| {
        count += 1;
        if count > limit {
            return false;
        }
        visit(t);
        true
    });
    if !completed {
        return Err(OracleError::TooManyTrees { limit });
    }
    Ok(count)
}

/// Every spanning tree of `g` as a sorted edge list.
pub fn enumerate_spanning_trees(g: &Graph, limit: usize) -> Result<Vec<Vec<Edge>>, OracleError> {
    let mut out = Vec::new();
    for_each_spanning_tree(g, limit, |t| out.push(t.to_vec()))?;
    Ok(out)
}

/// Number of spanning trees by the matrix-tree theorem: determinant of the
/// Laplacian with row and column 0 removed, by Bareiss elimination.
pub fn kirchhoff_count(g: &Graph) -> i128 {
    let n = g.n();
    if n <= 1 {
        return 1;
    }
    let size = n - 1;
    let mut m = vec![vec![0i128; size]; size];
    for u in 1..n {
        m[u - 1][u - 1] = g.degree(u) as i128;
        for v in g.neighbors(u).filter(|&v| v >= 1) {
            m[u - 1][v - 1] = -1;
        }
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..size {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..size).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[size - 1][size - 1]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// Fewest leaves over all spanning trees within the caps.
    pub best_leaf_count: Option<usize>,
    /// A cap-respecting spanning tree with `best_leaf_count` leaves.
    pub example_tree: Option<Vec<Edge>>,
}

fn find_tree(g: &Graph, caps: &[usize], excess_budget: usize) -> Option<Vec<Edge>> {
    let mut found = None;
    let mut search = TreeSearch::new(
        g,
        Filter {
            caps: Some(caps),
            excess_budget,
        },
    );
    search.run(0, &mut |t: &[Edge]| {
        found = Some(t.to_vec());
        false
    });
    found
}

/// Whether some spanning tree respects every cap and has at most
/// `spec.leaf_budget()` leaves, with the minimum leaf count among
/// cap-respecting trees.
///
/// Searches for a tree with at most `l` leaves for `l = 2, 3, ...`; the first
/// hit is optimal. Trees over the caps or the current leaf bound are pruned
/// rather than listed.
pub fn feasibility_bruteforce(
    g: &Graph,
    spec: &BoundSpec,
) -> Result<FeasibilityResult, OracleError> {
    guard(g)?;
    let n = g.n();
    if spec.caps.len() != n {
        return Err(OracleError::InvalidParameters(format!(
            "{} caps for {n} vertices",
            spec.caps.len()
        )));
    }
    let infeasible = FeasibilityResult {
        feasible: false,
        best_leaf_count: None,
        example_tree: None,
    };
    if n < 3 {
        // the only tree is a single vertex or a single edge
        let tree: Vec<Edge> = g.edges().collect();
        let ok = (0..n).all(|v| g.degree(v) <= spec.caps[v]);
        return Ok(if ok {
            FeasibilityResult {
                feasible: 2 <= spec.leaf_budget() || n < 2,
                best_leaf_count: Some(if n == 2 { 2 } else { 0 }),
                example_tree: Some(tree),
            }
        } else {
            infeasible
        });
    }
    if find_tree(g, &spec.caps, usize::MAX).is_none() {
        return Ok(infeasible);
    }
    for leaves in 2..n {
        if let Some(tree) = find_tree(g, &spec.caps, leaves - 2) {
            return Ok(FeasibilityResult {
                feasible: leaves <= spec.leaf_budget(),
                best_leaf_count: Some(leaves),
                example_tree: Some(tree),
            });
        }
    }
    unreachable!("a cap-respecting tree exists and has at most n-1 leaves")
}

/// Size of a smallest vertex set separating the non-adjacent pair `s`, `t`,
/// by scanning subsets of increasing size.
pub fn min_separator_bruteforce(g: &Graph, s: usize, t: usize) -> usize {
    let n = g.n();
    let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best = others.len();
    for mask in 0u64..(1u64 << others.len()) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let mut removed = vec![false; n];
        for (i, &v) in others.iter().enumerate() {
            if mask >> i & 1 == 1 {
                removed[v] = true;
            }
        }
        if !g.reachable_avoiding(s, &removed)[t] {
            best = size;
        }
    }
    best
}

/// Complete bipartite `K(X, Y)` with `|X| = k` and `|Y| = 2 - k + sum(d_head)`.
///
/// Vertex `i < k` is `x_i` with cap `d_head[i]`; the `Y` side is capped at
/// `min(n - 1, max(d_head))`, so `d_head` stay the `k` smallest caps. Every
/// non-adjacent pair has degree sum `2k`, one below the threshold, and no
/// spanning tree keeps every `x_i` within its cap.
pub fn tightness_instance(k: usize, d_head: &[usize]) -> Result<(Graph, BoundSpec), OracleError> {
    let bad = |m: String| Err(OracleError::InvalidParameters(m));
    if k < 1 {
        return bad("k must be at least 1".into());
    }
    if d_head.len() != k {
        return bad(format!("{} caps given for k = {k}", d_head.len()));
    }
    if d_head.iter().any(|&d| d < 3) {
        return bad("every head cap must be at least 3".into());
    }
    if d_head.windows(2).any(|w| w[0] > w[1]) {
        return bad("head caps must be ascending".into());
    }
    let total: usize = d_head.iter().sum();
    let y = (2 + total)
        .checked_sub(k)
        .filter(|&y| y > k)
        .ok_or_else(|| OracleError::InvalidParameters("inconsistent |Y|".into()))?;
    let n = k + y;
    debug_assert_eq!(n, 2 + total);
    let g = Graph::complete_bipartite(k, y);
    let top = *d_head.last().expect("k >= 1");
    let mut caps = d_head.to_vec();
    caps.extend(std::iter::repeat_n(top.min(n - 1), y));
    let spec = BoundSpec::new(k, caps);
    validate_bounds(&spec, &g).map_err(|e| OracleError::InvalidParameters(e.to_string()))?;
    let head_excess: i64 = d_head.iter().map(|&d| d as i64 - 2).sum();
    assert_eq!(
        spec.excess(),
        head_excess,
        "head caps must be the k smallest"
    );
    Ok((g, spec))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceMode {
    /// Stop as soon as both hypotheses hold.
    AboveThreshold,
    /// Then delete edges while both still hold, down to a locally minimal graph.
    AtThreshold,
}

impl fmt::Display for InstanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceMode::AboveThreshold => "above-threshold",
            InstanceMode::AtThreshold => "at-threshold",
        })
    }
}

impl std::str::FromStr for InstanceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "above-threshold" | "above" => Ok(InstanceMode::AboveThreshold),
            "at-threshold" | "at" => Ok(InstanceMode::AtThreshold),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

/// Random `k`-connected graph satisfying the degree-sum condition for random
/// caps in `[2, min(n-1, 5)]`. Deterministic in `seed` (ChaCha8).
pub fn random_instance(
    n: usize,
    k: usize,
    seed: u64,
    mode: InstanceMode,
) -> Result<(Graph, BoundSpec), OracleError> {
    if n < 4 || k < 1 || k + 1 > n {
        return Err(OracleError::InvalidParameters(format!(
            "need n >= max(4, k+1) and k >= 1, got n = {n}, k = {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hi = (n - 1).min(5);
    let caps: Vec<usize> = (0..n).map(|_| rng.random_range(2..=hi)).collect();
    let spec = BoundSpec::new(k, caps);
    let threshold = spec.ore_threshold();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut g = Graph::empty(n);
    for i in 0..n {
        g.insert_edge(order[i], order[(i + 1) % n]);
    }
    let mut missing: Vec<Edge> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v))
        .collect();
    missing.shuffle(&mut rng);
    let mut pending = missing.into_iter();
    loop {
        if degree_sum_check(&g, threshold).holds() && is_k_connected(&g, k).is_yes() {
            break;
        }
        let (u, v) = pending
            .next()
            .expect("the complete graph satisfies both conditions");
        g.insert_edge(u, v);
    }

    if mode == InstanceMode::AtThreshold {
        loop {
            let mut edges: Vec<Edge> = g.edges().collect();
            edges.shuffle(&mut rng);
            let mut removed_any = false;
            for (a, b) in edges {
                g.remove_edge(a, b);
                // dropping ab keeps k-connectivity iff a and b stay k-linked
                let keep_out = degree_sum_check(&g, threshold).holds()
                    && local_connectivity_at_least(&g, a, b, k).expect("non-adjacent pair");
                if keep_out {
                    removed_any = true;
                } else {
                    g.insert_edge(a, b);
                }
            }
            if !removed_any {
                break;
            }
        }
    }
    Ok((g, spec))
}

/// Largest order [`for_each_degree_sum_graph`] accepts.
pub const MAX_LABELED_N: usize = 7;

/// Calls `visit` on every labelled graph on `n` vertices (each edge subset of
/// `K_n`) in which all non-adjacent pairs have degree sum at least
/// `threshold`. Returns how many graphs were visited.
pub fn for_each_degree_sum_graph<F>(
    n: usize,
    threshold: usize,
    mut visit: F,
) -> Result<usize, OracleError>
where
    F: FnMut(&Graph),
{
    if n > MAX_LABELED_N {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_LABELED_N,
        });
    }
    let pairs: Vec<Edge> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut visited = 0;
    for mask in 0u32..(1u32 << pairs.len()) {
        let mut adj = [0u8; MAX_LABELED_N];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        let deg = |v: usize| adj[v].count_ones() as usize;
        let ok = pairs
            .iter()
            .all(|&(u, v)| adj[u] >> v & 1 == 1 || deg(u) + deg(v) >= threshold);
        if ok {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            visit(&Graph::from_edges(n, edges).expect("pairs are distinct"));
            visited += 1;
        }
    }
    Ok(visited)
}

/// Named small graphs plus seeded random graphs on 3 to 8 vertices, used as
/// the shared fixture set for connectivity checks.
pub fn fixture_graphs() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 3..=8 {
        out.push((format!("cycle-{n}"), Graph::cycle(n)));
        out.push((format!("path-{n}"), Graph::path(n)));
        out.push((format!("complete-{n}"), Graph::complete(n)));
    }
    for (a, b) in [(1, 4), (2, 3), (2, 6), (3, 3), (3, 5), (4, 4)] {
        out.push((
            format!("bipartite-{a}-{b}"),
            Graph::complete_bipartite(a, b),
        ));
    }
    out.push((
        "two-triangles".into(),
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
            .expect("valid"),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..200 {
        let n = rng.random_range(3..=8usize);
        let p = rng.random_range(0.2..0.9);
        let edges: Vec<Edge> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.random_bool(p))
            .collect();
        out.push((
            format!("random-{i}"),
            Graph::from_edges(n, edges).expect("valid"),
        ));
    }
    out
}
