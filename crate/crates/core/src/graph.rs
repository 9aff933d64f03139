//! Simple undirected graphs, degree-cap specifications and the pairwise
//! degree-sum condition, together with the plain-text file formats.
//!
//! Vertices are the integers `0..n`. Edges are stored as unordered pairs
//! normalised to `(min, max)`.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

/// An undirected edge, always stored as `(min, max)`.
pub type Edge = (usize, usize);

/// Normalises an unordered vertex pair.
#[inline]
pub fn edge(a: usize, b: usize) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: vertex id {id} out of range for n = {n}")]
    IdOutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("header announces {expected} edges but {found} were listed")]
    EdgeCount { expected: usize, found: usize },
    #[error("edge {u} -- {v} is not in the graph")]
    NotAnEdge { u: usize, v: usize },
}

/// Simple undirected graph with sorted adjacency sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range ids. Line numbers in errors are edge indices (1-based).
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Graph::empty(n);
        for (i, (u, v)) in edges.into_iter().enumerate() {
            g.checked_insert(i + 1, u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v);
            }
        }
        g
    }

    /// Complete bipartite graph with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::empty(a + b);
        for x in 0..a {
            for y in a..a + b {
                g.insert_edge(x, y);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            g.insert_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.insert_edge(i - 1, i);
        }
        g
    }

    /// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
    pub fn petersen() -> Self {
        let mut g = Graph::empty(10);
        for i in 0..5 {
            g.insert_edge(i, (i + 1) % 5);
            g.insert_edge(i, i + 5);
            g.insert_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    fn checked_insert(&mut self, line: usize, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for id in [u, v] {
            if id >= n {
                return Err(GraphError::IdOutOfRange { line, id, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, v: u });
        }
        if !self.insert_edge(u, v) {
            return Err(GraphError::DuplicateEdge { line, u, v });
        }
        Ok(())
    }

    /// Returns false if the edge was already present.
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v);
        if self.adj[u].insert(v) {
            self.adj[v].insert(u);
            self.m += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if self.adj[u].remove(&v) {
            self.adj[v].remove(&u);
            self.m -= 1;
            true
        } else {
            false
        }
    }

    /// Copy of this graph with the edge `uv` removed.
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.remove_edge(u, v);
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn neighbor_set(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(&v)
    }

    /// All edges in ascending `(u, v)` order with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn min_degree(&self) -> Option<(usize, usize)> {
        (0..self.n()).map(|v| (self.degree(v), v)).min()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.m * 2 == n * n.saturating_sub(1)
    }

    /// Vertices reachable from `start` when the vertices in `removed` are deleted.
    pub fn reachable_avoiding(&self, start: usize, removed: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        if removed[start] {
            return seen;
        }
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for y in self.neighbors(x) {
                if !seen[y] && !removed[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let none = vec![false; self.n()];
        self.reachable_avoiding(0, &none).into_iter().all(|b| b)
    }
}

/// Connectivity parameter `k` and a degree cap for every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSpec {
    pub k: usize,
    pub caps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundViolation {
    #[error("bounds list {caps} caps but the graph has {n} vertices")]
    CapCount { caps: usize, n: usize },
    #[error("k = {k} outside 1..={max} (n = {n})")]
    KRange { k: usize, n: usize, max: usize },
    #[error("cap {cap} of vertex {vertex} is below 2")]
    CapTooSmall { vertex: usize, cap: usize },
    #[error("cap {cap} of vertex {vertex} exceeds n-1 = {max}")]
    CapTooLarge {
        vertex: usize,
        cap: usize,
        max: usize,
    },
}

impl BoundSpec {
    pub fn new(k: usize, caps: Vec<usize>) -> Self {
        BoundSpec { k, caps }
    }

    pub fn uniform(n: usize, k: usize, cap: usize) -> Self {
        BoundSpec {
            k,
            caps: vec![cap; n],
        }
    }

    pub fn n(&self) -> usize {
        self.caps.len()
    }

    #[inline]
    pub fn cap(&self, v: usize) -> usize {
        self.caps[v]
    }

    /// Cap values in ascending order: the sequence `d_1 <= ... <= d_n`.
    pub fn sorted_caps(&self) -> Vec<usize> {
        let mut c = self.caps.clone();
        c.sort_unstable();
        c
    }

    /// Sum over the `k` smallest caps of `cap - 2`.
    pub fn excess(&self) -> i64 {
        self.sorted_caps()
            .iter()
            .take(self.k)
            .map(|&c| c as i64 - 2)
            .sum()
    }

    /// Leaf budget `L = 2 + excess`.
    pub fn leaf_budget(&self) -> usize {
        (2 + self.excess()).max(0) as usize
    }

    /// Degree-sum threshold `n - 1 - excess` for non-adjacent pairs.
    pub fn ore_threshold(&self) -> i64 {
        self.n() as i64 - 1 - self.excess()
    }
}

/// Checks `1 <= k <= n-1` and `2 <= cap <= n-1` against `g`, reporting the
/// first violated constraint.
pub fn validate_bounds(spec: &BoundSpec, g: &Graph) -> Result<(), BoundViolation> {
    let n = g.n();
    if spec.caps.len() != n {
        return Err(BoundViolation::CapCount {
            caps: spec.caps.len(),
            n,
        });
    }
    let max = n.saturating_sub(1);
    if spec.k < 1 || spec.k > max {
        return Err(BoundViolation::KRange { k: spec.k, n, max });
    }
    for (vertex, &cap) in spec.caps.iter().enumerate() {
        if cap < 2 {
            return Err(BoundViolation::CapTooSmall { vertex, cap });
        }
        if cap > max {
            return Err(BoundViolation::CapTooLarge { vertex, cap, max });
        }
    }
    Ok(())
}

/// Outcome of the pairwise degree-sum check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OreCheck {
    Holds,
    /// Non-adjacent pair with the smallest degree sum, which is below `threshold`.
    Witness {
        u: usize,
        v: usize,
        sum: usize,
        threshold: i64,
    },
}

impl OreCheck {
    pub fn holds(&self) -> bool {
        matches!(self, OreCheck::Holds)
    }

    /// `threshold - sum` for a witness, 0 otherwise.
    pub fn deficit(&self) -> i64 {
        match *self {
            OreCheck::Holds => 0,
            OreCheck::Witness { sum, threshold, .. } => threshold - sum as i64,
        }
    }
}

/// Degree-sum check against an explicit threshold.
pub fn degree_sum_check(g: &Graph, threshold: i64) -> OreCheck {
    let n = g.n();
    let mut best: Option<(usize, usize, usize)> = None;
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                continue;
            }
            let sum = g.degree(u) + g.degree(v);
            if best.is_none_or(|(s, _, _)| sum < s) {
                best = Some((sum, u, v));
            }
        }
    }
    match best {
        Some((sum, u, v)) if (sum as i64) < threshold => OreCheck::Witness {
            u,
            v,
            sum,
            threshold,
        },
        _ => OreCheck::Holds,
    }
}

/// Every non-adjacent pair must have degree sum at least `spec.ore_threshold()`.
pub fn ore_condition_check(g: &Graph, spec: &BoundSpec) -> OreCheck {
    degree_sum_check(g, spec.ore_threshold())
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_uint(line: usize, tok: &str) -> Result<usize, GraphError> {
    tok.parse().map_err(|_| GraphError::Malformed {
        line,
        msg: format!("expected a non-negative integer, found {tok:?}"),
    })
}

fn two_fields(line: usize, text: &str) -> Result<(usize, usize), GraphError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    match toks.as_slice() {
        [a, b] => Ok((parse_uint(line, a)?, parse_uint(line, b)?)),
        _ => Err(GraphError::Malformed {
            line,
            msg: format!("expected two integers, found {} fields", toks.len()),
        }),
    }
}

/// Parses the edge-list format: header `n m`, then `m` lines `u v`.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(GraphError::Malformed {
        line: 1,
        msg: "missing header \"n m\"".into(),
    })?;
    let (n, m) = two_fields(hline, header)?;
    let mut g = Graph::empty(n);
    let mut found = 0;
    for (line, text) in lines {
        let (u, v) = two_fields(line, text)?;
        found += 1;
        if found > m {
            return Err(GraphError::EdgeCount { expected: m, found });
        }
        g.checked_insert(line, u, v)?;
    }
    if found != m {
        return Err(GraphError::EdgeCount { expected: m, found });
    }
    Ok(g)
}

/// Parses the bounds format: line 1 `k`, line 2 the caps of vertices `0..n`.
pub fn parse_bounds(text: &str) -> Result<BoundSpec, GraphError> {
    let mut lines = content_lines(text);
    let (kline, ktext) = lines.next().ok_or(GraphError::Malformed {
        line: 1,
        msg: "missing k".into(),
    })?;
    let k = parse_uint(kline, ktext)?;
    let (cline, ctext) = lines.next().ok_or(GraphError::Malformed {
        line: kline + 1,
        msg: "missing cap list".into(),
    })?;
    let caps = ctext
        .split_whitespace()
        .map(|t| parse_uint(cline, t))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some((line, _)) = lines.next() {
        return Err(GraphError::Malformed {
            line,
            msg: "unexpected content after the cap list".into(),
        });
    }
    Ok(BoundSpec { k, caps })
}

pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn serialize_bounds(spec: &BoundSpec) -> String {
    let caps: Vec<String> = spec.caps.iter().map(|c| c.to_string()).collect();
    format!("{}\n{}\n", spec.k, caps.join(" "))
}

/// Renders `g` as a DOT `graph`. Edges in `highlight` are drawn bold red.
/// Vertices without edges are listed as bare nodes so that `n` survives.
pub fn serialize_dot(g: &Graph, highlight: Option<&[Edge]>) -> Result<String, GraphError> {
    let mut marked = BTreeSet::new();
    for &(a, b) in highlight.unwrap_or(&[]) {
        if !g.has_edge(a, b) {
            return Err(GraphError::NotAnEdge { u: a, v: b });
        }
        marked.insert(edge(a, b));
    }
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        if g.degree(v) == 0 {
            let _ = writeln!(out, "  {v};");
        }
    }
    for e @ (u, v) in g.edges() {
        if marked.contains(&e) {
            let _ = writeln!(out, "  {u} -- {v} [color=red, penwidth=3];");
        } else {
            let _ = writeln!(out, "  {u} -- {v};");
        }
    }
    out.push_str("}\n");
    Ok(out)
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_edge_list(self))
    }
}
