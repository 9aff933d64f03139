//! Vertex-disjoint paths via unit-capacity max-flow on the vertex-split
//! digraph: local connectivity, k-connectivity, and fans into a vertex set.
//!
//! Every vertex `v` becomes `v_in -> v_out` with capacity 1; every graph edge
//! becomes two arcs `a_out -> b_in`, `b_out -> a_in` of unbounded capacity, so
//! that every finite cut is a set of vertices.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::Graph;

const INF: i32 = i32::MAX / 2;

/// A vertex set whose removal separates `pair.0` from `pair.1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub cut: Vec<usize>,
    pub pair: (usize, usize),
}

impl Separator {
    pub fn size(&self) -> usize {
        self.cut.len()
    }

    /// Checks the certificate directly: the pair lies outside the cut and no
    /// path joins it in `g - cut`.
    pub fn disconnects(&self, g: &Graph) -> bool {
        let (a, b) = self.pair;
        let mut removed = vec![false; g.n()];
        for &c in &self.cut {
            removed[c] = true;
        }
        if removed[a] || removed[b] || a == b {
            return false;
        }
        !g.reachable_avoiding(a, &removed)[b]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectivityError {
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("source and sink coincide ({0})")]
    SameVertex(usize),
    #[error("vertices {0} and {1} are adjacent")]
    Adjacent(usize, usize),
    #[error("fan source {0} already belongs to the target set")]
    SourceInTarget(usize),
    #[error("target set has {size} vertices, fewer than k = {k}")]
    TargetTooSmall { size: usize, k: usize },
}

/// `k` paths from `source`, pairwise disjoint apart from `source`, each
/// meeting the target set only at its last vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub source: usize,
    pub paths: Vec<Vec<usize>>,
}

impl Fan {
    pub fn endpoints(&self) -> impl Iterator<Item = usize> + '_ {
        self.paths
            .iter()
            .map(|p| *p.last().expect("fan paths are non-empty"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanFailure {
    #[error(transparent)]
    Invalid(#[from] ConnectivityError),
    /// Fewer than `k` disjoint paths exist; the cut separates the source from
    /// a target vertex and has fewer than `k` vertices.
    #[error("only {found} disjoint paths; separator {:?}", .separator.cut)]
    Separated { found: usize, separator: Separator },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KConnectivity {
    Yes,
    /// `n < k + 1`.
    TooFewVertices {
        n: usize,
        k: usize,
    },
    No(Separator),
}

impl KConnectivity {
    pub fn is_yes(&self) -> bool {
        matches!(self, KConnectivity::Yes)
    }
}

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    rev: usize,
    cap: i32,
    flow: i32,
}

struct Network {
    arcs: Vec<Vec<Arc>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            arcs: vec![Vec::new(); nodes],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i32) {
        let rf = self.arcs[to].len();
        let rt = self.arcs[from].len();
        self.arcs[from].push(Arc {
            to,
            rev: rf,
            cap,
            flow: 0,
        });
        self.arcs[to].push(Arc {
            to: from,
            rev: rt,
            cap: 0,
            flow: 0,
        });
    }

    /// One shortest augmenting path of one unit; false if none exists.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.arcs.len()];
        let mut seen = vec![false; self.arcs.len()];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for (i, a) in self.arcs[x].iter().enumerate() {
                if !seen[a.to] && a.cap - a.flow > 0 {
                    seen[a.to] = true;
                    prev[a.to] = Some((x, i));
                    queue.push_back(a.to);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut y = t;
        while let Some((x, i)) = prev[y] {
            let rev = self.arcs[x][i].rev;
            self.arcs[x][i].flow += 1;
            self.arcs[y][rev].flow -= 1;
            y = x;
        }
        true
    }

    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut f = 0;
        while f < limit && self.augment(s, t) {
            f += 1;
        }
        f
    }

    fn residual_reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.arcs.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for a in &self.arcs[x] {
                if !seen[a.to] && a.cap - a.flow > 0 {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        seen
    }
}

#[inline]
fn v_in(v: usize) -> usize {
    2 * v
}

#[inline]
fn v_out(v: usize) -> usize {
    2 * v + 1
}

fn check_vertex(g: &Graph, v: usize) -> Result<(), ConnectivityError> {
    if v >= g.n() {
        Err(ConnectivityError::OutOfRange(v))
    } else {
        Ok(())
    }
}

fn pair_network(g: &Graph, s: usize, t: usize) -> Network {
    let mut net = Network::new(2 * g.n());
    for v in 0..g.n() {
        let cap = if v == s || v == t { INF } else { 1 };
        net.add_arc(v_in(v), v_out(v), cap);
        for w in g.neighbors(v) {
            net.add_arc(v_out(v), v_in(w), INF);
        }
    }
    net
}

fn cut_vertices(g: &Graph, reach: &[bool]) -> Vec<usize> {
    (0..g.n())
        .filter(|&v| reach[v_in(v)] && !reach[v_out(v)])
        .collect()
}

fn pair_flow(
    g: &Graph,
    s: usize,
    t: usize,
    limit: usize,
) -> Result<(usize, Network), ConnectivityError> {
    check_vertex(g, s)?;
    check_vertex(g, t)?;
    if s == t {
        return Err(ConnectivityError::SameVertex(s));
    }
    if g.has_edge(s, t) {
        return Err(ConnectivityError::Adjacent(s, t));
    }
    let mut net = pair_network(g, s, t);
    let f = net.max_flow(v_out(s), v_in(t), limit);
    Ok((f, net))
}

/// Maximum number of internally disjoint `s`-`t` paths for a non-adjacent
/// pair. With `want_separator`, also returns a minimum vertex separator.
pub fn local_connectivity(
    g: &Graph,
    s: usize,
    t: usize,
    want_separator: bool,
) -> Result<(usize, Option<Separator>), ConnectivityError> {
    let (f, net) = pair_flow(g, s, t, usize::MAX)?;
    let sep = want_separator.then(|| Separator {
        cut: cut_vertices(g, &net.residual_reach(v_out(s))),
        pair: (s, t),
    });
    Ok((f, sep))
}

/// `min(local_connectivity(s, t), limit)`, stopping after `limit` augmentations.
pub fn local_connectivity_at_least(
    g: &Graph,
    s: usize,
    t: usize,
    limit: usize,
) -> Result<bool, ConnectivityError> {
    Ok(pair_flow(g, s, t, limit)?.0 >= limit)
}

/// `Yes` iff `n >= k + 1` and every non-adjacent pair is joined by at least
/// `k` internally disjoint paths. On failure the separator has fewer than `k`
/// vertices.
pub fn is_k_connected(g: &Graph, k: usize) -> KConnectivity {
    let n = g.n();
    if n < k + 1 {
        return KConnectivity::TooFewVertices { n, k };
    }
    for s in 0..n {
        for t in s + 1..n {
            if g.has_edge(s, t) {
                continue;
            }
            let (f, net) = pair_flow(g, s, t, k).expect("non-adjacent distinct pair");
            if f < k {
                return KConnectivity::No(Separator {
                    cut: cut_vertices(g, &net.residual_reach(v_out(s))),
                    pair: (s, t),
                });
            }
        }
    }
    KConnectivity::Yes
}

/// `k` paths from `w` to distinct members of `target`, disjoint except at `w`
/// and touching `target` only at their ends. Paths are listed by ascending
/// first hop; each path follows flow arcs in ascending neighbour order.
pub fn fan_to_tree(g: &Graph, w: usize, target: &[bool], k: usize) -> Result<Fan, FanFailure> {
    let n = g.n();
    check_vertex(g, w)?;
    if target.len() != n {
        return Err(ConnectivityError::OutOfRange(target.len()).into());
    }
    if target[w] {
        return Err(ConnectivityError::SourceInTarget(w).into());
    }
    let size = target.iter().filter(|&&b| b).count();
    if size < k {
        return Err(ConnectivityError::TargetTooSmall { size, k }.into());
    }

    let sink = 2 * n;
    let mut net = Network::new(2 * n + 1);
    for (v, &in_target) in target.iter().enumerate() {
        if in_target {
            net.add_arc(v_in(v), sink, 1);
            continue;
        }
        net.add_arc(v_in(v), v_out(v), if v == w { INF } else { 1 });
        for u in g.neighbors(v) {
            if u != w {
                net.add_arc(v_out(v), v_in(u), INF);
            }
        }
    }
    let found = net.max_flow(v_out(w), sink, k);
    if found < k {
        let reach = net.residual_reach(v_out(w));
        let mut cut: Vec<usize> = (0..n)
            .filter(|&v| reach[v_in(v)] && (target[v] || !reach[v_out(v)]))
            .collect();
        cut.sort_unstable();
        let other = (0..n)
            .find(|&v| target[v] && !reach[v_in(v)])
            .expect("a cut smaller than the target leaves a target vertex unreached");
        return Err(FanFailure::Separated {
            found,
            separator: Separator {
                cut,
                pair: (w, other),
            },
        });
    }

    let mut paths = Vec::with_capacity(k);
    let starts: Vec<(usize, usize)> = net.arcs[v_out(w)]
        .iter()
        .enumerate()
        .filter(|(_, a)| a.cap > 0 && a.flow > 0)
        .map(|(i, a)| (a.to / 2, i))
        .collect();
    let mut starts = starts;
    starts.sort_unstable();
    for (_, first) in starts {
        net.arcs[v_out(w)][first].flow -= 1;
        let mut x = net.arcs[v_out(w)][first].to / 2;
        let mut path = vec![w, x];
        while !target[x] {
            // v_in -> v_out carries the unit; then leave by the smallest neighbour with flow
            let out = v_out(x);
            let next = net.arcs[out]
                .iter()
                .enumerate()
                .filter(|(_, a)| a.cap > 0 && a.flow > 0)
                .min_by_key(|(_, a)| a.to)
                .map(|(i, a)| (i, a.to / 2))
                .expect("flow conservation at a split vertex");
            net.arcs[out][next.0].flow -= 1;
            x = next.1;
            path.push(x);
        }
        paths.push(path);
    }
    Ok(Fan { source: w, paths })
}

/// Structural check of a fan using only the graph, the target set and the fan.
pub fn check_fan(g: &Graph, target: &[bool], fan: &Fan, k: usize) -> Result<(), String> {
    if fan.paths.len() != k {
        return Err(format!("{} paths, expected {k}", fan.paths.len()));
    }
    if target.get(fan.source).copied().unwrap_or(true) {
        return Err("source missing or inside the target set".into());
    }
    let mut used = vec![false; g.n()];
    for p in &fan.paths {
        if p.len() < 2 || p[0] != fan.source {
            return Err(format!("path {p:?} does not start at the source"));
        }
        for pair in p.windows(2) {
            if !g.has_edge(pair[0], pair[1]) {
                return Err(format!("{} -- {} is not an edge", pair[0], pair[1]));
            }
        }
        let (last, inner) = p[1..].split_last().expect("len >= 2");
        if !target[*last] {
            return Err(format!("path {p:?} ends outside the target"));
        }
        for &x in p[1..].iter() {
            if x == fan.source || used[x] {
                return Err(format!("vertex {x} repeated across paths"));
            }
            used[x] = true;
        }
        if let Some(x) = inner.iter().find(|&&x| target[x]) {
            return Err(format!("path {p:?} meets the target early at {x}"));
        }
    }
    Ok(())
}
