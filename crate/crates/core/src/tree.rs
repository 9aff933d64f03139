//! The mutable work tree and its exchange transformations.
//!
//! A [`WorkTree`] is a subtree of a host graph. Every transformation is
//! copy-on-write: it checks its preconditions, builds the rewired tree, and
//! runs a structural post-check (tree-ness, host membership, caps, leaf
//! budget, and the leaf-count change the transformation promises) before
//! returning. A failed post-check is reported as [`TreeError::PostCheck`].

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{edge, BoundSpec, Edge, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("vertex {0} is not in the tree")]
    NotInTree(usize),
    #[error("vertex {0} is already in the tree")]
    AlreadyInTree(usize),
    #[error("vertex {0} is not a leaf")]
    NotALeaf(usize),
    #[error("{0} -- {1} is not an edge of the host graph")]
    NotAGraphEdge(usize, usize),
    #[error("the tree is not oriented")]
    NotOriented,
    #[error("edge set does not form a tree: {0}")]
    NotATree(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("post-check failed after {op}: {msg}")]
    PostCheck { op: &'static str, msg: String },
}

fn pre(msg: impl Into<String>) -> TreeError {
    TreeError::Precondition(msg.into())
}

/// Graph plus caps: the context every transformation is checked against.
#[derive(Debug, Clone, Copy)]
pub struct Host<'a> {
    pub graph: &'a Graph,
    pub bounds: &'a BoundSpec,
}

impl<'a> Host<'a> {
    pub fn new(graph: &'a Graph, bounds: &'a BoundSpec) -> Self {
        Host { graph, bounds }
    }

    fn require_edge(&self, a: usize, b: usize) -> Result<(), TreeError> {
        if self.graph.has_edge(a, b) {
            Ok(())
        } else {
            Err(TreeError::NotAGraphEdge(a, b))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Orientation {
    root: usize,
    parent: Vec<Option<usize>>,
}

/// A subtree of a host graph on vertex ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkTree {
    member: Vec<bool>,
    size: usize,
    nbrs: Vec<BTreeSet<usize>>,
    edges: BTreeSet<Edge>,
    orientation: Option<Orientation>,
}

impl WorkTree {
    /// Tree consisting of the single vertex `v`.
    pub fn single(n: usize, v: usize) -> Self {
        let mut member = vec![false; n];
        member[v] = true;
        WorkTree {
            member,
            size: 1,
            nbrs: vec![BTreeSet::new(); n],
            edges: BTreeSet::new(),
            orientation: None,
        }
    }

    /// Builds a tree from an edge list (at least one edge), checking tree-ness.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self, TreeError> {
        let first = edges
            .first()
            .ok_or_else(|| TreeError::NotATree("no edges".into()))?;
        let mut t = WorkTree::single(n, first.0);
        t.size = 0;
        t.member[first.0] = false;
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(TreeError::NotATree(format!("bad edge {a} -- {b}")));
            }
            for v in [a, b] {
                if !t.member[v] {
                    t.member[v] = true;
                    t.size += 1;
                }
            }
            if !t.edges.insert(edge(a, b)) {
                return Err(TreeError::NotATree(format!("duplicate edge {a} -- {b}")));
            }
            t.nbrs[a].insert(b);
            t.nbrs[b].insert(a);
        }
        t.check_shape().map_err(TreeError::NotATree)?;
        Ok(t)
    }

    pub fn from_path(n: usize, path: &[usize]) -> Result<Self, TreeError> {
        match path {
            [] => Err(TreeError::NotATree("empty path".into())),
            [v] => Ok(WorkTree::single(n, *v)),
            _ => {
                let edges: Vec<Edge> = path.windows(2).map(|w| edge(w[0], w[1])).collect();
                WorkTree::from_edges(n, &edges)
            }
        }
    }

    /// Number of host vertices (not tree vertices).
    pub fn host_n(&self) -> usize {
        self.member.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, v: usize) -> bool {
        self.member.get(v).copied().unwrap_or(false)
    }

    pub fn membership(&self) -> &[bool] {
        &self.member
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.member.len()).filter(|&v| self.member[v])
    }

    pub fn is_spanning(&self) -> bool {
        self.size == self.member.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn tree_neighbors(&self, v: usize) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.nbrs[v].iter().copied()
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&edge(a, b))
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.contains(v) && self.degree(v) == 1
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices().filter(|&v| self.degree(v) == 1)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_path(&self) -> bool {
        self.max_degree() <= 2
    }

    pub fn root(&self) -> Option<usize> {
        self.orientation.as_ref().map(|o| o.root)
    }

    /// The predecessor `z⁻` of `v` under the current orientation.
    pub fn parent(&self, v: usize) -> Option<usize> {
        self.orientation.as_ref().and_then(|o| o.parent[v])
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        let p = self.parent(v);
        self.tree_neighbors(v).filter(|&c| Some(c) != p).collect()
    }

    fn require_member(&self, v: usize) -> Result<(), TreeError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(TreeError::NotInTree(v))
        }
    }

    fn require_leaf(&self, v: usize) -> Result<(), TreeError> {
        self.require_member(v)?;
        if self.degree(v) == 1 {
            Ok(())
        } else {
            Err(TreeError::NotALeaf(v))
        }
    }

    fn require_root(&self) -> Result<usize, TreeError> {
        self.root().ok_or(TreeError::NotOriented)
    }

    /// Orients every edge away from `root`.
    pub fn orient(&self, root: usize) -> Result<WorkTree, TreeError> {
        self.require_member(root)?;
        let mut t = self.clone();
        t.set_orientation(root);
        Ok(t)
    }

    fn set_orientation(&mut self, root: usize) {
        let mut parent = vec![None; self.member.len()];
        let mut seen = vec![false; self.member.len()];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &self.nbrs[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        self.orientation = Some(Orientation { root, parent });
    }

    /// The unique `a`-`b` path in the tree, endpoints included.
    pub fn tree_path(&self, a: usize, b: usize) -> Result<Vec<usize>, TreeError> {
        self.require_member(a)?;
        self.require_member(b)?;
        let mut prev = vec![usize::MAX; self.member.len()];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &y in &self.nbrs[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[b] == usize::MAX {
            return Err(TreeError::NotATree(format!(
                "{a} and {b} are not connected"
            )));
        }
        let mut path = vec![b];
        let mut x = b;
        while x != a {
            x = prev[x];
            path.push(x);
        }
        path.reverse();
        Ok(path)
    }

    fn check_shape(&self) -> Result<(), String> {
        if self.edges.len() + 1 != self.size {
            return Err(format!(
                "{} edges on {} vertices",
                self.edges.len(),
                self.size
            ));
        }
        let mut deg = vec![0usize; self.member.len()];
        for &(a, b) in &self.edges {
            if !self.member[a] || !self.member[b] {
                return Err(format!("edge {a} -- {b} leaves the vertex set"));
            }
            if !self.nbrs[a].contains(&b) || !self.nbrs[b].contains(&a) {
                return Err(format!("adjacency out of sync at {a} -- {b}"));
            }
            deg[a] += 1;
            deg[b] += 1;
        }
        for (v, (&d, nb)) in deg.iter().zip(&self.nbrs).enumerate() {
            if d != nb.len() {
                return Err(format!("degree of {v} out of sync"));
            }
        }
        let Some(start) = self.vertices().next() else {
            return Err("empty tree".into());
        };
        let mut seen = vec![false; self.member.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &self.nbrs[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        if count != self.size {
            return Err(format!("only {count} of {} vertices connected", self.size));
        }
        Ok(())
    }

    /// Full invariant suite against the host graph.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        if self.member.len() != g.n() {
            return Err("tree and graph disagree on n".into());
        }
        self.check_shape()?;
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| !g.has_edge(a, b)) {
            return Err(format!("tree edge {a} -- {b} is not a graph edge"));
        }
        if self.size >= 2 && self.leaf_count() < 2 {
            return Err("fewer than two leaves".into());
        }
        if let Some(o) = &self.orientation {
            if !self.member[o.root] || o.parent[o.root].is_some() {
                return Err("bad orientation root".into());
            }
            for v in self.vertices().filter(|&v| v != o.root) {
                let Some(p) = o.parent[v] else {
                    return Err(format!("vertex {v} has no parent"));
                };
                if !self.nbrs[v].contains(&p) {
                    return Err(format!("parent edge {p} -> {v} is not a tree edge"));
                }
            }
            for v in self.vertices() {
                let mut x = v;
                let mut steps = 0;
                while let Some(p) = o.parent[x] {
                    x = p;
                    steps += 1;
                    if steps > self.size {
                        return Err("parent pointers cycle".into());
                    }
                }
                if x != o.root {
                    return Err(format!("vertex {v} does not reach the root"));
                }
            }
        }
        Ok(())
    }

    fn rewired(&self, remove: &[Edge], add: &[Edge], path: Option<&[usize]>) -> WorkTree {
        let mut t = self.clone();
        for &(a, b) in remove {
            let gone = t.edges.remove(&edge(a, b));
            debug_assert!(gone, "removing absent edge {a} -- {b}");
            t.nbrs[a].remove(&b);
            t.nbrs[b].remove(&a);
        }
        for &(a, b) in add {
            t.edges.insert(edge(a, b));
            t.nbrs[a].insert(b);
            t.nbrs[b].insert(a);
        }
        if let Some(p) = path {
            for &v in &p[..p.len() - 1] {
                t.member[v] = true;
                t.size += 1;
            }
            for w in p.windows(2) {
                t.edges.insert(edge(w[0], w[1]));
                t.nbrs[w[0]].insert(w[1]);
                t.nbrs[w[1]].insert(w[0]);
            }
        }
        if let Some(root) = self.root() {
            t.set_orientation(root);
        }
        t
    }

    fn post_check(
        &self,
        after: &WorkTree,
        host: &Host<'_>,
        op: &'static str,
        growth: usize,
        leaves: LeafRule,
    ) -> Result<(), TreeError> {
        let fail = |msg: String| TreeError::PostCheck { op, msg };
        after.validate(host.graph).map_err(fail)?;
        if after.size != self.size + growth {
            return Err(fail(format!(
                "size {} -> {}, expected growth {growth}",
                self.size, after.size
            )));
        }
        for v in after.vertices() {
            let before = if self.contains(v) { self.degree(v) } else { 0 };
            if after.degree(v) > before && after.degree(v) > host.bounds.cap(v) {
                return Err(fail(format!(
                    "vertex {v} degree {} exceeds cap {}",
                    after.degree(v),
                    host.bounds.cap(v)
                )));
            }
        }
        let (b, a) = (self.leaf_count(), after.leaf_count());
        let ok = match leaves {
            LeafRule::Exactly(d) => a as i64 - b as i64 == d,
            LeafRule::AtMost(d) => a as i64 - b as i64 <= d,
        };
        if !ok {
            return Err(fail(format!("leaf count {b} -> {a} violates {leaves:?}")));
        }
        let budget = host.bounds.leaf_budget();
        if b <= budget && a > budget {
            return Err(fail(format!("leaf count {a} exceeds budget {budget}")));
        }
        Ok(())
    }

    fn check_fan_path(&self, host: &Host<'_>, path: &[usize]) -> Result<usize, TreeError> {
        let (&r, rest) = path.split_last().ok_or_else(|| pre("empty fan path"))?;
        if rest.is_empty() {
            return Err(pre("fan path has no vertex outside the tree"));
        }
        self.require_member(r)?;
        let mut seen = BTreeSet::new();
        for &x in rest {
            if x >= self.host_n() {
                return Err(pre(format!("vertex {x} out of range")));
            }
            if self.contains(x) {
                return Err(TreeError::AlreadyInTree(x));
            }
            if !seen.insert(x) {
                return Err(pre(format!("fan path repeats vertex {x}")));
            }
        }
        for w in path.windows(2) {
            host.require_edge(w[0], w[1])?;
        }
        Ok(r)
    }

    /// `T ∪ π`: attaches a path that meets the tree only at its last vertex.
    pub fn attach_fan_path(&self, host: &Host<'_>, path: &[usize]) -> Result<WorkTree, TreeError> {
        let r = self.check_fan_path(host, path)?;
        let after = self.rewired(&[], &[], Some(path));
        let delta = match self.degree(r) {
            0 => 2,
            1 => 0,
            _ => 1,
        };
        self.post_check(
            &after,
            host,
            "attach_fan_path",
            path.len() - 1,
            LeafRule::Exactly(delta),
        )?;
        Ok(after)
    }

    /// `(T - zz') + xy` for adjacent leaves `x`, `y`: `z` is the first vertex
    /// of tree degree at least 3 on the path from `x`, `z'` its predecessor.
    pub fn leaf_leaf_swap(
        &self,
        host: &Host<'_>,
        x: usize,
        y: usize,
    ) -> Result<WorkTree, TreeError> {
        self.require_leaf(x)?;
        self.require_leaf(y)?;
        if x == y {
            return Err(pre("x and y coincide"));
        }
        host.require_edge(x, y)?;
        let path = self.tree_path(x, y)?;
        let i = path
            .iter()
            .position(|&p| self.degree(p) >= 3)
            .ok_or_else(|| pre(format!("no vertex of degree >= 3 on the {x}-{y} path")))?;
        let (z, zp) = (path[i], path[i - 1]);
        let after = self.rewired(&[(zp, z)], &[(x, y)], None);
        self.post_check(&after, host, "leaf_leaf_swap", 0, LeafRule::Exactly(-1))?;
        Ok(after)
    }

    /// `(T + u x1) - z x1` where `x1`, `x2` are children of the same `z` and
    /// both adjacent in the graph to the leaf root `u`.
    pub fn sibling_collision_swap(
        &self,
        host: &Host<'_>,
        x1: usize,
        x2: usize,
    ) -> Result<WorkTree, TreeError> {
        let u = self.require_root()?;
        self.require_leaf(u)?;
        self.require_member(x1)?;
        self.require_member(x2)?;
        if x1 == x2 {
            return Err(pre("x1 and x2 coincide"));
        }
        let z = self.parent(x1).ok_or_else(|| pre("x1 is the root"))?;
        if self.parent(x2) != Some(z) {
            return Err(pre(format!("{x1} and {x2} do not share a parent")));
        }
        host.require_edge(u, x1)?;
        host.require_edge(u, x2)?;
        let after = self.rewired(&[(z, x1)], &[(u, x1)], None);
        self.post_check(
            &after,
            host,
            "sibling_collision_swap",
            0,
            LeafRule::Exactly(-1),
        )?;
        Ok(after)
    }

    /// Common preconditions of the four root-based exchanges: the tree is
    /// oriented at a leaf `u`, `v` is another leaf, and `z` has a parent.
    fn exchange_frame(&self, v: usize, z: usize) -> Result<Frame, TreeError> {
        let u = self.require_root()?;
        self.require_leaf(u)?;
        self.require_leaf(v)?;
        if u == v {
            return Err(pre("u and v coincide"));
        }
        self.require_member(z)?;
        let zm = self.parent(z).ok_or_else(|| pre("z is the root"))?;
        let uv = self.tree_path(u, v)?;
        let on_uv = |a: usize| uv.contains(&a);
        let edge_on_uv = uv.windows(2).any(|w| w == [zm, z]);
        Ok(Frame {
            u,
            zm,
            zm_on_uv: on_uv(zm),
            edge_on_uv,
            uv,
        })
    }

    /// Case `z = r1` with `z⁻z` on `T_uv`: `((T + z⁻v) - z⁻z) ∪ π1`.
    pub fn case1_at_r1(
        &self,
        host: &Host<'_>,
        fan_path: &[usize],
        v: usize,
        z: usize,
    ) -> Result<WorkTree, TreeError> {
        let r1 = self.check_fan_path(host, fan_path)?;
        let f = self.exchange_frame(v, z)?;
        if z != r1 {
            return Err(pre("z differs from r1; use case1_general"));
        }
        if !f.edge_on_uv {
            return Err(pre("edge z⁻z is not on the u-v path"));
        }
        host.require_edge(f.zm, v)?;
        let after = self.rewired(&[(f.zm, z)], &[(f.zm, v)], Some(fan_path));
        self.post_check(
            &after,
            host,
            "case1_at_r1",
            fan_path.len() - 1,
            LeafRule::AtMost(0),
        )?;
        Ok(after)
    }

    /// Case `z ≠ r1` with `z⁻z` on `T_uv`:
    /// `((((T + uz) + z⁻v) - r1⁻r1) - z⁻z) ∪ π1`.
    pub fn case1_general(
        &self,
        host: &Host<'_>,
        fan_path: &[usize],
        v: usize,
        z: usize,
    ) -> Result<WorkTree, TreeError> {
        let r1 = self.check_fan_path(host, fan_path)?;
        let f = self.exchange_frame(v, z)?;
        if z == r1 {
            return Err(pre("z equals r1; use case1_at_r1"));
        }
        if !f.edge_on_uv {
            return Err(pre("edge z⁻z is not on the u-v path"));
        }
        if !f.uv.contains(&r1) {
            return Err(pre("r1 is not on the u-v path"));
        }
        let r1m = self.parent(r1).ok_or_else(|| pre("r1 is the root"))?;
        host.require_edge(f.u, z)?;
        host.require_edge(f.zm, v)?;
        let after = self.rewired(
            &[(r1m, r1), (f.zm, z)],
            &[(f.u, z), (f.zm, v)],
            Some(fan_path),
        );
        self.post_check(
            &after,
            host,
            "case1_general",
            fan_path.len() - 1,
            LeafRule::AtMost(0),
        )?;
        Ok(after)
    }

    /// Case `z⁻z` off `T_uv` with `z⁻` on it: `(T + uz) - z⁻z`.
    pub fn case2_onpath(&self, host: &Host<'_>, v: usize, z: usize) -> Result<WorkTree, TreeError> {
        let f = self.exchange_frame(v, z)?;
        if f.edge_on_uv {
            return Err(pre("edge z⁻z lies on the u-v path; this is case 1"));
        }
        if !f.zm_on_uv {
            return Err(pre("z⁻ is off the u-v path; use case2_offpath"));
        }
        host.require_edge(f.u, z)?;
        let after = self.rewired(&[(f.zm, z)], &[(f.u, z)], None);
        self.post_check(&after, host, "case2_onpath", 0, LeafRule::Exactly(-1))?;
        Ok(after)
    }

    /// Where the `u`-`z⁻` path leaves `T_uv`: `x⁻` is the last vertex the two
    /// paths share and `x` follows it on `T_uv`. Returns `(x, x⁻)`.
    pub fn branch_vertex(&self, v: usize, zm: usize) -> Result<(usize, usize), TreeError> {
        let u = self.require_root()?;
        let uv = self.tree_path(u, v)?;
        let uz = self.tree_path(u, zm)?;
        if uv.contains(&zm) {
            return Err(pre("z⁻ lies on the u-v path"));
        }
        let shared = uv.iter().zip(&uz).take_while(|(a, b)| a == b).count();
        debug_assert!(shared >= 1 && shared < uv.len());
        Ok((uv[shared], uv[shared - 1]))
    }

    /// Case `z⁻` off `T_uv`: `((((T + uz) + z⁻v) - x⁻x) - z⁻z)` with
    /// `(x, x⁻)` from [`WorkTree::branch_vertex`].
    pub fn case2_offpath(
        &self,
        host: &Host<'_>,
        v: usize,
        z: usize,
        branch: (usize, usize),
    ) -> Result<WorkTree, TreeError> {
        let f = self.exchange_frame(v, z)?;
        if f.edge_on_uv {
            return Err(pre("edge z⁻z lies on the u-v path; this is case 1"));
        }
        if f.zm_on_uv {
            return Err(pre("z⁻ lies on the u-v path; use case2_onpath"));
        }
        let (x, xm) = branch;
        let uz = self.tree_path(f.u, f.zm)?;
        if !f.uv.contains(&x) || uz.contains(&x) {
            return Err(pre(format!("x = {x} must lie on T_uv and off T_uz⁻")));
        }
        if self.parent(x) != Some(xm) || !uz.contains(&xm) {
            return Err(pre(format!("x⁻ = {xm} must be the parent of x on T_uz⁻")));
        }
        host.require_edge(f.u, z)?;
        host.require_edge(f.zm, v)?;
        let after = self.rewired(&[(xm, x), (f.zm, z)], &[(f.u, z), (f.zm, v)], None);
        self.post_check(&after, host, "case2_offpath", 0, LeafRule::AtMost(-1))?;
        Ok(after)
    }
}

struct Frame {
    u: usize,
    zm: usize,
    zm_on_uv: bool,
    edge_on_uv: bool,
    uv: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
enum LeafRule {
    Exactly(i64),
    AtMost(i64),
}
