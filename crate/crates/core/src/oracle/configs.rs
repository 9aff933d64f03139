//! Random valid inputs for the seven tree exchanges.
//!
//! Each generator draws a random tree inside a random host graph, picks the
//! vertices an exchange needs, and adds exactly the graph edges its
//! precondition asks for (plus random noise edges). Caps are set so the
//! starting tree respects them. [`Configuration::audit`] re-checks a result
//! from the raw edge sets without going through the tree engine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::graph::{edge, BoundSpec, Edge, Graph};
use crate::tree::{Host, TreeError, WorkTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transform {
    AttachFanPath,
    LeafLeafSwap,
    SiblingCollisionSwap,
    Case1AtR1,
    Case1General,
    Case2OnPath,
    Case2OffPath,
}

impl Transform {
    pub const ALL: [Transform; 7] = [
        Transform::AttachFanPath,
        Transform::LeafLeafSwap,
        Transform::SiblingCollisionSwap,
        Transform::Case1AtR1,
        Transform::Case1General,
        Transform::Case2OnPath,
        Transform::Case2OffPath,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Transform::AttachFanPath => "attach_fan_path",
            Transform::LeafLeafSwap => "leaf_leaf_swap",
            Transform::SiblingCollisionSwap => "sibling_collision_swap",
            Transform::Case1AtR1 => "case1_at_r1",
            Transform::Case1General => "case1_general",
            Transform::Case2OnPath => "case2_onpath",
            Transform::Case2OffPath => "case2_offpath",
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Args {
    Attach {
        path: Vec<usize>,
    },
    Leaves {
        x: usize,
        y: usize,
    },
    Siblings {
        x1: usize,
        x2: usize,
    },
    Case1 {
        fan_path: Vec<usize>,
        v: usize,
        z: usize,
    },
    Case2 {
        v: usize,
        z: usize,
    },
    Case2Off {
        v: usize,
        z: usize,
        branch: (usize, usize),
    },
}

#[derive(Debug, Clone)]
pub struct Configuration {
    pub transform: Transform,
    pub graph: Graph,
    pub bounds: BoundSpec,
    pub tree: WorkTree,
    pub args: Args,
}

/// Leaf-count change an exchange promises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafChange {
    Exactly(i64),
    AtMost(i64),
}

impl LeafChange {
    pub fn admits(self, delta: i64) -> bool {
        match self {
            LeafChange::Exactly(d) => delta == d,
            LeafChange::AtMost(d) => delta <= d,
        }
    }
}

impl Configuration {
    pub fn apply(&self) -> Result<WorkTree, TreeError> {
        let host = Host::new(&self.graph, &self.bounds);
        let t = &self.tree;
        match (&self.args, self.transform) {
            (Args::Attach { path }, _) => t.attach_fan_path(&host, path),
            (Args::Leaves { x, y }, _) => t.leaf_leaf_swap(&host, *x, *y),
            (Args::Siblings { x1, x2 }, _) => t.sibling_collision_swap(&host, *x1, *x2),
            (Args::Case1 { fan_path, v, z }, Transform::Case1AtR1) => {
                t.case1_at_r1(&host, fan_path, *v, *z)
            }
            (Args::Case1 { fan_path, v, z }, _) => t.case1_general(&host, fan_path, *v, *z),
            (Args::Case2 { v, z }, _) => t.case2_onpath(&host, *v, *z),
            (Args::Case2Off { v, z, branch }, _) => t.case2_offpath(&host, *v, *z, *branch),
        }
    }

    /// Vertices the exchange brings into the tree.
    pub fn growth(&self) -> usize {
        match &self.args {
            Args::Attach { path } | Args::Case1 { fan_path: path, .. } => path.len() - 1,
            _ => 0,
        }
    }

    pub fn leaf_change(&self) -> LeafChange {
        match (&self.args, self.transform) {
            (Args::Attach { path }, _) => {
                let r = *path.last().expect("non-empty");
                LeafChange::Exactly(match self.tree.degree(r) {
                    0 => 2,
                    1 => 0,
                    _ => 1,
                })
            }
            (_, Transform::Case1AtR1 | Transform::Case1General) => LeafChange::AtMost(0),
            (_, Transform::Case2OffPath) => LeafChange::AtMost(-1),
            _ => LeafChange::Exactly(-1),
        }
    }

    /// True when the branch vertex of an off-path exchange is `v` itself.
    pub fn branch_is_v(&self) -> bool {
        matches!(self.args, Args::Case2Off { v, branch: (x, _), .. } if x == v)
    }

    /// Checks `after` against the starting tree using only edge sets: a tree
    /// on the old vertices plus the new ones, built from graph edges, no
    /// degree pushed above its cap, and the promised leaf change.
    pub fn audit(&self, after: &WorkTree) -> Result<(), String> {
        let before_deg = degrees(self.tree.edges());
        let after_deg = degrees(after.edges());
        let mut verts: BTreeSet<usize> = self.tree.vertices().collect();
        match &self.args {
            Args::Attach { path } | Args::Case1 { fan_path: path, .. } => {
                verts.extend(path.iter().copied())
            }
            _ => {}
        }
        let got: BTreeSet<usize> = after.vertices().collect();
        if got != verts {
            return Err(format!("vertex set {got:?}, expected {verts:?}"));
        }
        if after.edges().len() + 1 != verts.len() {
            return Err(format!(
                "{} edges on {} vertices",
                after.edges().len(),
                verts.len()
            ));
        }
        for &(a, b) in after.edges() {
            if !self.graph.has_edge(a, b) {
                return Err(format!("{a} -- {b} is not a graph edge"));
            }
        }
        if !connected(&verts, after.edges()) {
            return Err("result is disconnected".into());
        }
        for (&v, &d) in &after_deg {
            let old = before_deg.get(&v).copied().unwrap_or(0);
            if d > old && d > self.bounds.cap(v) {
                return Err(format!(
                    "vertex {v} degree {d} exceeds cap {}",
                    self.bounds.cap(v)
                ));
            }
        }
        let leaves = |m: &BTreeMap<usize, usize>, size: usize| {
            if size == 1 {
                0
            } else {
                m.values().filter(|&&d| d == 1).count() as i64
            }
        };
        let delta = leaves(&after_deg, verts.len()) - leaves(&before_deg, self.tree.size());
        if !self.leaf_change().admits(delta) {
            return Err(format!(
                "leaf change {delta}, promised {:?}",
                self.leaf_change()
            ));
        }
        Ok(())
    }
}

fn degrees(edges: &BTreeSet<Edge>) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &(a, b) in edges {
        *m.entry(a).or_insert(0) += 1;
        *m.entry(b).or_insert(0) += 1;
    }
    m
}

fn connected(verts: &BTreeSet<usize>, edges: &BTreeSet<Edge>) -> bool {
    let Some(&start) = verts.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == verts.len()
}

/// Scratch state shared by the generators.
struct Draft {
    n: usize,
    tree: Vec<Edge>,
    inside: Vec<usize>,
    outside: Vec<usize>,
    required: Vec<Edge>,
}

impl Draft {
    fn new<R: Rng>(rng: &mut R, outside: std::ops::RangeInclusive<usize>) -> Draft {
        let outside = rng.random_range(outside);
        let n = rng.random_range(6..=16usize).max(outside + 3);
        let mut labels: Vec<usize> = (0..n).collect();
        labels.shuffle(rng);
        let s = n - outside;
        let stringy = rng.random_bool(0.5);
        let mut tree = Vec::with_capacity(s - 1);
        for i in 1..s {
            let j = if stringy && rng.random_bool(0.6) {
                i - 1
            } else {
                rng.random_range(0..i)
            };
            tree.push(edge(labels[i], labels[j]));
        }
        Draft {
            n,
            tree,
            inside: labels[..s].to_vec(),
            outside: labels[s..].to_vec(),
            required: Vec::new(),
        }
    }

    fn work_tree(&self) -> WorkTree {
        if self.tree.is_empty() {
            WorkTree::single(self.n, self.inside[0])
        } else {
            WorkTree::from_edges(self.n, &self.tree).expect("draft is a tree")
        }
    }

    /// Outside path of 1 to 3 vertices ending at `r`.
    fn fan_path<R: Rng>(&mut self, rng: &mut R, r: usize) -> Vec<usize> {
        let len = rng.random_range(1..=self.outside.len().min(3));
        let mut path: Vec<usize> = self.outside.choose_multiple(rng, len).copied().collect();
        path.push(r);
        for w in path.windows(2) {
            self.required.push(edge(w[0], w[1]));
        }
        path
    }

    fn finish<R: Rng>(
        self,
        rng: &mut R,
        transform: Transform,
        tree: WorkTree,
        args: Args,
        headroom: Option<usize>,
    ) -> Configuration {
        let n = self.n;
        let mut edges: BTreeSet<Edge> = self.tree.iter().copied().collect();
        edges.extend(self.required.iter().copied());
        let density = rng.random_range(0.0..0.35);
        for a in 0..n {
            for b in a + 1..n {
                if rng.random_bool(density) {
                    edges.insert((a, b));
                }
            }
        }
        let graph = Graph::from_edges(n, edges).expect("valid edges");
        let caps = (0..n)
            .map(|v| {
                let d = tree.degree(v) + usize::from(headroom == Some(v));
                (d.max(2) + rng.random_range(0..=1usize)).min(n - 1)
            })
            .collect();
        let k = rng.random_range(1..=n - 1);
        Configuration {
            transform,
            graph,
            bounds: BoundSpec::new(k, caps),
            tree,
            args,
        }
    }
}

const ATTEMPTS: usize = 10_000;

/// Draws one valid configuration for `transform`.
///
/// # Panics
/// If no configuration is found in a large number of attempts, which the
/// tree shapes drawn here make practically impossible.
pub fn random_configuration<R: Rng>(transform: Transform, rng: &mut R) -> Configuration {
    for _ in 0..ATTEMPTS {
        if let Some(c) = try_configuration(transform, rng) {
            return c;
        }
    }
    panic!("no valid {transform} configuration found");
}

fn try_configuration<R: Rng>(transform: Transform, rng: &mut R) -> Option<Configuration> {
    match transform {
        Transform::AttachFanPath => {
            let mut d = Draft::new(rng, 1..=4);
            let t = d.work_tree();
            let inside = d.inside.clone();
            let r = *inside.choose(rng)?;
            let path = d.fan_path(rng, r);
            let headroom = (t.degree(r) >= 1).then_some(r);
            let c = d.finish(rng, transform, t, Args::Attach { path }, headroom);
            let LeafChange::Exactly(delta) = c.leaf_change() else {
                unreachable!()
            };
            let after = c.tree.leaf_count() as i64 + delta;
            (after <= c.bounds.leaf_budget() as i64).then_some(c)
        }
        Transform::LeafLeafSwap => {
            let mut d = Draft::new(rng, 0..=2);
            let t = d.work_tree();
            if t.is_path() {
                return None;
            }
            let leaves: Vec<usize> = t.leaves().collect();
            let pick: Vec<usize> = leaves.choose_multiple(rng, 2).copied().collect();
            let (x, y) = (pick[0], pick[1]);
            d.required.push(edge(x, y));
            Some(d.finish(rng, transform, t, Args::Leaves { x, y }, None))
        }
        Transform::SiblingCollisionSwap => {
            let mut d = Draft::new(rng, 0..=2);
            let leaves: Vec<usize> = d.work_tree().leaves().collect();
            let u = *leaves.choose(rng)?;
            let t = d.work_tree().orient(u).ok()?;
            let parents: Vec<usize> = t.vertices().filter(|&z| t.children(z).len() >= 2).collect();
            let z = *parents.choose(rng)?;
            let kids = t.children(z);
            let pick: Vec<usize> = kids.choose_multiple(rng, 2).copied().collect();
            let (x1, x2) = (pick[0], pick[1]);
            d.required.extend([edge(u, x1), edge(u, x2)]);
            Some(d.finish(rng, transform, t, Args::Siblings { x1, x2 }, None))
        }
        Transform::Case1AtR1 | Transform::Case1General => {
            let mut d = Draft::new(rng, 1..=3);
            let (t, u, v, uv) = rooted_pair(&d, rng)?;
            // z = uv[a + 1] with z⁻ = uv[a] != u and z != v
            if uv.len() < 4 {
                return None;
            }
            let a = rng.random_range(1..=uv.len() - 3);
            let (zm, z) = (uv[a], uv[a + 1]);
            let r1 = if transform == Transform::Case1AtR1 {
                z
            } else {
                let choices: Vec<usize> = (1..uv.len() - 1).filter(|&b| b != a + 1).collect();
                uv[*choices.choose(rng)?]
            };
            let fan_path = d.fan_path(rng, r1);
            d.required.push(edge(zm, v));
            if transform == Transform::Case1General {
                d.required.push(edge(u, z));
            }
            Some(d.finish(rng, transform, t, Args::Case1 { fan_path, v, z }, None))
        }
        Transform::Case2OnPath => {
            let mut d = Draft::new(rng, 0..=2);
            let (t, u, v, uv) = rooted_pair(&d, rng)?;
            let on: BTreeSet<usize> = uv.iter().copied().collect();
            let zs: Vec<usize> = uv[1..uv.len() - 1]
                .iter()
                .flat_map(|&p| t.children(p))
                .filter(|c| !on.contains(c))
                .collect();
            let z = *zs.choose(rng)?;
            d.required.push(edge(u, z));
            Some(d.finish(rng, transform, t, Args::Case2 { v, z }, None))
        }
        Transform::Case2OffPath => {
            let mut d = Draft::new(rng, 0..=2);
            let (t, u, v, uv) = rooted_pair(&d, rng)?;
            let on: BTreeSet<usize> = uv.iter().copied().collect();
            let zs: Vec<usize> = t
                .vertices()
                .filter(|p| !on.contains(p))
                .flat_map(|p| t.children(p))
                .collect();
            let z = *zs.choose(rng)?;
            let zm = t.parent(z)?;
            let branch = t.branch_vertex(v, zm).ok()?;
            d.required.extend([edge(u, z), edge(zm, v)]);
            Some(d.finish(rng, transform, t, Args::Case2Off { v, z, branch }, None))
        }
    }
}

/// Tree oriented at a random leaf `u`, another leaf `v`, and the `u`-`v` path.
fn rooted_pair<R: Rng>(d: &Draft, rng: &mut R) -> Option<(WorkTree, usize, usize, Vec<usize>)> {
    let t = d.work_tree();
    let leaves: Vec<usize> = t.leaves().collect();
    if leaves.len() < 2 {
        return None;
    }
    let pick: Vec<usize> = leaves.choose_multiple(rng, 2).copied().collect();
    let (u, v) = (pick[0], pick[1]);
    let t = t.orient(u).ok()?;
    let uv = t.tree_path(u, v).ok()?;
    Some((t, u, v, uv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_transform_gets_valid_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in Transform::ALL {
            for _ in 0..50 {
                let c = random_configuration(t, &mut rng);
                let after = c.apply().unwrap_or_else(|e| panic!("{t}: {e}"));
                c.audit(&after).unwrap_or_else(|e| panic!("{t}: {e}"));
            }
        }
    }

    #[test]
    fn audit_rejects_a_foreign_result() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_configuration(Transform::LeafLeafSwap, &mut rng);
        assert!(c.audit(&c.tree).is_err());
    }
}
