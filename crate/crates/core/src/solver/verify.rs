//! Stand-alone check of a claimed solution. Works from the raw edge list with
//! its own union-find, so it shares nothing with the tree engine.

use std::fmt;

use crate::graph::{BoundSpec, Edge, Graph};
use crate::tree::WorkTree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongEdgeCount {
        edges: usize,
        expected: usize,
    },
    NotAGraphEdge(Edge),
    Cycle(Edge),
    Disconnected {
        components: usize,
    },
    CapExceeded {
        vertex: usize,
        degree: usize,
        cap: usize,
    },
    TooManyLeaves {
        leaves: usize,
        budget: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongEdgeCount { edges, expected } => {
                write!(f, "{edges} edges, a spanning tree needs {expected}")
            }
            Violation::NotAGraphEdge((a, b)) => write!(f, "{a} -- {b} is not a graph edge"),
            Violation::Cycle((a, b)) => write!(f, "{a} -- {b} closes a cycle"),
            Violation::Disconnected { components } => write!(f, "{components} components"),
            Violation::CapExceeded {
                vertex,
                degree,
                cap,
            } => {
                write!(f, "vertex {vertex} has degree {degree} > cap {cap}")
            }
            Violation::TooManyLeaves { leaves, budget } => {
                write!(f, "{leaves} leaves > budget {budget}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
    pub leaves: usize,
    pub max_degree: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Checks that `edges` form a spanning tree of `g` within the caps and with at
/// most `2 + sum over the k smallest caps of (cap - 2)` leaves.
pub fn verify_edges(g: &Graph, spec: &BoundSpec, edges: &[Edge]) -> VerificationReport {
    let n = g.n();
    let mut violations = Vec::new();
    if edges.len() + 1 != n {
        violations.push(Violation::WrongEdgeCount {
            edges: edges.len(),
            expected: n.saturating_sub(1),
        });
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut components = n;
    let mut degree = vec![0usize; n];
    for &(a, b) in edges {
        if a >= n || b >= n || !g.has_edge(a, b) {
            violations.push(Violation::NotAGraphEdge((a, b)));
            continue;
        }
        degree[a] += 1;
        degree[b] += 1;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            violations.push(Violation::Cycle((a, b)));
        } else {
            parent[ra] = rb;
            components -= 1;
        }
    }
    if components > 1 {
        violations.push(Violation::Disconnected { components });
    }
    for (v, &d) in degree.iter().enumerate() {
        let cap = spec.caps.get(v).copied().unwrap_or(0);
        if d > cap {
            violations.push(Violation::CapExceeded {
                vertex: v,
                degree: d,
                cap,
            });
        }
    }
    let mut sorted = spec.caps.clone();
    sorted.sort_unstable();
    let excess: i64 = sorted.iter().take(spec.k).map(|&c| c as i64 - 2).sum();
    let budget = (2 + excess).max(0) as usize;
    let leaves = degree.iter().filter(|&&d| d == 1).count();
    if leaves > budget {
        violations.push(Violation::TooManyLeaves { leaves, budget });
    }
    VerificationReport {
        violations,
        leaves,
        max_degree: degree.iter().copied().max().unwrap_or(0),
    }
}

pub fn verify_solution(g: &Graph, spec: &BoundSpec, t: &WorkTree) -> VerificationReport {
    let edges: Vec<Edge> = t.edges().iter().copied().collect();
    verify_edges(g, spec, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_path_passes() {
        let g = Graph::cycle(5);
        let spec = BoundSpec::uniform(5, 2, 2);
        let r = verify_edges(&g, &spec, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!((r.leaves, r.max_degree), (2, 2));
    }

    #[test]
    fn foreign_edge_detected() {
        let g = Graph::cycle(5);
        let spec = BoundSpec::uniform(5, 2, 2);
        let r = verify_edges(&g, &spec, &[(0, 1), (1, 2), (2, 3), (1, 4)]);
        assert!(r.violations.contains(&Violation::NotAGraphEdge((1, 4))));
    }

    #[test]
    fn star_exceeds_cap() {
        let g = Graph::complete(5);
        let spec = BoundSpec::uniform(5, 1, 3);
        let r = verify_edges(&g, &spec, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(r.violations.contains(&Violation::CapExceeded {
            vertex: 0,
            degree: 4,
            cap: 3
        }));
        assert!(r.violations.contains(&Violation::TooManyLeaves {
            leaves: 4,
            budget: 3
        }));
    }

    #[test]
    fn cycles_and_forests() {
        let g = Graph::complete(4);
        let spec = BoundSpec::uniform(4, 1, 3);
        let r = verify_edges(&g, &spec, &[(0, 1), (1, 2), (0, 2)]);
        assert!(r.violations.contains(&Violation::Cycle((0, 2))));
        assert!(r
            .violations
            .contains(&Violation::Disconnected { components: 2 }));
    }
}
