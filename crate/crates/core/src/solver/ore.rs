//! Hamiltonian paths by rotation and extension.
//!
//! Keeps a path, extends it greedily at both ends, and when stuck closes it
//! into a cycle (directly, or through a crossover pair `p0 ~ p[i+1]`,
//! `p[i] ~ p_end`) and reopens the cycle at a vertex with an outside
//! neighbour. Every round makes the path strictly longer. Under
//! `d(u) + d(v) >= n - 1` for all non-adjacent pairs of a connected graph the
//! crossover and the outside neighbour always exist.

use std::collections::VecDeque;

use crate::graph::Graph;

/// Non-adjacent pair whose degree sum is below `n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OreWitness {
    pub u: usize,
    pub v: usize,
    pub sum: usize,
}

impl OreWitness {
    fn new(g: &Graph, u: usize, v: usize) -> Self {
        OreWitness {
            u: u.min(v),
            v: u.max(v),
            sum: g.degree(u) + g.degree(v),
        }
    }
}

/// Hamiltonian path of `g`, or a pair violating the degree-sum bound
/// `n - 1` that blocked the construction.
pub fn ore_hamiltonian_path(g: &Graph) -> Result<Vec<usize>, OreWitness> {
    hamiltonian_path_traced(g, |_| {})
}

/// As [`ore_hamiltonian_path`], calling `on_growth` with the current path
/// each time it gets longer.
pub fn hamiltonian_path_traced<F>(g: &Graph, mut on_growth: F) -> Result<Vec<usize>, OreWitness>
where
    F: FnMut(&[usize]),
{
    let n = g.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut on_path = vec![false; n];
    let mut path: VecDeque<usize> = VecDeque::from([0]);
    on_path[0] = true;
    on_growth(path.make_contiguous());

    loop {
        loop {
            let back = *path.back().expect("non-empty");
            if let Some(y) = g.neighbors(back).find(|&y| !on_path[y]) {
                on_path[y] = true;
                path.push_back(y);
                on_growth(path.make_contiguous());
                continue;
            }
            let front = *path.front().expect("non-empty");
            if let Some(y) = g.neighbors(front).find(|&y| !on_path[y]) {
                on_path[y] = true;
                path.push_front(y);
                on_growth(path.make_contiguous());
                continue;
            }
            break;
        }
        if path.len() == n {
            return Ok(path.into());
        }

        let p: Vec<usize> = path.iter().copied().collect();
        let (p0, pe) = (p[0], p[p.len() - 1]);
        if p.len() == 1 {
            let other = (0..n).find(|&y| !on_path[y]).expect("path is not spanning");
            return Err(OreWitness::new(g, p0, other));
        }
        let cycle: Vec<usize> = if g.has_edge(p0, pe) {
            p
        } else {
            let Some(i) =
                (0..p.len() - 1).find(|&i| g.has_edge(p0, p[i + 1]) && g.has_edge(p[i], pe))
            else {
                return Err(OreWitness::new(g, p0, pe));
            };
            p[..=i]
                .iter()
                .chain(p[i + 1..].iter().rev())
                .copied()
                .collect()
        };

        let reopen = cycle
            .iter()
            .enumerate()
            .find_map(|(j, &c)| g.neighbors(c).find(|&y| !on_path[y]).map(|y| (j, y)));
        let Some((j, y)) = reopen else {
            // no cycle vertex sees the rest of the graph
            let other = (0..n).find(|&y| !on_path[y]).expect("path is not spanning");
            return Err(OreWitness::new(g, cycle[0], other));
        };
        on_path[y] = true;
        path = std::iter::once(y)
            .chain(cycle[j..].iter().copied())
            .chain(cycle[..j].iter().copied())
            .collect();
        on_growth(path.make_contiguous());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_hamiltonian_path(g: &Graph, p: &[usize]) -> bool {
        let mut seen = vec![false; g.n()];
        p.len() == g.n()
            && p.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
            && p.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    #[test]
    fn four_cycle() {
        let g = Graph::cycle(4);
        let p = ore_hamiltonian_path(&g).unwrap();
        assert!(is_hamiltonian_path(&g, &p));
    }

    #[test]
    fn k33() {
        let g = Graph::complete_bipartite(3, 3);
        let p = ore_hamiltonian_path(&g).unwrap();
        assert!(is_hamiltonian_path(&g, &p));
    }

    #[test]
    fn two_triangles_fail_with_witness() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let w = ore_hamiltonian_path(&g).unwrap_err();
        assert!(!g.has_edge(w.u, w.v));
        assert_eq!(w.sum, 4);
        assert!(w.sum < 5);
    }

    #[test]
    fn rotation_is_needed() {
        // greedy walks 0-1-2 and gets stuck; the triangle reopens at 1 towards 3
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (1, 3), (3, 4)]).unwrap();
        let p = ore_hamiltonian_path(&g).unwrap();
        assert!(is_hamiltonian_path(&g, &p));
    }

    #[test]
    fn growth_is_reported_one_vertex_at_a_time() {
        let g = Graph::complete_bipartite(4, 4);
        let mut lens = Vec::new();
        let p = hamiltonian_path_traced(&g, |p| lens.push(p.len())).unwrap();
        assert!(is_hamiltonian_path(&g, &p));
        assert_eq!(lens, (1..=8).collect::<Vec<_>>());
    }

    #[test]
    fn isolated_vertex() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let w = ore_hamiltonian_path(&g).unwrap_err();
        assert!(!g.has_edge(w.u, w.v));
        assert!(w.sum < 2);
    }
}
