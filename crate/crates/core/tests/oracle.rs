use capleaf_core::graph::{degree_sum_check, ore_condition_check};
use capleaf_core::oracle::{
    enumerate_spanning_trees, feasibility_bruteforce, for_each_spanning_tree, kirchhoff_count,
    random_instance, tightness_instance, InstanceMode, DEFAULT_TREE_LIMIT,
};
use capleaf_core::solver::{verify_edges, Violation};
use capleaf_core::{connectivity::is_k_connected, BoundSpec, Graph};
use proptest::prelude::*;

fn arb_connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (Just(n), proptest::collection::vec(any::<bool>(), pairs)).prop_map(|(n, bits)| {
            // a spanning path keeps every draw connected
            let extra = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .zip(bits)
                .filter(|(_, b)| *b)
                .map(|(e, _)| e);
            let edges = (0..n - 1).map(|i| (i, i + 1)).chain(extra);
            let mut set = std::collections::BTreeSet::new();
            set.extend(edges);
            Graph::from_edges(n, set).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_matrix_tree(g in arb_connected_graph(8)) {
        let trees = enumerate_spanning_trees(&g, DEFAULT_TREE_LIMIT).unwrap();
        prop_assert_eq!(trees.len() as i128, kirchhoff_count(&g));
        for t in &trees {
            prop_assert_eq!(t.len(), g.n() - 1);
            prop_assert!(t.iter().all(|&(a, b)| g.has_edge(a, b)));
        }
    }

    #[test]
    fn feasibility_matches_full_enumeration(
        g in arb_connected_graph(7),
        caps in proptest::collection::vec(2usize..5, 7),
        k in 1usize..4,
    ) {
        let n = g.n();
        let caps: Vec<usize> = caps[..n].iter().map(|&c| c.min(n - 1)).collect();
        let spec = BoundSpec::new(k.min(n), caps);
        let mut best = None::<usize>;
        for_each_spanning_tree(&g, DEFAULT_TREE_LIMIT, |t| {
            let mut deg = vec![0; n];
            for &(a, b) in t {
                deg[a] += 1;
                deg[b] += 1;
            }
            if (0..n).all(|v| deg[v] <= spec.caps[v]) {
                let leaves = deg.iter().filter(|&&d| d == 1).count();
                best = Some(best.map_or(leaves, |b| b.min(leaves)));
            }
        }).unwrap();
        let r = feasibility_bruteforce(&g, &spec).unwrap();
        prop_assert_eq!(r.best_leaf_count, best);
        prop_assert_eq!(r.feasible, best.is_some_and(|b| b <= spec.leaf_budget()));
        if let Some(t) = &r.example_tree {
            let rep = verify_edges(&g, &BoundSpec::new(n, spec.caps.clone()), t);
            let only_leaf_excess = rep
                .violations
                .iter()
                .all(|v| matches!(v, Violation::TooManyLeaves { .. }));
            prop_assert!(only_leaf_excess);
            prop_assert_eq!(Some(rep.leaves), best);
        }
    }
}

#[test]
fn matrix_tree_on_named_graphs() {
    for n in 3..=9 {
        assert_eq!(
            kirchhoff_count(&Graph::complete(n)),
            (n as i128).pow(n as u32 - 2)
        );
        assert_eq!(kirchhoff_count(&Graph::cycle(n)), n as i128);
        assert_eq!(kirchhoff_count(&Graph::path(n)), 1);
    }
    // K_{a,b} has a^(b-1) b^(a-1) spanning trees
    for (a, b) in [(2, 3), (3, 3), (3, 4), (2, 6)] {
        let want = (a as i128).pow(b - 1) * (b as i128).pow(a - 1);
        assert_eq!(
            kirchhoff_count(&Graph::complete_bipartite(a as usize, b as usize)),
            want
        );
        let listed = enumerate_spanning_trees(
            &Graph::complete_bipartite(a as usize, b as usize),
            DEFAULT_TREE_LIMIT,
        )
        .unwrap();
        assert_eq!(listed.len() as i128, want);
    }
}

#[test]
fn tightness_family_is_tight() {
    for d in [&[3][..], &[4], &[3, 3], &[3, 4], &[3, 3, 3]] {
        let (g, spec) = tightness_instance(d.len(), d).unwrap();
        assert!(is_k_connected(&g, spec.k).is_yes(), "{d:?}");
        assert_eq!(ore_condition_check(&g, &spec).deficit(), 1, "{d:?}");
        assert_eq!(
            g.n() + 1,
            spec.leaf_budget() + spec.ore_threshold() as usize
        );
        let r = feasibility_bruteforce(&g, &spec).unwrap();
        assert!(!r.feasible, "{d:?}");
    }
}

#[test]
fn generator_is_deterministic_and_meets_hypotheses() {
    for seed in 0..20 {
        for mode in [InstanceMode::AboveThreshold, InstanceMode::AtThreshold] {
            let (g, spec) = random_instance(10, 3, seed, mode).unwrap();
            assert!(degree_sum_check(&g, spec.ore_threshold()).holds());
            assert!(is_k_connected(&g, 3).is_yes());
            assert_eq!(random_instance(10, 3, seed, mode).unwrap(), (g, spec));
        }
    }
}

#[test]
fn at_threshold_graphs_are_locally_minimal() {
    for seed in 0..10 {
        let (g, spec) = random_instance(9, 2, seed, InstanceMode::AtThreshold).unwrap();
        for (a, b) in g.edges() {
            let h = g.without_edge(a, b);
            let still = degree_sum_check(&h, spec.ore_threshold()).holds()
                && is_k_connected(&h, 2).is_yes();
            assert!(!still, "seed {seed}: edge {a}-{b} is removable");
        }
    }
}
