use capleaf_core::connectivity::{
    check_fan, fan_to_tree, is_k_connected, local_connectivity, FanFailure,
};
use capleaf_core::oracle::{
    fixture_graphs, min_separator_bruteforce, random_instance, InstanceMode,
};
use capleaf_core::{Graph, KConnectivity};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let edges = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .zip(bits)
                .filter(|(_, b)| *b)
                .map(|(e, _)| e);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

#[test]
fn flow_matches_bruteforce_on_fixtures() {
    for (name, g) in fixture_graphs() {
        for s in 0..g.n() {
            for t in s + 1..g.n() {
                if g.has_edge(s, t) {
                    continue;
                }
                let (flow, sep) = local_connectivity(&g, s, t, true).unwrap();
                assert_eq!(
                    flow,
                    min_separator_bruteforce(&g, s, t),
                    "{name} ({s}, {t})"
                );
                let sep = sep.unwrap();
                assert_eq!(sep.size(), flow, "{name}");
                assert!(sep.disconnects(&g), "{name}");
            }
        }
    }
}

proptest! {
    #[test]
    fn menger_duality(g in arb_graph(8)) {
        for s in 0..g.n() {
            for t in s + 1..g.n() {
                if g.has_edge(s, t) {
                    continue;
                }
                let (flow, sep) = local_connectivity(&g, s, t, true).unwrap();
                prop_assert_eq!(flow, min_separator_bruteforce(&g, s, t));
                let sep = sep.unwrap();
                prop_assert!(!sep.cut.contains(&s) && !sep.cut.contains(&t));
                prop_assert!(sep.disconnects(&g));
            }
        }
    }

    #[test]
    fn k_connectivity_agrees_with_pairs(g in arb_graph(7), k in 1usize..5) {
        let pairwise = (0..g.n()).all(|s| {
            (s + 1..g.n()).all(|t| {
                g.has_edge(s, t) || min_separator_bruteforce(&g, s, t) >= k
            })
        });
        match is_k_connected(&g, k) {
            KConnectivity::Yes => prop_assert!(pairwise && g.n() > k),
            KConnectivity::TooFewVertices { .. } => prop_assert!(g.n() <= k),
            KConnectivity::No(sep) => {
                prop_assert!(sep.size() < k);
                prop_assert!(sep.disconnects(&g));
            }
        }
    }

    #[test]
    fn fans_exist_into_large_targets(seed in 0u64..10_000, n in 6usize..14, k in 1usize..4) {
        let (g, _) = random_instance(n, k, seed, InstanceMode::AtThreshold).unwrap();
        let w = (seed as usize) % n;
        let mut target = vec![false; n];
        let mut picked = 0;
        for v in (0..n).rev() {
            if v != w && picked < k.max(2) {
                target[v] = true;
                picked += 1;
            }
        }
        if target.iter().filter(|&&b| b).count() >= k {
            let fan = fan_to_tree(&g, w, &target, k).unwrap();
            prop_assert!(check_fan(&g, &target, &fan, k).is_ok());
        }
    }

    #[test]
    fn fan_failure_carries_a_real_separator(g in arb_graph(8), k in 1usize..4) {
        let n = g.n();
        let target: Vec<bool> = (0..n).map(|v| v >= n / 2).collect();
        match fan_to_tree(&g, 0, &target, k) {
            Ok(fan) => prop_assert!(check_fan(&g, &target, &fan, k).is_ok()),
            Err(FanFailure::Separated { found, separator }) => {
                prop_assert!(found < k);
                prop_assert!(separator.size() < k);
                prop_assert!(separator.disconnects(&g));
            }
            Err(FanFailure::Invalid(_)) => {}
        }
    }
}
