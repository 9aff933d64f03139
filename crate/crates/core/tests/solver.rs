use capleaf_core::graph::{ore_condition_check, validate_bounds};
use capleaf_core::oracle::{feasibility_bruteforce, random_instance, InstanceMode};
use capleaf_core::solver::{ore_hamiltonian_path, max_leaves_bounds, verify_solution};
use capleaf_core::{
    connectivity::is_k_connected, solve, solve_max_leaves, BoundSpec, Graph, SolveError, SolveOutcome,
};
use proptest::prelude::*;

fn check_trace(g: &Graph, spec: &BoundSpec, out: &SolveOutcome) -> Result<(), TestCaseError> {
    let budget = spec.leaf_budget();
    out.trace()
        .check_progress(g.n(), budget)
        .map_err(TestCaseError::fail)?;
    if let Some(t) = out.tree() {
        prop_assert_eq!(&out.trace().replay(), t.edges());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solves_every_instance_meeting_the_hypotheses(
        n in 6usize..30,
        k in 1usize..5,
        seed in any::<u64>(),
        at in any::<bool>(),
    ) {
        let mode = if at { InstanceMode::AtThreshold } else { InstanceMode::AboveThreshold };
        let (g, spec) = random_instance(n, k, seed, mode).unwrap();
        let out = solve(&g, &spec).unwrap();
        let t = out.tree().expect("hypotheses hold, a tree must be found");
        let rep = verify_solution(&g, &spec, t);
        prop_assert!(rep.passed(), "{:?}", rep.violations);
        prop_assert!(rep.leaves <= spec.leaf_budget());
        check_trace(&g, &spec, &out)?;
    }

    #[test]
    fn arbitrary_graphs_get_a_tree_or_a_sound_witness(
        n in 4usize..10,
        bits in proptest::collection::vec(any::<bool>(), 45),
        caps in proptest::collection::vec(2usize..5, 10),
        k in 1usize..4,
    ) {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .zip(bits).filter(|(_, b)| *b).map(|(e, _)| e);
        let g = Graph::from_edges(n, edges).unwrap();
        let caps: Vec<usize> = caps[..n].iter().map(|&c| c.min(n - 1)).collect();
        let spec = BoundSpec::new(k, caps);
        match solve(&g, &spec) {
            Ok(SolveOutcome::Spanning { tree, .. }) => {
                prop_assert!(verify_solution(&g, &spec, &tree).passed());
            }
            Ok(out @ SolveOutcome::Failed { .. }) => {
                let w = out.witness().unwrap();
                prop_assert!(w.is_sound(&g, &spec), "{:?}", w);
                check_trace(&g, &spec, &out)?;
            }
            Err(SolveError::InvalidBounds(_)) => prop_assert!(validate_bounds(&spec, &g).is_err()),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn solution_never_beats_the_optimum(n in 5usize..10, k in 1usize..4, seed in any::<u64>()) {
        let (g, spec) = random_instance(n, k.min(n - 2), seed, InstanceMode::AtThreshold).unwrap();
        let out = solve(&g, &spec).unwrap();
        let t = out.tree().unwrap();
        let best = feasibility_bruteforce(&g, &spec).unwrap();
        prop_assert!(best.feasible);
        prop_assert!(t.leaf_count() >= best.best_leaf_count.unwrap());
    }

    #[test]
    fn ore_paths_on_dense_graphs(n in 3usize..20, seed in any::<u64>()) {
        let (g, _) = random_instance(n.max(4), 1, seed, InstanceMode::AboveThreshold).unwrap();
        if ore_condition_check(&g, &BoundSpec::uniform(g.n(), 1, 2)).holds() {
            let p = ore_hamiltonian_path(&g).unwrap();
            prop_assert_eq!(p.len(), g.n());
            prop_assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
        }
    }
}

#[test]
fn hypotheses_imply_both_checks_pass() {
    for seed in 0..30 {
        let (g, spec) = random_instance(12, 2, seed, InstanceMode::AtThreshold).unwrap();
        assert!(ore_condition_check(&g, &spec).holds());
        assert!(is_k_connected(&g, 2).is_yes());
    }
}

#[test]
fn one_capped_vertex() {
    // K5 with vertex 0 capped at 2: some spanning tree has at most 2 leaves
    let g = Graph::complete(5);
    let out = solve_max_leaves(&g, 2).unwrap();
    let t = out.tree().unwrap();
    assert!(t.degree(0) <= 2);
    assert!(t.leaf_count() <= 2);
    let spec = max_leaves_bounds(5, 2).unwrap();
    assert_eq!(spec.leaf_budget(), 2);
}
