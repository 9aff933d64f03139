//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! fails at the end if any criterion failed. Run with `--nocapture` to see
//! the lines on success.

use std::process::Command;
use std::time::{Duration, Instant};

use capleaf_core::connectivity::{is_k_connected, local_connectivity};
use capleaf_core::graph::ore_condition_check;
use capleaf_core::oracle::configs::{random_configuration, Transform};
use capleaf_core::oracle::{
    feasibility_bruteforce, fixture_graphs, for_each_degree_sum_graph, min_separator_bruteforce,
    random_instance, tightness_instance, InstanceMode,
};
use capleaf_core::solver::{ore_hamiltonian_path, verify_solution};
use capleaf_core::{solve, BoundSpec, Graph, SolveOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

/// One solver run kept for the termination check.
struct Run {
    label: String,
    n: usize,
    budget: usize,
    outcome: SolveOutcome,
}

#[derive(Default)]
struct Ledger {
    lines: Vec<String>,
    failed: Vec<usize>,
    runs: Vec<Run>,
}

impl Ledger {
    fn record(&mut self, id: usize, took: Duration, result: Result<String, String>) {
        let line = match &result {
            Ok(msg) => format!("PASS criterion {id}: {msg} ({:.2?})", took),
            Err(msg) => format!("FAIL criterion {id}: {msg} ({:.2?})", took),
        };
        if result.is_err() {
            self.failed.push(id);
        }
        println!("{line}");
        self.lines.push(line);
    }
}

fn hamiltonian(g: &Graph, p: &[usize]) -> bool {
    let mut seen = vec![false; g.n()];
    p.len() == g.n()
        && p.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        && p.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

/// End-to-end check on random instances; instances with n <= 10 are kept
/// for the oracle comparison.
fn criterion_end_to_end(
    ledger: &mut Ledger,
    small: &mut Vec<(Graph, BoundSpec)>,
) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let total = 240;
    let mut modes = [0usize; 2];
    for i in 0..total {
        let n = rng.random_range(6..=40usize);
        let k = rng.random_range(1..=4usize);
        let seed = rng.random::<u64>();
        let at = i % 2 == 0;
        modes[at as usize] += 1;
        let mode = if at {
            InstanceMode::AtThreshold
        } else {
            InstanceMode::AboveThreshold
        };
        let label = format!("random n={n} k={k} seed={seed} mode={mode}");
        let (g, spec) = random_instance(n, k, seed, mode).map_err(|e| format!("{label}: {e}"))?;
        let out = solve(&g, &spec).map_err(|e| format!("{label}: {e}"))?;
        let tree = out
            .tree()
            .ok_or_else(|| format!("{label}: returned {:?}", out.witness()))?;
        let rep = verify_solution(&g, &spec, tree);
        if !rep.passed() {
            return Err(format!("{label}: {:?}", rep.violations));
        }
        if rep.leaves > spec.leaf_budget() || (0..n).any(|v| tree.degree(v) > spec.cap(v)) {
            return Err(format!("{label}: bound exceeded"));
        }
        if n <= 10 {
            small.push((g.clone(), spec.clone()));
        }
        ledger.runs.push(Run {
            label,
            n,
            budget: spec.leaf_budget(),
            outcome: out,
        });
    }
    Ok(format!(
        "{total}/{total} instances solved and verified ({} at-threshold, {} above-threshold)",
        modes[1], modes[0]
    ))
}

fn criterion_oracle(small: &mut Vec<(Graph, BoundSpec)>) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..120 {
        let n = rng.random_range(6..=10usize);
        let k = rng.random_range(1..=4usize.min(n - 2));
        let mode = if i % 2 == 0 {
            InstanceMode::AtThreshold
        } else {
            InstanceMode::AboveThreshold
        };
        let (g, spec) = random_instance(n, k, rng.random(), mode).map_err(|e| e.to_string())?;
        small.push((g, spec));
    }
    let mut checked = 0;
    for (g, spec) in small.iter() {
        let holds = ore_condition_check(g, spec).holds() && is_k_connected(g, spec.k).is_yes();
        if !holds {
            continue;
        }
        let res = feasibility_bruteforce(g, spec).map_err(|e| e.to_string())?;
        let solved = solve(g, spec).map_err(|e| e.to_string())?;
        if !res.feasible {
            return Err(format!(
                "oracle says infeasible on n={} k={}",
                g.n(),
                spec.k
            ));
        }
        if let Some(t) = solved.tree() {
            if Some(t.leaf_count()) < res.best_leaf_count {
                return Err("solver beat the exhaustive optimum".into());
            }
        } else {
            return Err("solver failed where the oracle found a tree".into());
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} instances with n <= 10: oracle feasible on all, solver agrees"
    ))
}

fn criterion_tightness(ledger: &mut Ledger) -> Result<String, String> {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let mut done = Vec::new();
    for d in [&[3][..], &[4], &[3, 3], &[3, 4], &[3, 3, 3]] {
        let (g, spec) = tightness_instance(d.len(), d).map_err(|e| e.to_string())?;
        let label = format!("tight d={d:?}");
        if !is_k_connected(&g, spec.k).is_yes() {
            return Err(format!("{label}: not {}-connected", spec.k));
        }
        let deficit = ore_condition_check(&g, &spec).deficit();
        if deficit != 1 {
            return Err(format!("{label}: deficit {deficit}"));
        }
        if feasibility_bruteforce(&g, &spec)
            .map_err(|e| e.to_string())?
            .feasible
        {
            return Err(format!("{label}: oracle reports feasible"));
        }
        let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        let prefix = dir.path().join(format!("tight{}", ds.join("_")));
        let prefix = prefix.to_str().unwrap();
        let bin = env!("CARGO_BIN_EXE_capleaf");
        let gen = Command::new(bin)
            .args(["generate", "tight", "--d", &ds.join(","), "--out", prefix])
            .output()
            .map_err(|e| e.to_string())?;
        if gen.status.code() != Some(0) {
            return Err(format!("{label}: generate exited {:?}", gen.status.code()));
        }
        let graph_file = format!("{prefix}.graph");
        let bounds_file = format!("{prefix}.bounds");
        let out = Command::new(bin)
            .args(["solve", &graph_file, &bounds_file])
            .output()
            .map_err(|e| e.to_string())?;
        if out.status.code() != Some(2) {
            return Err(format!("{label}: solve exited {:?}", out.status.code()));
        }
        let outcome = solve(&g, &spec).map_err(|e| e.to_string())?;
        if outcome.witness().is_none() {
            return Err(format!("{label}: library solve found a tree"));
        }
        ledger.runs.push(Run {
            label: label.clone(),
            n: g.n(),
            budget: spec.leaf_budget(),
            outcome,
        });
        done.push(format!("{d:?}"));
    }
    Ok(format!(
        "{} instances tight, cmd solve exits 2 on each",
        done.join(" ")
    ))
}

fn criterion_ore(ledger: &mut Ledger) -> Result<String, String> {
    let mut counts = Vec::new();
    let mut bad = None;
    for n in 1..=7 {
        let mut count = 0usize;
        for_each_degree_sum_graph(n, n - 1, |g| {
            if !g.is_connected() || bad.is_some() {
                return;
            }
            count += 1;
            match ore_hamiltonian_path(g) {
                Ok(p) if hamiltonian(g, &p) => {}
                other => {
                    bad = Some(format!(
                        "n={n} edges={:?}: {other:?}",
                        g.edges().collect::<Vec<_>>()
                    ))
                }
            }
            if n >= 3 {
                // the solver's own degenerate branch: k = 1, all caps 2
                let spec = BoundSpec::uniform(n, 1, 2);
                match solve(g, &spec) {
                    Ok(out) if out.tree().is_some_and(|t| t.is_path() && t.is_spanning()) => {
                        ledger.runs.push(Run {
                            label: format!("ore n={n}"),
                            n,
                            budget: 2,
                            outcome: out,
                        })
                    }
                    other => bad = Some(format!("solve on n={n}: {other:?}")),
                }
            }
        })
        .map_err(|e| e.to_string())?;
        if let Some(b) = bad {
            return Err(b);
        }
        counts.push(count);
    }
    let total: usize = counts.iter().sum();
    Ok(format!(
        "{total} connected labelled graphs with n <= 7 (per n: {counts:?}) each get a Hamiltonian path"
    ))
}

fn criterion_termination(ledger: &Ledger) -> Result<String, String> {
    let mut longest = 0.0f64;
    for run in &ledger.runs {
        let trace = run.outcome.trace();
        trace
            .check_progress(run.n, run.budget)
            .map_err(|e| format!("{}: {e}", run.label))?;
        if let Some(t) = run.outcome.tree() {
            if &trace.replay() != t.edges() {
                return Err(format!("{}: trace does not replay to the tree", run.label));
            }
        }
        let limit = (run.n * run.budget.saturating_sub(1)).max(1) as f64;
        longest = longest.max(trace.len() as f64 / limit);
    }
    Ok(format!(
        "{} solver runs: potential strictly increasing, longest trace at {:.0}% of n(L-1)",
        ledger.runs.len(),
        longest * 100.0
    ))
}

fn criterion_menger() -> Result<String, String> {
    let mut pairs = 0;
    let mut graphs = 0;
    for (name, g) in fixture_graphs() {
        if g.n() > 8 {
            continue;
        }
        graphs += 1;
        for s in 0..g.n() {
            for t in s + 1..g.n() {
                if g.has_edge(s, t) {
                    continue;
                }
                let (flow, _) = local_connectivity(&g, s, t, false).map_err(|e| e.to_string())?;
                let brute = min_separator_bruteforce(&g, s, t);
                if flow != brute {
                    return Err(format!(
                        "{name} ({s},{t}): flow {flow}, brute force {brute}"
                    ));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{graphs} fixture graphs, {pairs} non-adjacent pairs: flow = minimum separator"
    ))
}

fn criterion_transformations() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut branch_at_v = 0;
    for t in Transform::ALL {
        for i in 0..1000 {
            let c = random_configuration(t, &mut rng);
            let after = c.apply().map_err(|e| format!("{t} #{i}: {e}"))?;
            c.audit(&after).map_err(|e| format!("{t} #{i}: {e}"))?;
            branch_at_v += usize::from(c.branch_is_v());
        }
    }
    Ok(format!(
        "7 x 1000 configurations pass; off-path branch vertex equal to v in {branch_at_v}/1000"
    ))
}

fn criterion_fixtures() -> Result<String, String> {
    let c5 = Graph::cycle(5);
    let out = solve(&c5, &BoundSpec::uniform(5, 2, 2)).map_err(|e| e.to_string())?;
    let t = out.tree().ok_or("C5: no tree")?;
    if !(t.is_path() && t.is_spanning()) {
        return Err("C5: not a Hamiltonian path".into());
    }
    let p = Graph::petersen();
    let spec = BoundSpec::uniform(10, 3, 3);
    if (spec.leaf_budget(), spec.ore_threshold()) != (5, 6) {
        return Err(format!(
            "Petersen: L={}, tau={}",
            spec.leaf_budget(),
            spec.ore_threshold()
        ));
    }
    let out = solve(&p, &spec).map_err(|e| e.to_string())?;
    let t = out.tree().ok_or("Petersen: no tree")?;
    if !verify_solution(&p, &spec, t).passed() || t.max_degree() > 3 || t.leaf_count() > 5 {
        return Err("Petersen: tree out of bounds".into());
    }
    let petersen_leaves = t.leaf_count();
    let n15 = BoundSpec::uniform(15, 4, 3);
    if (n15.leaf_budget(), n15.ore_threshold()) != (6, 10) {
        return Err(format!(
            "n=15: L={}, tau={}",
            n15.leaf_budget(),
            n15.ore_threshold()
        ));
    }
    Ok(format!(
        "C5 Hamiltonian path; Petersen tree with {petersen_leaves} leaves; n=15 k=4 caps 3 gives L=6 tau=10"
    ))
}

#[test]
fn acceptance() {
    let mut ledger = Ledger::default();
    let mut small = Vec::new();

    let start = Instant::now();
    let r = criterion_end_to_end(&mut ledger, &mut small);
    ledger.record(1, start.elapsed(), r);

    let start = Instant::now();
    let r = criterion_oracle(&mut small);
    ledger.record(2, start.elapsed(), r);

    let start = Instant::now();
    let r = criterion_tightness(&mut ledger);
    ledger.record(3, start.elapsed(), r);

    let start = Instant::now();
    let r = criterion_ore(&mut ledger);
    ledger.record(4, start.elapsed(), r);

    let start = Instant::now();
    let r = criterion_termination(&ledger);
    ledger.record(5, start.elapsed(), r);

    let start = Instant::now();
    let r = criterion_menger();
    ledger.record(6, start.elapsed(), r);

    let start = Instant::now();
    let r = criterion_transformations();
    ledger.record(7, start.elapsed(), r);

    let start = Instant::now();
    let r = criterion_fixtures();
    ledger.record(8, start.elapsed(), r);

    assert!(
        ledger.failed.is_empty(),
        "failed criteria {:?}:\n{}",
        ledger.failed,
        ledger.lines.join("\n")
    );
}
