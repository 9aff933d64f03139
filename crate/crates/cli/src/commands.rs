use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use capleaf_core::connectivity::is_k_connected;
use capleaf_core::graph::{
    ore_condition_check, parse_bounds, parse_graph, serialize_bounds, serialize_dot,
    serialize_edge_list, validate_bounds, BoundViolation,
};
use capleaf_core::oracle::{
    feasibility_bruteforce, random_instance, tightness_instance, InstanceMode, OracleError,
};
use capleaf_core::solver::{max_leaves_bounds, verify_solution};
use capleaf_core::{
    solve as run_solver, BoundSpec, Graph, KConnectivity, OreCheck, SolveError, SolveOutcome,
    Witness,
};

use crate::exit;
use crate::report::{Report, Value};
use crate::{CheckArgs, GenerateKind, OracleArgs, SolveArgs};

type CommandResult = (i32, Result<Report, String>);

fn fail(code: i32, msg: impl Into<String>) -> CommandResult {
    (code, Err(msg.into()))
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph, String> {
    parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_bounds(path: &Path) -> Result<BoundSpec, String> {
    parse_bounds(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn summary(r: &mut Report, g: &Graph, spec: &BoundSpec) {
    r.set("n", g.n());
    r.set("m", g.m());
    r.set("k", spec.k);
    r.set("leaf_budget", spec.leaf_budget());
    r.set("ore_threshold", spec.ore_threshold());
}

/// Adds the two hypothesis checks to `r`; true when both hold.
fn hypotheses(r: &mut Report, g: &Graph, spec: &BoundSpec) -> bool {
    let ore = ore_condition_check(g, spec);
    r.set("ore_condition", if ore.holds() { "holds" } else { "fails" });
    r.set("ore_deficit", ore.deficit());
    if let OreCheck::Witness { u, v, sum, .. } = ore {
        r.set("ore_witness_pair", Value::Ints(vec![u, v]));
        r.set("ore_witness_sum", sum);
    }
    let conn = is_k_connected(g, spec.k);
    match &conn {
        KConnectivity::Yes => r.set("k_connected", "yes"),
        KConnectivity::TooFewVertices { .. } => r.set("k_connected", "too-few-vertices"),
        KConnectivity::No(sep) => {
            r.set("k_connected", "no");
            r.set("separator_cut", Value::Ints(sep.cut.clone()));
            r.set("separator_pair", Value::Ints(vec![sep.pair.0, sep.pair.1]));
        }
    }
    ore.holds() && conn.is_yes()
}

fn witness(r: &mut Report, w: &Witness) {
    match w {
        Witness::DegreeSum {
            u,
            v,
            sum,
            threshold,
        } => {
            r.set("witness", "degree-sum");
            r.set("witness_pair", Value::Ints(vec![*u, *v]));
            r.set("witness_sum", *sum);
            r.set("witness_threshold", *threshold);
        }
        Witness::Separator(sep) => {
            r.set("witness", "separator");
            r.set("witness_cut", Value::Ints(sep.cut.clone()));
            r.set("witness_pair", Value::Ints(vec![sep.pair.0, sep.pair.1]));
        }
    }
}

pub fn solve(a: &SolveArgs) -> CommandResult {
    let started = Instant::now();
    let g = match load_graph(&a.graph) {
        Ok(g) => g,
        Err(e) => return fail(exit::INPUT, e),
    };
    let spec = match (a.max_leaves, &a.bounds) {
        (Some(s), _) => match max_leaves_bounds(g.n(), s) {
            Ok(spec) => spec,
            Err(e) => return fail(exit::INPUT, e.to_string()),
        },
        (None, Some(path)) => match load_bounds(path) {
            Ok(spec) => spec,
            Err(e) => return fail(exit::INPUT, e),
        },
        (None, None) => return fail(exit::INPUT, "a bounds file or --max-leaves is required"),
    };
    if let Err(e) = validate_bounds(&spec, &g) {
        return fail(exit::INPUT, format!("invalid bounds: {e}"));
    }

    let mut r = Report::new("solve");
    r.set(
        "mode",
        if a.max_leaves.is_some() {
            "leaf-bound"
        } else {
            "caps"
        },
    );
    summary(&mut r, &g, &spec);
    let ok = hypotheses(&mut r, &g, &spec);
    if a.strict && !ok {
        r.set("outcome", "hypotheses-fail");
        return (exit::WITNESS, Ok(r));
    }

    let code = match run_solver(&g, &spec) {
        Ok(SolveOutcome::Spanning { tree, trace }) => {
            let check = verify_solution(&g, &spec, &tree);
            let edges: Vec<_> = tree.edges().iter().copied().collect();
            r.set("outcome", "spanning-tree");
            r.set("leaves", check.leaves);
            r.set("max_degree", check.max_degree);
            r.set("iterations", trace.len());
            r.set("tree_edges", Value::Edges(edges.clone()));
            r.set("verified", check.passed());
            if !check.passed() {
                let msgs: Vec<String> = check.violations.iter().map(|v| v.to_string()).collect();
                r.set("violations", msgs.join("; "));
            }
            if a.trace {
                r.set("initial_path", Value::Ints(trace.initial_path.clone()));
                r.set("trace", Value::Steps(trace.records.clone()));
            }
            if let Some(path) = &a.dot {
                if let Err(e) = write_dot(path, &g, &edges) {
                    return fail(exit::INPUT, e);
                }
                r.set("dot_file", path.display().to_string());
            }
            if check.passed() {
                exit::SUCCESS
            } else {
                exit::INTERNAL
            }
        }
        Ok(SolveOutcome::Failed { witness: w, trace }) => {
            r.set("outcome", "witness");
            witness(&mut r, &w);
            r.set("witness_sound", w.is_sound(&g, &spec));
            r.set("iterations", trace.len());
            if a.trace {
                r.set("initial_path", Value::Ints(trace.initial_path.clone()));
                r.set("trace", Value::Steps(trace.records.clone()));
            }
            if w.is_sound(&g, &spec) {
                exit::WITNESS
            } else {
                exit::INTERNAL
            }
        }
        Err(SolveError::Internal(msg)) => {
            r.set("outcome", "internal-error");
            r.set("error", msg);
            exit::INTERNAL
        }
        Err(e) => return fail(exit::INPUT, e.to_string()),
    };
    if a.timing {
        r.set("elapsed_ms", started.elapsed().as_millis() as i64);
    }
    (code, Ok(r))
}

fn write_dot(path: &Path, g: &Graph, edges: &[capleaf_core::Edge]) -> Result<(), String> {
    let dot = serialize_dot(g, Some(edges)).map_err(|e| e.to_string())?;
    fs::write(path, dot).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn check(a: &CheckArgs) -> CommandResult {
    let (g, spec) = match (load_graph(&a.graph), load_bounds(&a.bounds)) {
        (Ok(g), Ok(s)) => (g, s),
        (Err(e), _) | (_, Err(e)) => return fail(exit::INPUT, e),
    };
    let mut r = Report::new("check");
    let valid = validate_bounds(&spec, &g);
    if let Err(e @ BoundViolation::CapCount { .. }) = valid {
        return fail(exit::INPUT, format!("invalid bounds: {e}"));
    }
    summary(&mut r, &g, &spec);
    r.set("bounds_valid", valid.is_ok());
    if let Err(e) = &valid {
        r.set("bounds_error", e.to_string());
    }
    let ok = hypotheses(&mut r, &g, &spec);
    r.set("all_hold", ok && valid.is_ok());
    let code = if valid.is_err() {
        exit::INPUT
    } else if ok {
        exit::SUCCESS
    } else {
        exit::WITNESS
    };
    (code, Ok(r))
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn generate(kind: &GenerateKind) -> CommandResult {
    let (made, meta, out) = match kind {
        GenerateKind::Tight { k, d, out } => {
            let k = k.unwrap_or(d.len());
            let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            let meta = format!("tight k={k} d={}", ds.join(","));
            (tightness_instance(k, d), meta, out)
        }
        GenerateKind::Random {
            n,
            k,
            seed,
            mode,
            out,
        } => {
            let mode: InstanceMode = match mode.parse() {
                Ok(m) => m,
                Err(e) => return fail(exit::INPUT, e),
            };
            let meta = format!("random n={n} k={k} seed={seed} mode={mode}");
            (random_instance(*n, *k, *seed, mode), meta, out)
        }
    };
    let (g, spec) = match made {
        Ok(x) => x,
        Err(e) => return fail(exit::INPUT, e.to_string()),
    };
    let header = format!(
        "# capleaf generate {meta}\n# n={} m={} k={} leaf_budget={} ore_threshold={}\n",
        g.n(),
        g.m(),
        spec.k,
        spec.leaf_budget(),
        spec.ore_threshold()
    );
    let graph_file = with_extension(out, "graph");
    let bounds_file = with_extension(out, "bounds");
    for (path, body) in [
        (&graph_file, serialize_edge_list(&g)),
        (&bounds_file, serialize_bounds(&spec)),
    ] {
        if let Err(e) = fs::write(path, format!("{header}{body}")) {
            return fail(exit::INPUT, format!("{}: {e}", path.display()));
        }
    }
    let mut r = Report::new("generate");
    r.set("generator", meta);
    summary(&mut r, &g, &spec);
    r.set("graph_file", graph_file.display().to_string());
    r.set("bounds_file", bounds_file.display().to_string());
    (exit::SUCCESS, Ok(r))
}

pub fn oracle(a: &OracleArgs) -> CommandResult {
    let (g, spec) = match (load_graph(&a.graph), load_bounds(&a.bounds)) {
        (Ok(g), Ok(s)) => (g, s),
        (Err(e), _) | (_, Err(e)) => return fail(exit::INPUT, e),
    };
    if let Err(e) = validate_bounds(&spec, &g) {
        return fail(exit::INPUT, format!("invalid bounds: {e}"));
    }
    let mut r = Report::new("oracle");
    summary(&mut r, &g, &spec);
    match feasibility_bruteforce(&g, &spec) {
        Ok(res) => {
            r.set("feasible", res.feasible);
            match res.best_leaf_count {
                Some(b) => r.set("best_leaf_count", b),
                None => r.set("best_leaf_count", "none"),
            }
            match res.example_tree {
                Some(t) => r.set("example_tree", Value::Edges(t)),
                None => r.set("example_tree", "none"),
            }
            let code = if res.feasible {
                exit::SUCCESS
            } else {
                exit::WITNESS
            };
            (code, Ok(r))
        }
        Err(OracleError::Disconnected) => {
            r.set("feasible", false);
            r.set("best_leaf_count", "none");
            r.set("example_tree", "none");
            r.set("reason", "disconnected");
            (exit::WITNESS, Ok(r))
        }
        Err(e) => fail(exit::INPUT, e.to_string()),
    }
}
