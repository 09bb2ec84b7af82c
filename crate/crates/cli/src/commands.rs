use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use kdecomp::batch::Execution;
use kdecomp::cubic::decompose_subcubic_with_records;
use kdecomp::formats::{
    parse_cnf, parse_colouring, parse_graph, parse_path, path_to_json, write_colouring, write_graph,
};
use kdecomp::gadgets::{build_reduction, tower_size};
use kdecomp::graph::{peel_degeneracy, verify_decomposition, Decomposition, Graph, Vertex};
use kdecomp::kdegen::decompose_k_traced;
use kdecomp::oracles::{
    brute_1_in_k_sat_with, brute_decompose_with, brute_reconfig_path_with, gen_random_bounded,
    gen_random_colouring, gen_random_regular, gen_sparse_bounded, OracleBudget,
};
use kdecomp::recolour::{find_path, validate_path, Colouring, RecolourPath};
use kdecomp::{Error, Result as LibResult};
use serde_json::{json, Value};

use crate::report::{RunReport, Status};

/// Trace lines collected while a command runs; printed before the report.
pub type TraceSink = Vec<Value>;

fn read_input(report: &mut RunReport, role: &str, path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    report.input(role, &bytes);
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8 text", path.display()))
}

fn load_graph(report: &mut RunReport, path: &Path) -> Result<Graph> {
    let text = read_input(report, "graph", path)?;
    parse_graph(&text).with_context(|| format!("in {}", path.display()))
}

fn load_colouring(report: &mut RunReport, role: &str, path: &Path) -> Result<Colouring> {
    let text = read_input(report, role, path)?;
    parse_colouring(&text).with_context(|| format!("in {}", path.display()))
}

fn write_output(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn one_based(vs: &[Vertex]) -> Vec<Vertex> {
    vs.iter().map(|v| v + 1).collect()
}

fn decomposition_json(d: &Decomposition) -> Value {
    json!({ "k": d.k, "a": one_based(&d.a_set), "b": one_based(&d.b_set) })
}

/// Maps the "no solution exists" library errors onto the report; anything
/// else stays an error.
fn settle<T>(report: &mut RunReport, outcome: LibResult<T>) -> Result<Option<T>> {
    match outcome {
        Ok(value) => Ok(Some(value)),
        Err(Error::ForbiddenClique {
            clique_size,
            components,
        }) => {
            report.no_solution(format!("component isomorphic to K_{clique_size}"));
            report.result = json!({ "components": components.iter().map(|c| one_based(c)).collect::<Vec<_>>() });
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub struct DecomposeArgs<'a> {
    pub k: usize,
    pub input: &'a Path,
    pub force_general: bool,
    pub trace: bool,
}

pub fn decompose(report: &mut RunReport, sink: &mut TraceSink, args: DecomposeArgs) -> Result<()> {
    let g = load_graph(report, args.input)?;
    let k = args.k;
    report.param("k", k);
    let cubic = k == 3 && g.max_degree() <= 3 && !args.force_general;
    report.param("algorithm", if cubic { "cubic" } else { "kdegen" });
    let d = if cubic {
        let Some((d, records)) = settle(report, decompose_subcubic_with_records(&g))? else {
            return Ok(());
        };
        report.step("rules_applied", records.len());
        if args.trace {
            sink.extend(records.iter().map(|r| {
                json!({
                    "rule": r.rule,
                    "pivot": r.pivot + 1,
                    "removed": r.removed.iter().map(|(v, _)| v + 1).collect::<Vec<_>>(),
                    "added": r.added_edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>(),
                })
            }));
        }
        d
    } else {
        let Some((d, trace)) = settle(report, decompose_k_traced(&g, k, Execution::default()))?
        else {
            return Ok(());
        };
        report.step("iterations", trace.events.len());
        report.step("branches", trace.branches.len());
        if args.trace {
            sink.extend(trace.events.iter().enumerate().map(|(i, e)| {
                json!({
                    "iter": i,
                    "u": e.u + 1,
                    "v": e.v + 1,
                    "case": e.case,
                    "component_size": e.component_size,
                })
            }));
        }
        d
    };
    report.result = decomposition_json(&d);
    report.verdict("decomposition_valid", verify_decomposition(&g, k, &d)?);
    Ok(())
}

pub struct RecolourArgs<'a> {
    pub input: &'a Path,
    pub from: &'a Path,
    pub to: &'a Path,
    pub k: Option<usize>,
}

fn load_recolour_inputs(
    report: &mut RunReport,
    args: &RecolourArgs,
) -> Result<(Graph, usize, Colouring, Colouring)> {
    let g = load_graph(report, args.input)?;
    let alpha = load_colouring(report, "from", args.from)?;
    let beta = load_colouring(report, "to", args.to)?;
    let k = args.k.unwrap_or(alpha.k);
    if alpha.k != k || beta.k != k {
        bail!(
            "colour counts differ: --k {k}, from file {}, to file {}",
            alpha.k,
            beta.k
        );
    }
    for (role, c) in [("from", &alpha), ("to", &beta)] {
        c.check_proper(&g)
            .with_context(|| format!("{role} colouring"))?;
    }
    report.param("k", k);
    Ok((g, k, alpha, beta))
}

fn record_path(
    report: &mut RunReport,
    g: &Graph,
    k: usize,
    alpha: &Colouring,
    beta: &Colouring,
    path: &RecolourPath,
) {
    report.result = path_to_json(path);
    report.step("recolour_steps", path.len());
    report.verdict("path_valid", validate_path(g, k, alpha, path, beta));
}

pub fn recolour(report: &mut RunReport, args: RecolourArgs) -> Result<()> {
    let (g, k, alpha, beta) = load_recolour_inputs(report, &args)?;
    match find_path(&g, k, &alpha, &beta)? {
        Some(path) => record_path(report, &g, k, &alpha, &beta, &path),
        None => report.no_solution("frozen endpoints"),
    }
    Ok(())
}

pub fn gadget(
    report: &mut RunReport,
    input: &Path,
    k: Option<usize>,
    out: Option<&Path>,
) -> Result<()> {
    let text = read_input(report, "cnf", input)?;
    let inst = parse_cnf(&text).with_context(|| format!("in {}", input.display()))?;
    if let Some(k) = k.filter(|&k| k != inst.k) {
        bail!(
            "--k {k} does not match the clause arity {} of the instance",
            inst.k
        );
    }
    let k = inst.k;
    let gg = build_reduction(&inst, k)?;
    let m = inst.clauses.len();
    report.param("k", k);
    report.param("q", gg.q);
    report.step("vertices", gg.graph.n());
    report.step("edges", gg.graph.m());
    let graph_text = write_graph(&gg.graph);
    let labels = serde_json::to_value(gg.labels())?;
    report.result = match out {
        Some(prefix) => {
            let gr = with_suffix(prefix, ".gr");
            let lb = with_suffix(prefix, ".labels.json");
            write_output(&gr, &graph_text)?;
            write_output(&lb, &format!("{}\n", serde_json::to_string(&labels)?))?;
            json!({ "graph_file": gr.display().to_string(), "labels_file": lb.display().to_string() })
        }
        None => json!({ "graph": graph_text, "labels": labels }),
    };
    report.verdict("max_degree", gg.graph.max_degree() == 2 * k - 2);
    report.verdict(
        "vertex_count",
        gg.graph.n() == inst.num_vars * tower_size(k, gg.q) + m * k,
    );
    Ok(())
}

/// A JSON file holding either the payload itself or a whole run report
/// whose `result` is the payload.
fn payload(text: &str, what: &str) -> Result<Value> {
    let value: Value =
        serde_json::from_str(text).with_context(|| format!("{what} is not valid JSON"))?;
    Ok(match value.get("result") {
        Some(inner) if value.get("command").is_some() => inner.clone(),
        _ => value,
    })
}

fn ids(value: &Value, key: &str, n: usize) -> Result<Vec<Vertex>> {
    let list = value
        .get(key)
        .and_then(Value::as_array)
        .with_context(|| format!("decomposition lacks the `{key}` list"))?;
    list.iter()
        .map(|x| match x.as_u64() {
            Some(v) if v >= 1 && v as usize <= n => Ok(v as usize - 1),
            _ => bail!("`{key}` entry {x} is not a vertex id in 1..={n}"),
        })
        .collect()
}

/// First violation of a decomposition, with 1-indexed vertex ids.
fn explain(g: &Graph, k: usize, d: &Decomposition) -> String {
    let mut side = vec![None; g.n()];
    for (name, set) in [("A", &d.a_set), ("B", &d.b_set)] {
        for &v in set {
            if let Some(first) = side[v].replace(name) {
                return format!("vertex {} is listed in {first} and again in {name}", v + 1);
            }
        }
    }
    if let Some(v) = side.iter().position(Option::is_none) {
        return format!("vertex {} is in neither A nor B", v + 1);
    }
    for &v in &d.a_set {
        if let Some(&w) = g.neighbours(v).iter().find(|&&w| side[w] == Some("A")) {
            return format!("A contains the edge {}-{}", v + 1, w + 1);
        }
    }
    let (gb, _) = g.induced(&d.b_set);
    let (degeneracy, _) = peel_degeneracy(&gb);
    format!(
        "G[B] is {degeneracy}-degenerate, at most {} is allowed",
        k.saturating_sub(2)
    )
}

pub fn verify_decomposition_cmd(
    report: &mut RunReport,
    input: &Path,
    decomposition: &Path,
    k: Option<usize>,
) -> Result<()> {
    let g = load_graph(report, input)?;
    let text = read_input(report, "decomposition", decomposition)?;
    let value = payload(&text, "decomposition")?;
    let file_k = value.get("k").and_then(Value::as_u64).map(|k| k as usize);
    let k = k
        .or(file_k)
        .context("no k given by --k or the decomposition file")?;
    let d = Decomposition::new(ids(&value, "a", g.n())?, ids(&value, "b", g.n())?, k);
    report.param("k", k);
    let valid = verify_decomposition(&g, k, &d).unwrap_or(false);
    report
        .verification
        .insert("decomposition_valid".into(), valid);
    if !valid {
        report.status = Status::Invalid;
        report.reason = Some(explain(&g, k, &d));
    }
    Ok(())
}

pub fn verify_path_cmd(report: &mut RunReport, args: RecolourArgs, path_file: &Path) -> Result<()> {
    let (g, k, alpha, beta) = load_recolour_inputs(report, &args)?;
    let text = read_input(report, "path", path_file)?;
    let path = parse_path(&payload(&text, "path")?.to_string())?;
    report.step("recolour_steps", path.len());
    let valid =
        path.steps.iter().all(|s| s.v < g.n()) && validate_path(&g, k, &alpha, &path, &beta);
    report.verification.insert("path_valid".into(), valid);
    if !valid {
        report.status = Status::Invalid;
        report.reason = Some("the steps do not lead from the first colouring to the second through proper colourings".into());
    }
    Ok(())
}

fn emit_graph(report: &mut RunReport, g: &Graph, out: Option<&Path>) -> Result<()> {
    let text = write_graph(g);
    report.step("vertices", g.n());
    report.step("edges", g.m());
    report.result = match out {
        Some(path) => {
            write_output(path, &text)?;
            json!({ "graph_file": path.display().to_string() })
        }
        None => json!({ "graph": text }),
    };
    Ok(())
}

pub fn gen_regular(
    report: &mut RunReport,
    k: usize,
    n: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    report.param("k", k);
    report.param("n", n);
    report.param("seed", seed);
    let g = gen_random_regular(k, n, seed)?;
    emit_graph(report, &g, out)?;
    report.verdict("regular", g.vertices().all(|v| g.degree(v) == k));
    Ok(())
}

pub fn gen_subcubic(
    report: &mut RunReport,
    n: usize,
    seed: u64,
    p: Option<f64>,
    out: Option<&Path>,
) -> Result<()> {
    report.param("n", n);
    report.param("seed", seed);
    let g = match p {
        Some(p) => {
            if !(0.0..=1.0).contains(&p) {
                bail!("--p must lie in [0, 1], got {p}");
            }
            report.param("p", p);
            gen_random_bounded(n, 3, p, seed)
        }
        None => gen_sparse_bounded(n, 3, seed),
    };
    emit_graph(report, &g, out)?;
    report.verdict("subcubic", g.max_degree() <= 3);
    Ok(())
}

pub fn gen_colouring(
    report: &mut RunReport,
    input: &Path,
    k: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let g = load_graph(report, input)?;
    report.param("k", k);
    report.param("seed", seed);
    let c = gen_random_colouring(&g, k, seed)?;
    let text = write_colouring(&c);
    report.result = match out {
        Some(path) => {
            write_output(path, &text)?;
            json!({ "colouring_file": path.display().to_string() })
        }
        None => json!({ "colouring": text }),
    };
    report.verdict("proper", c.is_proper(&g));
    Ok(())
}

fn budget(budget_n: Option<usize>, budget_states: Option<u64>) -> OracleBudget {
    let mut b = OracleBudget::default();
    if let Some(n) = budget_n {
        b.max_vertices_for_subset_search = n;
    }
    if let Some(s) = budget_states {
        b.max_state_count_for_reconfig_bfs = s;
    }
    b
}

pub fn oracle_decompose(
    report: &mut RunReport,
    input: &Path,
    k: usize,
    budget_n: Option<usize>,
) -> Result<()> {
    let g = load_graph(report, input)?;
    report.param("k", k);
    match brute_decompose_with(&g, k, &budget(budget_n, None))? {
        Some(d) => {
            report.result = decomposition_json(&d);
            report.verdict("decomposition_valid", verify_decomposition(&g, k, &d)?);
        }
        None => report.no_solution("no decomposition exists"),
    }
    Ok(())
}

pub fn oracle_recolour(
    report: &mut RunReport,
    args: RecolourArgs,
    budget_states: Option<u64>,
) -> Result<()> {
    let (g, k, alpha, beta) = load_recolour_inputs(report, &args)?;
    match brute_reconfig_path_with(&g, k, &alpha, &beta, &budget(None, budget_states))? {
        Some(path) => record_path(report, &g, k, &alpha, &beta, &path),
        None => report.no_solution("no path"),
    }
    Ok(())
}

pub fn oracle_sat(report: &mut RunReport, input: &Path, budget_n: Option<usize>) -> Result<()> {
    let text = read_input(report, "cnf", input)?;
    let inst = parse_cnf(&text).with_context(|| format!("in {}", input.display()))?;
    report.param("k", inst.k);
    match brute_1_in_k_sat_with(&inst, &budget(budget_n, None))? {
        Some(assignment) => {
            let true_vars: Vec<usize> =
                (1..=inst.num_vars).filter(|&x| assignment[x - 1]).collect();
            report.result = json!({ "true_variables": true_vars });
            report.verdict("assignment_satisfies", inst.satisfied_by(&assignment));
        }
        None => report.no_solution("unsatisfiable"),
    }
    Ok(())
}

pub struct BenchArgs {
    pub start: usize,
    pub steps: usize,
    pub reps: usize,
    pub seed: u64,
}

/// Median wall time of `reps` runs on one graph per size, sizes doubling.
fn doubling_table(
    report: &mut RunReport,
    args: &BenchArgs,
    make: impl Fn(usize, u64) -> Result<Graph>,
    run: impl Fn(&Graph) -> Result<bool>,
) -> Result<()> {
    if args.reps == 0 || args.steps == 0 {
        bail!("--reps and --steps must be positive");
    }
    report.param("start", args.start);
    report.param("steps", args.steps);
    report.param("reps", args.reps);
    report.param("seed", args.seed);
    let mut rows = Vec::new();
    let mut previous: Option<f64> = None;
    let mut worst: f64 = 0.0;
    let mut all_valid = true;
    for i in 0..args.steps {
        let n = args.start << i;
        let g = make(n, args.seed.wrapping_add(i as u64))?;
        let mut times = Vec::with_capacity(args.reps);
        for _ in 0..args.reps {
            let start = Instant::now();
            all_valid &= run(&g)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
        }
        times.sort_by(f64::total_cmp);
        let median = times[times.len() / 2];
        let ratio = previous.map(|p| median / p);
        worst = worst.max(ratio.unwrap_or(0.0));
        rows.push(json!({ "n": n, "median_ms": median, "ratio": ratio }));
        previous = Some(median);
    }
    report.result = json!({ "rows": rows, "worst_ratio": worst });
    report.verdict("outputs_valid", all_valid);
    Ok(())
}

pub fn bench_cubic(report: &mut RunReport, args: BenchArgs) -> Result<()> {
    doubling_table(
        report,
        &args,
        |n, seed| Ok(gen_sparse_bounded(n, 3, seed)),
        |g| {
            let (d, _) = decompose_subcubic_with_records(g)?;
            Ok(verify_decomposition(g, 3, &d)?)
        },
    )
}

pub fn bench_kdegen(report: &mut RunReport, k: usize, args: BenchArgs) -> Result<()> {
    report.param("k", k);
    doubling_table(
        report,
        &args,
        |n, seed| Ok(gen_random_regular(k, n, seed)?),
        |g| {
            let (d, _) = decompose_k_traced(g, k, Execution::default())?;
            Ok(verify_decomposition(g, k, &d)?)
        },
    )
}

pub fn out_path(p: &Option<PathBuf>) -> Option<&Path> {
    p.as_deref()
}
