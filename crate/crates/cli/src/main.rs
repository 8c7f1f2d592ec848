//! `detcode`: verify, solve and search detection codes from the command line.
//!
//! Exit codes: 0 pass, 1 fail or infeasible, 2 usage or I/O error. Vertex ids
//! in reports are 1-based, like the file formats.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use detcode::cubic::enumerate_cubic;
use detcode::graph::io::{read_detector_set, read_graph, to_dot, write_detector_set, write_graph};
use detcode::graph::random::{gnp, tree};
use detcode::grid::{min_pattern, search_pattern, verify_pattern, PatternSearchOptions, PeriodicPattern};
use detcode::reduction::{
    assignment_to_code, code_to_assignment, parse_dimacs, reduce_to_detic, single_edge_mutations, verify_gadget_contracts,
    verify_gadget_contracts_with, write_map, Formula, Literal,
};
use detcode::solver::{extremal_cubic, min_code, min_code_bruteforce, Objective, SolveOptions, SolveResult, SolveStatus};
use detcode::verify::{check_cubic_propositions, detic_exists, verify_code_all_pairs, ALL_KINDS};
use detcode::{generate, verify_code, CodeKind, Density, FamilySpec, Graph, Lattice, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "detcode", version, about = "Error-detecting identifying codes and related detection systems")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the solver and pattern search.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a detector set against a code kind.
    Verify(VerifyArgs),
    /// Decide whether a graph admits any DET:IC.
    Exists {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Minimum code (or a code within a budget).
    Solve(SolveArgs),
    /// Build the DET:IC instance of a 3-CNF formula.
    Reduce {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Map a truth assignment to a detector set, or a detector set back.
    Translate(TranslateArgs),
    /// Check the gadget contracts and single-edge mutations.
    GadgetCheck {
        /// Also report which contracts each single-edge deletion breaks.
        #[arg(long)]
        mutations: bool,
    },
    /// Verify a periodic pattern on its infinite lattice.
    PatternVerify {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Search a periodic DET:IC at a fixed period.
    PatternSearch(PatternSearchArgs),
    /// Write a named or random graph.
    Gen(GenArgs),
    /// Enumerate connected cubic graphs.
    EnumCubic {
        #[arg(long)]
        n: usize,
        /// Keep isomorphic copies.
        #[arg(long)]
        raw: bool,
        /// Write each graph as `cubic-<n>-<i>.gr` here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Largest or smallest DET:IC over connected cubic graphs on n vertices.
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "max")]
        objective: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    set: PathBuf,
    #[arg(long, default_value = "detic")]
    kind: CodeKind,
    /// Check every pair rather than the local ones.
    #[arg(long)]
    all_pairs: bool,
    /// Also run the cubic proposition checker (DET:IC on cubic graphs).
    #[arg(long)]
    propositions: bool,
    /// Write the graph with detectors marked.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, required_unless_present = "corpus")]
    graph: Option<PathBuf>,
    #[arg(long, default_value = "detic")]
    kind: CodeKind,
    #[arg(long)]
    budget: Option<usize>,
    /// Write the witness here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Compare against brute force on this many random graphs (n <= 9) instead.
    #[arg(long, conflicts_with = "graph")]
    corpus: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TranslateArgs {
    #[arg(long)]
    cnf: PathBuf,
    /// Signed literals, e.g. "-1 2 3"; every variable must appear once.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "set", required_unless_present = "set")]
    assignment: Option<String>,
    /// Detector set on the reduced graph.
    #[arg(long)]
    set: Option<PathBuf>,
    /// Where to write the detector set.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PatternSearchArgs {
    #[arg(long)]
    lattice: Lattice,
    #[arg(long, num_args = 2, value_names = ["W", "H"])]
    period: Vec<usize>,
    /// Largest acceptable density, e.g. 3/4; omit for the minimum.
    #[arg(long)]
    target: Option<Density>,
    /// Only patterns invariant under this translation.
    #[arg(long, num_args = 2, value_names = ["DX", "DY"])]
    symmetry: Option<Vec<usize>>,
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// `path:5`, `cycle:12`, `hypercube:4`, `g77`, `torus:sqr:4:4`, `gnp:10:0.5`, `tree:20`, ...
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    read_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_formula(path: &Path) -> Result<Formula> {
    parse_dimacs(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn ids(s: &VertexSet) -> Vec<usize> {
    s.iter().map(|v| v + 1).collect()
}

fn edges_json(g: &Graph) -> Value {
    json!(g.edges().map(|(u, v)| [u + 1, v + 1]).collect::<Vec<_>>())
}

fn ratio(d: &Density) -> String {
    d.to_string()
}

/// Prints either the JSON value or the text lines. A closed pipe ends output quietly.
fn emit(json_mode: bool, value: Value, text: impl FnOnce() -> Vec<String>) {
    let mut out = io::stdout().lock();
    let _ = if json_mode {
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"))
    } else {
        text().iter().try_for_each(|line| writeln!(out, "{line}"))
    };
}

fn cmd_verify(a: &VerifyArgs, json_mode: bool) -> Result<bool> {
    let g = load_graph(&a.graph)?;
    let s = read_detector_set(&read(&a.set)?, g.n()).with_context(|| format!("parsing {}", a.set.display()))?;
    let result = if a.all_pairs { verify_code_all_pairs(&g, &s, a.kind) } else { verify_code(&g, &s, a.kind) };
    let violations: Vec<_> = result.err().unwrap_or_default().iter().map(|v| v.one_based()).collect();
    let mut passed = violations.is_empty();
    let mut props = Vec::new();
    if a.propositions && passed {
        if a.kind != CodeKind::Detic {
            bail!("--propositions applies to DET:IC only");
        }
        props = check_cubic_propositions(&g, &s)?.iter().map(|p| p.one_based()).collect();
        passed = props.is_empty();
    }
    if let Some(path) = &a.dot {
        write(path, &to_dot(&g, Some(&s)))?;
    }
    let value = json!({
        "kind": a.kind,
        "passed": passed,
        "size": s.len(),
        "violations": violations,
        "propositions": props,
    });
    emit(json_mode, value, || {
        let mut out = vec![format!("{} {}: {} detectors", if passed { "PASS" } else { "FAIL" }, a.kind, s.len())];
        out.extend(violations.iter().map(|v| format!("  {v}")));
        out.extend(props.iter().map(|p| format!("  {:?} {:?}", p.proposition, p.vertices)));
        out
    });
    Ok(passed)
}

fn cmd_exists(graph: &Path, json_mode: bool) -> Result<bool> {
    let g = load_graph(graph)?;
    let obstruction = detic_exists(&g).err().map(|o| o.one_based());
    emit(json_mode, json!({ "exists": obstruction.is_none(), "obstruction": obstruction }), || {
        vec![match &obstruction {
            None => "DET:IC exists".to_string(),
            Some(o) => format!("no DET:IC: {o}"),
        }]
    });
    Ok(obstruction.is_none())
}

fn solve_json(r: &SolveResult) -> Value {
    json!({
        "kind": r.kind,
        "status": r.status,
        "size": r.size,
        "density": r.density.as_ref().map(ratio),
        "witness": r.witness.as_ref().map(ids),
        "forced": ids(&r.forced),
        "nodes_explored": r.nodes_explored,
        "obstruction": r.obstruction.map(|o| o.one_based()),
    })
}

fn solve_text(r: &SolveResult) -> Vec<String> {
    let status = serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let mut out = vec![format!("{} {status}", r.kind)];
    if let (Some(size), Some(d)) = (r.size, &r.density) {
        out.push(format!("size {size} density {d}"));
    }
    if let Some(w) = &r.witness {
        out.push(format!("witness {}", ids(w).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")));
    }
    if let Some(o) = r.obstruction {
        out.push(format!("obstruction: {}", o.one_based()));
    }
    out.push(format!("forced {} nodes {}", r.forced.len(), r.nodes_explored));
    out
}

fn cmd_solve(a: &SolveArgs, workers: usize, json_mode: bool) -> Result<bool> {
    if let Some(count) = a.corpus {
        return solve_corpus(count, a.seed, json_mode);
    }
    let path = a.graph.as_ref().expect("clap requires --graph without --corpus");
    let g = load_graph(path)?;
    let opts = SolveOptions { budget: a.budget, workers, ..Default::default() };
    let r = min_code(&g, a.kind, &opts)?;
    if let (Some(out), Some(w)) = (&a.out, &r.witness) {
        write(out, &write_detector_set(w))?;
    }
    emit(json_mode, solve_json(&r), || solve_text(&r));
    Ok(matches!(r.status, SolveStatus::Optimal | SolveStatus::WithinBudget))
}

fn solve_corpus(count: usize, seed: u64, json_mode: bool) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for i in 0..count {
        let n = rng.gen_range(1..=9);
        let p = rng.gen_range(0.15..0.9);
        let g = gnp(n, p, &mut rng);
        for kind in ALL_KINDS {
            let fast = min_code(&g, kind, &SolveOptions { time_limit: None, ..Default::default() })?;
            let slow = min_code_bruteforce(&g, kind)?;
            checked += 1;
            if (fast.status, fast.size) != (slow.status, slow.size) {
                mismatches.push(json!({ "graph": i, "kind": kind, "solver": fast.size, "brute_force": slow.size, "edges": edges_json(&g) }));
            }
        }
    }
    let ok = mismatches.is_empty();
    emit(json_mode, json!({ "seed": seed, "graphs": count, "checks": checked, "mismatches": mismatches }), || {
        let mut out = vec![format!("{checked} checks on {count} graphs (seed {seed}): {} mismatch(es)", mismatches.len())];
        out.extend(mismatches.iter().map(|m| format!("  {m}")));
        out
    });
    Ok(ok)
}

fn cmd_reduce(cnf: &Path, out: Option<&Path>, map: Option<&Path>, json_mode: bool) -> Result<bool> {
    let f = load_formula(cnf)?;
    let inst = reduce_to_detic(&f);
    if let Some(out) = out {
        write(out, &write_graph(&inst.graph))?;
    }
    if let Some(map) = map {
        write(map, &write_map(&inst))?;
    }
    let (n, m, k) = (inst.graph.n(), inst.graph.m(), inst.k);
    emit(
        json_mode,
        json!({ "variables": f.n_vars(), "clauses": f.n_clauses(), "vertices": n, "edges": m, "k": k }),
        || vec![format!("{n} vertices {m} edges K={k}")],
    );
    Ok(true)
}

fn parse_assignment(text: &str, n_vars: usize) -> Result<Vec<bool>> {
    let mut values: Vec<Option<bool>> = vec![None; n_vars];
    for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let lit = tok
            .parse::<i64>()
            .ok()
            .and_then(Literal::from_dimacs)
            .with_context(|| format!("bad literal '{tok}'"))?;
        if lit.var > n_vars {
            bail!("literal {tok} exceeds the {n_vars} variables");
        }
        if values[lit.var - 1].replace(lit.positive).is_some() {
            bail!("variable {} assigned twice", lit.var);
        }
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| v.with_context(|| format!("variable {} is unassigned", i + 1)))
        .collect()
}

fn assignment_literals(a: &[bool]) -> Vec<i64> {
    a.iter().enumerate().map(|(i, &b)| if b { i as i64 + 1 } else { -(i as i64 + 1) }).collect()
}

fn cmd_translate(a: &TranslateArgs, json_mode: bool) -> Result<bool> {
    let f = load_formula(&a.cnf)?;
    let inst = reduce_to_detic(&f);
    if let Some(text) = &a.assignment {
        let assignment = parse_assignment(text, f.n_vars())?;
        let s = assignment_to_code(&inst, &assignment)?;
        let satisfied = f.eval(&assignment);
        let violations: Vec<_> = verify_code(&inst.graph, &s, CodeKind::Detic).err().unwrap_or_default().iter().map(|v| v.one_based()).collect();
        let valid = violations.is_empty();
        if let Some(out) = &a.out {
            write(out, &write_detector_set(&s))?;
        }
        let value = json!({ "satisfied": satisfied, "valid": valid, "size": s.len(), "k": inst.k, "set": ids(&s), "violations": violations });
        emit(json_mode, value, || {
            let mut out = vec![format!(
                "assignment {} the formula; code of size {} (K={}) {}",
                if satisfied { "satisfies" } else { "does not satisfy" },
                s.len(),
                inst.k,
                if valid { "verifies" } else { "fails" }
            )];
            out.extend(violations.iter().map(|v| format!("  {v}")));
            if a.out.is_none() {
                out.push(write_detector_set(&s).trim_end().to_string());
            }
            out
        });
        return Ok(valid && satisfied);
    }
    let path = a.set.as_ref().expect("clap requires --set without --assignment");
    let s = read_detector_set(&read(path)?, inst.graph.n()).with_context(|| format!("parsing {}", path.display()))?;
    let assignment = code_to_assignment(&inst, &s)?;
    let satisfied = f.eval(&assignment);
    let lits = assignment_literals(&assignment);
    emit(json_mode, json!({ "assignment": lits, "satisfied": satisfied }), || {
        vec![
            lits.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "),
            format!("satisfied {satisfied}"),
        ]
    });
    Ok(satisfied)
}

fn cmd_gadget_check(mutations: bool, json_mode: bool) -> Result<bool> {
    let report = verify_gadget_contracts();
    let mut ok = report.all_passed();
    let mut muts = Vec::new();
    if mutations {
        for (gadget, edge, t) in single_edge_mutations() {
            let failed: Vec<String> = verify_gadget_contracts_with(&t).failed().into_iter().map(String::from).collect();
            ok &= !failed.is_empty();
            muts.push(json!({ "gadget": gadget, "edge": edge, "failed": failed }));
        }
    }
    let value = json!({ "contracts": report.results, "mutations": muts });
    emit(json_mode, value, || {
        let mut out: Vec<String> = report
            .results
            .iter()
            .map(|r| format!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.detail))
            .collect();
        for m in &muts {
            out.push(format!("mutation {} {} -> failed {}", m["gadget"], m["edge"], m["failed"]));
        }
        out
    });
    Ok(ok)
}

fn cmd_pattern_verify(path: &Path, json_mode: bool) -> Result<bool> {
    let p: PeriodicPattern = read(path)?.parse().with_context(|| format!("parsing {}", path.display()))?;
    let r = verify_pattern(&p);
    emit(json_mode, serde_json::to_value(&r)?, || {
        let mut out = vec![format!(
            "{} {} period {}x{}: {} cells, density {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.lattice,
            r.period.0,
            r.period.1,
            r.cells,
            r.density
        )];
        out.extend(r.violations.iter().map(|v| format!("  {v}")));
        out
    });
    Ok(r.passed)
}

fn cmd_pattern_search(a: &PatternSearchArgs, workers: usize, json_mode: bool) -> Result<bool> {
    let period = (a.period[0], a.period[1]);
    let opts = PatternSearchOptions {
        symmetry: a.symmetry.as_ref().map(|s| (s[0], s[1])),
        workers,
        time_limit: a.time_limit.map(Duration::from_secs_f64),
    };
    let found = match a.target {
        Some(t) => search_pattern(a.lattice, period, t, &opts)?,
        None => min_pattern(a.lattice, period, &opts)?,
    };
    if let (Some(out), Some(p)) = (&a.out, &found) {
        write(out, &p.to_string())?;
    }
    let report = found.as_ref().map(verify_pattern);
    let value = json!({ "found": found.is_some(), "pattern": found.as_ref().map(|p| p.to_string()), "report": report });
    emit(json_mode, value, || match (&found, &report) {
        (Some(p), Some(r)) => vec![format!("found {} cells, density {}", r.cells, r.density), p.to_string().trim_end().to_string()],
        _ => vec![format!("no passing pattern at period {}x{}", period.0, period.1)],
    });
    Ok(found.is_some())
}

fn build_family(spec: &str, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["gnp", n, p] => {
            let n: usize = n.parse().with_context(|| format!("bad vertex count in '{spec}'"))?;
            let p: f64 = p.parse().with_context(|| format!("bad probability in '{spec}'"))?;
            if !(0.0..=1.0).contains(&p) {
                bail!("probability {p} not in [0, 1]");
            }
            Ok(gnp(n, p, &mut rng))
        }
        ["tree", n] => Ok(tree(n.parse().with_context(|| format!("bad vertex count in '{spec}'"))?, &mut rng)),
        _ => {
            let fam: FamilySpec = spec.parse().map_err(anyhow::Error::msg)?;
            Ok(generate(&fam)?)
        }
    }
}

fn cmd_gen(a: &GenArgs, json_mode: bool) -> Result<bool> {
    let g = build_family(&a.family, a.seed)?;
    let text = write_graph(&g);
    if let Some(dot) = &a.dot {
        write(dot, &to_dot(&g, None))?;
    }
    match &a.out {
        Some(out) => {
            write(out, &text)?;
            emit(json_mode, json!({ "vertices": g.n(), "edges": g.m() }), || vec![format!("{} vertices {} edges", g.n(), g.m())]);
        }
        None if json_mode => emit(true, json!({ "vertices": g.n(), "edges": edges_json(&g) }), Vec::new),
        None => {
            let _ = io::stdout().lock().write_all(text.as_bytes());
        }
    }
    Ok(true)
}

fn cmd_enum_cubic(n: usize, raw: bool, out_dir: Option<&Path>, json_mode: bool) -> Result<bool> {
    let graphs: Vec<Graph> = enumerate_cubic(n, !raw)?.collect();
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, g) in graphs.iter().enumerate() {
            write(&dir.join(format!("cubic-{n}-{}.gr", i + 1)), &write_graph(g))?;
        }
    }
    let feasible = graphs.iter().filter(|g| detic_exists(g).is_ok()).count();
    emit(json_mode, json!({ "n": n, "graphs": graphs.len(), "detic_feasible": feasible }), || {
        vec![format!("{} connected cubic graphs on {n} vertices, {feasible} admit a DET:IC", graphs.len())]
    });
    Ok(true)
}

fn cmd_extremal(n: usize, objective: &str, json_mode: bool) -> Result<bool> {
    let obj = match objective {
        "max" => Objective::Max,
        "min" => Objective::Min,
        other => bail!("objective must be 'max' or 'min', got '{other}'"),
    };
    let r = extremal_cubic(n, obj)?;
    let value = json!({
        "n": n,
        "objective": obj,
        "value": r.value,
        "feasible_graphs": r.feasible_graphs,
        "graph": edges_json(&r.graph),
        "witness": ids(&r.witness),
    });
    emit(json_mode, value, || {
        vec![
            format!("{objective} DET:IC over connected cubic graphs on {n} vertices: {} ({} feasible graphs)", r.value, r.feasible_graphs),
            format!("witness {:?}", ids(&r.witness)),
            write_graph(&r.graph).trim_end().to_string(),
        ]
    });
    Ok(true)
}

fn run(cli: &Cli) -> Result<bool> {
    let (j, workers) = (cli.json, cli.workers.max(1));
    match &cli.command {
        Command::Verify(a) => cmd_verify(a, j),
        Command::Exists { graph } => cmd_exists(graph, j),
        Command::Solve(a) => cmd_solve(a, workers, j),
        Command::Reduce { cnf, out, map } => cmd_reduce(cnf, out.as_deref(), map.as_deref(), j),
        Command::Translate(a) => cmd_translate(a, j),
        Command::GadgetCheck { mutations } => cmd_gadget_check(*mutations, j),
        Command::PatternVerify { pattern } => cmd_pattern_verify(pattern, j),
        Command::PatternSearch(a) => cmd_pattern_search(a, workers, j),
        Command::Gen(a) => cmd_gen(a, j),
        Command::EnumCubic { n, raw, out_dir } => cmd_enum_cubic(*n, *raw, out_dir.as_deref(), j),
        Command::Extremal { n, objective } => cmd_extremal(*n, objective, j),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
