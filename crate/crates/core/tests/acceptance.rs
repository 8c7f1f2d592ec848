//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use detcode::cubic::{enumerate_cubic, is_isomorphic};
use detcode::graph::random::{gnp, tree};
use detcode::grid::{
    ladder_fact_violations, min_pattern, search_pattern, verify_pattern, PatternReport, PatternSearchOptions, PeriodicPattern,
};
use detcode::reduction::{
    assignment_to_code, code_to_assignment, reduce_to_detic, single_edge_mutations, verify_gadget_contracts,
    verify_gadget_contracts_with, Formula,
};
use detcode::solver::{
    extremal_cubic, first_code_of_size, forced_detectors, min_code, min_code_bruteforce, Objective, SolveOptions, SolveStatus,
};
use detcode::verify::{check_cubic_propositions, detic_exists, ALL_KINDS};
use detcode::{generate, verify_code, CodeKind, Density, FamilySpec, Graph, Lattice, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn exact() -> SolveOptions {
    SolveOptions { time_limit: None, ..Default::default() }
}

fn fam(spec: FamilySpec) -> Graph {
    generate(&spec).unwrap()
}

/// Graph on `n` vertices whose edges are the set bits of `mask` over the pairs `u < v`.
fn from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> i & 1 == 1 {
                edges.push((u, v));
            }
            i += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn has_open_twins(g: &Graph) -> bool {
    let nb: Vec<Vec<usize>> = (0..g.n())
        .map(|v| {
            let mut a = g.neighbors(v).to_vec();
            a.sort_unstable();
            a
        })
        .collect();
    (0..g.n()).any(|u| (u + 1..g.n()).any(|v| nb[u] == nb[v]))
}

fn has_triangle(g: &Graph) -> bool {
    g.edges().any(|(u, v)| g.neighbors(u).iter().any(|&w| w != v && g.has_edge(w, v)))
}

fn random_formula(rng: &mut ChaCha8Rng, n_vars: usize, n_clauses: usize) -> Formula {
    let clauses: Vec<[i64; 3]> = (0..n_clauses)
        .map(|_| {
            let mut vars: Vec<i64> = (1..=n_vars as i64).collect();
            for i in 0..3 {
                let j = rng.gen_range(i..vars.len());
                vars.swap(i, j);
            }
            [0, 1, 2].map(|i| if rng.gen_bool(0.5) { vars[i] } else { -vars[i] })
        })
        .collect();
    Formula::from_ints(n_vars, &clauses).unwrap()
}

fn c1_g77() -> Outcome {
    let g = fam(FamilySpec::G77);
    let r = min_code(&g, CodeKind::Detic, &exact()).map_err(|e| e.to_string())?;
    let w = r.witness.clone().ok_or("no witness")?;
    ensure(verify_code(&g, &w, CodeKind::Detic).is_ok(), || "witness does not verify".into())?;
    ensure(r.optimum() == Some(7), || format!("DET:IC = {:?}, expected 7", r.optimum()))?;
    Ok("DET:IC(G77) = 7, witness verifies".into())
}

fn c2_lex_minimality() -> Outcome {
    let g77 = fam(FamilySpec::G77);
    let mut scanned = 0u64;
    let mut below = 0u64;
    let mut at = 0u64;
    for n in 1..=7usize {
        let pairs = n * (n - 1) / 2;
        for mask in 0..1u64 << pairs {
            let m = mask.count_ones() as usize;
            if n == 7 && m > 7 {
                continue;
            }
            scanned += 1;
            let g = from_mask(n, mask);
            if verify_code(&g, &VertexSet::full(n), CodeKind::Detic).is_err() {
                continue;
            }
            if (n, m) < (7, 7) {
                below += 1;
            } else {
                at += 1;
                ensure(is_isomorphic(&g, &g77), || format!("feasible (7,7) graph {:?} is not G77", g.edges().collect::<Vec<_>>()))?;
            }
        }
    }
    ensure(below == 0, || format!("{below} feasible graphs below (7,7)"))?;
    ensure(at > 0, || "no feasible (7,7) graph".into())?;
    Ok(format!("{scanned} labeled graphs scanned; 0 feasible below (7,7); {at} feasible at (7,7), all isomorphic to G77"))
}

fn c3_existence() -> Outcome {
    let check = |g: &Graph| -> Result<(), String> {
        let full = verify_code(g, &VertexSet::full(g.n()), CodeKind::Detic).is_ok();
        ensure(detic_exists(g).is_ok() == full, || format!("discrepancy on {:?}", g.edges().collect::<Vec<_>>()))
    };
    let mut count = 0;
    for n in 1..=6usize {
        for mask in 0..1u64 << (n * (n - 1) / 2) {
            check(&from_mask(n, mask))?;
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut feasible = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.2..0.95);
        let g = gnp(n, p, &mut rng);
        check(&g)?;
        feasible += usize::from(detic_exists(&g).is_ok());
        count += 1;
    }
    Ok(format!("{count} graphs, 0 discrepancies ({feasible} random graphs feasible)"))
}

fn c4_impossibility() -> Outcome {
    let infeasible = |g: &Graph| verify_code(g, &VertexSet::full(g.n()), CodeKind::Detic).is_err() && detic_exists(g).is_err();
    for n in 3..=100 {
        ensure(infeasible(&fam(FamilySpec::Cycle(n))), || format!("C{n} admits a DET:IC"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let n = rng.gen_range(1..=50);
        let t = tree(n, &mut rng);
        ensure(infeasible(&t), || format!("tree on {n} vertices admits a DET:IC"))?;
    }
    Ok("C3..C100 and 200 random trees all infeasible".into())
}

/// Optimal DET:ICs of every feasible connected cubic graph up to 12 vertices.
fn cubic_witnesses() -> &'static Vec<(Graph, VertexSet)> {
    static CELL: std::sync::OnceLock<Vec<(Graph, VertexSet)>> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for n in (4..=12).step_by(2) {
            for g in enumerate_cubic(n, true).unwrap() {
                if verify_code(&g, &VertexSet::full(n), CodeKind::Detic).is_ok() {
                    let w = min_code(&g, CodeKind::Detic, &exact()).unwrap().witness.unwrap();
                    out.push((g, w));
                }
            }
        }
        out
    })
}

fn c5_cubic_characterization() -> Outcome {
    let mut per_n = Vec::new();
    for n in (4..=12).step_by(2) {
        let (mut total, mut feasible) = (0, 0);
        for g in enumerate_cubic(n, true).map_err(|e| e.to_string())? {
            total += 1;
            let ok = verify_code(&g, &VertexSet::full(n), CodeKind::Detic).is_ok();
            let predicted = !has_open_twins(&g) && !has_triangle(&g);
            ensure(ok == predicted, || format!("discrepancy on n={n}: {:?}", g.edges().collect::<Vec<_>>()))?;
            feasible += usize::from(ok);
        }
        per_n.push(format!("n={n}: {feasible}/{total}"));
    }
    cubic_witnesses();
    Ok(format!("feasible/total {}", per_n.join(", ")))
}

fn c6_extremal() -> Outcome {
    let mut vals = HashMap::new();
    for n in [8, 10] {
        for obj in [Objective::Max, Objective::Min] {
            let r = extremal_cubic(n, obj).map_err(|e| e.to_string())?;
            ensure(verify_code(&r.graph, &r.witness, CodeKind::Detic).is_ok(), || "extremal witness fails".into())?;
            vals.insert((n, obj == Objective::Max), r.value);
        }
    }
    let max8 = vals[&(8, true)];
    let max10 = vals[&(10, true)];
    ensure(max8 == 7 && max10 == 9, || format!("max at n=8 is {max8}, at n=10 is {max10}; expected 7 and 9"))?;
    Ok(format!(
        "max 7 (n=8), 9 (n=10); min {} (n=8), {} (n=10)",
        vals[&(8, false)],
        vals[&(10, false)]
    ))
}

fn c7_propositions() -> Outcome {
    let mut pairs: Vec<(Graph, VertexSet)> = cubic_witnesses().clone();
    for n in [8, 10] {
        for obj in [Objective::Max, Objective::Min] {
            let r = extremal_cubic(n, obj).map_err(|e| e.to_string())?;
            pairs.push((r.graph, r.witness));
        }
    }
    let mut counts: HashMap<String, usize> = HashMap::new();
    let mut first = None;
    for (g, s) in &pairs {
        let v = check_cubic_propositions(g, s).map_err(|e| e.to_string())?;
        for pv in &v {
            *counts.entry(format!("{:?}", pv.proposition)).or_default() += 1;
        }
        if first.is_none() && !v.is_empty() {
            first = Some(format!("{:?} at {:?} on {:?} with S = {:?}", v[0].proposition, v[0].vertices, g.edges().collect::<Vec<_>>(), s.to_vec()));
        }
    }
    if let Some(first) = first {
        let mut counts: Vec<_> = counts.into_iter().collect();
        counts.sort();
        return Err(format!("{} pairs checked; violations {counts:?}; first: {first}", pairs.len()));
    }
    Ok(format!("{} optimal (graph, code) pairs, no violations", pairs.len()))
}

fn c8_sizing() -> Outcome {
    let f = Formula::from_ints(5, &[[-1, -2, -4], [1, -3, -5], [2, 4, 5], [-1, 3, 5]]).unwrap();
    let inst = reduce_to_detic(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n_vars in 3..=6 {
        for m in 0..=6 {
            let inst = reduce_to_detic(&random_formula(&mut rng, n_vars, m));
            let want = (10 * n_vars + 8 * m, 14 * n_vars + 12 * m, 9 * n_vars + 8 * m);
            let got = (inst.graph.n(), inst.graph.m(), inst.k);
            ensure(got == want, || format!("N={n_vars}, M={m}: got {got:?}, expected {want:?}"))?;
        }
    }
    let got = (inst.graph.n(), inst.graph.m(), inst.k);
    ensure(got == (82, 118, 47), || {
        format!(
            "example formula: {} vertices, {} edges, K={}; expected 82, 118, K=47 (sizing identities hold for N<=6, M<=6)",
            got.0, got.1, got.2
        )
    })?;
    Ok("example: 82 vertices, 118 edges, K=47; identities hold for N<=6, M<=6".into())
}

fn c9_reduction() -> Outcome {
    let patterns: Vec<[i64; 3]> = (0..8).map(|p| [1, 2, 3].map(|v| if p >> (v - 1) & 1 == 1 { -v } else { v })).collect();
    let mut formulas = vec![Formula::from_ints(3, &[]).unwrap()];
    for a in &patterns {
        formulas.push(Formula::from_ints(3, &[*a]).unwrap());
        for b in &patterns {
            formulas.push(Formula::from_ints(3, &[*a, *b]).unwrap());
        }
    }
    for f in &formulas {
        let inst = reduce_to_detic(f);
        let sat = !f.satisfying_assignments().is_empty();
        let r = min_code(&inst.graph, CodeKind::Detic, &SolveOptions { budget: Some(inst.k), ..exact() }).map_err(|e| e.to_string())?;
        let solved = r.status == SolveStatus::WithinBudget;
        ensure(sat == solved, || format!("{f}: satisfiable={sat}, budgeted solve={:?}", r.status))?;
        let tight = min_code(&inst.graph, CodeKind::Detic, &SolveOptions { budget: Some(inst.k - 1), ..exact() }).unwrap();
        ensure(tight.status == SolveStatus::OverBudget, || format!("{f}: a code below K exists"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut codes_seen = 0;
    for _ in 0..100 {
        let n_vars = rng.gen_range(3..=5);
        let m = rng.gen_range(1..=4);
        let f = random_formula(&mut rng, n_vars, m);
        let inst = reduce_to_detic(&f);
        let g = &inst.graph;
        let forced = forced_detectors(g, CodeKind::Detic).map_err(|e| e.to_string())?;
        let free: Vec<usize> = (0..g.n()).filter(|&v| !forced.contains(v)).collect();
        ensure(free.len() == 2 * n_vars, || format!("{f}: {} undecided vertices after propagation", free.len()))?;
        let mut codes = 0;
        for mask in 0..1u32 << free.len() {
            let mut s = forced.clone();
            for (i, &v) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s.insert(v);
                }
            }
            if s.len() > inst.k || verify_code(g, &s, CodeKind::Detic).is_err() {
                continue;
            }
            codes += 1;
            let a = code_to_assignment(&inst, &s).map_err(|e| e.to_string())?;
            ensure(f.eval(&a), || format!("{f}: decoded assignment {a:?} does not satisfy"))?;
            let back = assignment_to_code(&inst, &a).map_err(|e| e.to_string())?;
            ensure(back == s, || format!("{f}: code -> assignment -> code changed the code"))?;
        }
        let sats = f.satisfying_assignments();
        ensure(codes == sats.len(), || format!("{f}: {codes} codes within K, {} satisfying assignments", sats.len()))?;
        for a in &sats {
            let s = assignment_to_code(&inst, a).map_err(|e| e.to_string())?;
            ensure(verify_code(g, &s, CodeKind::Detic).is_ok() && s.len() == inst.k, || format!("{f}: {a:?} maps to an invalid code"))?;
        }
        codes_seen += codes;
    }
    Ok(format!("{} polarity formulas agree; 100 random formulas, {codes_seen} certificates round-tripped", formulas.len()))
}

fn c10_contracts() -> Outcome {
    let report = verify_gadget_contracts();
    ensure(report.all_passed(), || format!("contracts failed: {:?}", report.failed()))?;
    let mutations = single_edge_mutations();
    let mut behavioral = 0;
    for (gadget, edge, t) in &mutations {
        let r = verify_gadget_contracts_with(t);
        let failed = r.failed();
        ensure(!failed.is_empty(), || format!("deleting {edge:?} from {gadget:?} passes every contract"))?;
        behavioral += usize::from(failed.iter().any(|id| *id != "V1" && *id != "C1"));
    }
    Ok(format!(
        "{} contracts pass; {}/{} single-edge deletions caught ({behavioral} by a behavioral contract)",
        report.results.len(),
        mutations.len(),
        mutations.len()
    ))
}

fn c11_grid_fixtures() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/patterns/v1");
    let cases = [
        ("ladder", Lattice::Ladder, Density::new(3, 4), Density::new(3, 4), None),
        ("hex", Lattice::Hex, Density::new(3, 4), Density::new(12, 17), None),
        ("sqr", Lattice::Sqr, Density::new(11, 18), Density::new(10, 17), Some((6, 1))),
        ("tri", Lattice::Tri, Density::new(8, 15), Density::new(30, 61), Some((5, 1))),
        ("kng", Lattice::Kng, Density::new(1, 2), Density::new(40, 99), None),
    ];
    let start = Instant::now();
    let mut loaded = Vec::new();
    for (stem, lattice, density, lower, _) in &cases {
        let text = fs::read_to_string(dir.join(format!("{stem}.pat"))).map_err(|e| format!("{stem}.pat: {e}"))?;
        let p: PeriodicPattern = text.parse().map_err(|e| format!("{stem}.pat: {e}"))?;
        let report = verify_pattern(&p);
        let stored: PatternReport = serde_json::from_str(&fs::read_to_string(dir.join(format!("{stem}.report.json"))).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(p.lattice() == *lattice && report.passed, || format!("{stem}: fixture fails verification"))?;
        ensure(report.density == *density, || format!("{stem}: density {} != {density}", report.density))?;
        ensure(report == stored, || format!("{stem}: stored report differs"))?;
        // the upper bound should sit at or above the known lower bound; the ladder meets it
        ensure(report.density > *lower || *lattice == Lattice::Ladder, || format!("{stem}: density not above {lower}"))?;
        loaded.push(p.period());
    }
    let reverify = start.elapsed();
    ensure(reverify < Duration::from_secs(10), || format!("re-verification took {reverify:?}"))?;
    for ((stem, lattice, density, _, symmetry), period) in cases.iter().zip(loaded) {
        let opts = PatternSearchOptions { symmetry: *symmetry, workers: 1, time_limit: Some(Duration::from_secs(1800)) };
        let found = search_pattern(*lattice, period, *density, &opts).map_err(|e| e.to_string())?;
        let p = found.ok_or_else(|| format!("{stem}: search found nothing at {period:?}"))?;
        let r = verify_pattern(&p);
        ensure(r.passed && r.density == *density, || format!("{stem}: rediscovered pattern has density {}", r.density))?;
    }
    Ok(format!("5 fixtures re-verified in {reverify:.2?} and rediscovered by search"))
}

fn c12_ladder() -> Outcome {
    let three_quarters = Density::new(3, 4);
    let mut passing = 0;
    let mut optimal = 0;
    for w in 1..=8usize {
        let mut best: Option<Density> = None;
        for mask in 1u32..1 << (2 * w) {
            let cells = (0..2 * w).filter(|&i| mask >> i & 1 == 1).map(|i| (i % w, i / w));
            let p = PeriodicPattern::new(Lattice::Ladder, w, 2, cells).unwrap();
            let r = verify_pattern(&p);
            if !r.passed {
                continue;
            }
            passing += 1;
            ensure(r.density >= three_quarters, || format!("{p} passes with density {}", r.density))?;
            let facts = ladder_fact_violations(&p).map_err(|e| e.to_string())?;
            ensure(facts.is_empty(), || format!("{p} breaks {:?}", facts[0]))?;
            optimal += usize::from(r.density == three_quarters);
            best = Some(best.map_or(r.density, |b| b.min(r.density)));
        }
        let bb = min_pattern(Lattice::Ladder, (w, 2), &PatternSearchOptions::default()).map_err(|e| e.to_string())?;
        let bb = bb.map(|p| verify_pattern(&p).density);
        ensure(bb == best, || format!("w={w}: branch and bound {bb:?}, enumeration {best:?}"))?;
    }
    ensure(optimal > 0, || "no pattern reaches 3/4".into())?;
    Ok(format!("periods w<=8: {passing} passing patterns, none below 3/4, {optimal} at 3/4; ladder facts hold"))
}

fn c13_hypercubes() -> Outcome {
    let q3 = fam(FamilySpec::Hypercube(3));
    let brute = min_code_bruteforce(&q3, CodeKind::Detic).map_err(|e| e.to_string())?;
    let bb = min_code(&q3, CodeKind::Detic, &exact()).map_err(|e| e.to_string())?;
    ensure(brute.optimum().is_some() && brute.optimum() == bb.optimum(), || {
        format!("Q3: brute force {:?}, branch and bound {:?}", brute.optimum(), bb.optimum())
    })?;

    let q4 = fam(FamilySpec::Hypercube(4));
    let solved = min_code(&q4, CodeKind::Detic, &exact()).map_err(|e| e.to_string())?;
    let v = solved.optimum().ok_or("Q4 solver did not finish")?;
    let cap = Instant::now() + Duration::from_secs(120);
    let mut k = q4.n();
    let mut examined = 0u64;
    while k > 0 && first_code_of_size(&q4, CodeKind::Detic, k - 1, &mut examined).is_some() {
        k -= 1;
        ensure(Instant::now() < cap, || format!("descending check timed out at size {k}"))?;
    }
    ensure(k == v, || format!("Q4: solver {v}, descending check {k}"))?;
    Ok(format!("DET:IC(Q3) = {}, DET:IC(Q4) = {v} ({examined} subsets examined)", bb.optimum().unwrap()))
}

fn c14_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut checks = 0;
    for _ in 0..300 {
        let n = rng.gen_range(1..=9);
        let p = rng.gen_range(0.15..0.9);
        let g = gnp(n, p, &mut rng);
        for kind in ALL_KINDS {
            let a = min_code(&g, kind, &exact()).map_err(|e| e.to_string())?;
            let b = min_code_bruteforce(&g, kind).map_err(|e| e.to_string())?;
            ensure(a.status == b.status && a.size == b.size, || {
                format!("{kind} on {:?}: solver {:?}/{:?}, brute force {:?}/{:?}", g.edges().collect::<Vec<_>>(), a.status, a.size, b.status, b.size)
            })?;
            if let Some(w) = &a.witness {
                ensure(verify_code(&g, w, kind).is_ok(), || "solver witness fails".into())?;
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} (graph, kind) pairs agree"))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 14] = [
        (1, "G77 fixture", 1, c1_g77),
        (2, "lexicographic minimality", 60, c2_lex_minimality),
        (3, "existence equivalence", 60, c3_existence),
        (4, "impossibility families", 5, c4_impossibility),
        (5, "cubic characterization", 300, c5_cubic_characterization),
        (6, "cubic extremal values", 300, c6_extremal),
        (7, "cubic propositions", 300, c7_propositions),
        (8, "reduction sizing", 1, c8_sizing),
        (9, "reduction correctness", 120, c9_reduction),
        (10, "gadget contracts", 60, c10_contracts),
        (11, "grid upper bounds", 1800, c11_grid_fixtures),
        (12, "ladder optimality", 300, c12_ladder),
        (13, "hypercube values", 300, c13_hypercubes),
        (14, "solver-oracle equivalence", 180, c14_oracle),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if took > Duration::from_secs(limit) {
                Err(format!("{msg}; took {took:.2?}, limit {limit}s"))
            } else {
                Ok(msg)
            }
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {id:>2} ({name}): {msg} [{took:.2?}]"),
            Err(msg) => {
                println!("FAIL criterion {id:>2} ({name}): {msg} [{took:.2?}]");
                failed.push(id);
            }
        }
    }
    if !failed.is_empty() {
        println!("{} criterion/criteria failed: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
