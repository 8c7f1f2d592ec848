//! Minimum codes by branch and bound, with brute-force oracles.
//!
//! Every code condition is turned into a covering constraint: a vertex or pair
//! is satisfied when one of (at most two) alternatives collects enough
//! detector weight. DET:IC pairs have two alternatives, one per one-sided
//! difference; everything else has one. The same engine drives the periodic
//! grid search, where variables are cell orbits with non-unit costs.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cubic::{enumerate_cubic, CubicError};
use crate::graph::Graph;
use crate::verify::{candidate_pairs, detic_exists, verify_code, CodeKind, Obstruction, Violation};
use crate::vertex_set::VertexSet;
use crate::Density;

pub const DEFAULT_MAX_FREE: usize = 64;
pub const BRUTEFORCE_MAX_N: usize = 20;
pub const TIME_LIMIT_ENV: &str = "DETCODE_TIME_LIMIT_SECS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{free} undecided variables after propagation exceed the limit of {limit}")]
    SizeLimit { free: usize, limit: usize },
    #[error("brute force supports at most {BRUTEFORCE_MAX_N} vertices, got {0}")]
    TooLargeForBruteForce(usize),
    #[error("no valid code exists ({} violation(s) on the full vertex set)", .0.len())]
    Infeasible(Vec<Violation>),
    #[error("extremal search needs even n in 8..=12, got {0}")]
    ExtremalRange(usize),
    #[error(transparent)]
    Cubic(#[from] CubicError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    /// Decision mode: stop at the first code of size at most `budget`.
    pub budget: Option<usize>,
    pub workers: usize,
    pub time_limit: Option<Duration>,
    pub max_free: usize,
}

impl Default for SolveOptions {
    /// Single worker, no budget; the time limit comes from `DETCODE_TIME_LIMIT_SECS` if set.
    fn default() -> Self {
        let time_limit = std::env::var(TIME_LIMIT_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|s| *s > 0.0)
            .map(Duration::from_secs_f64);
        SolveOptions { budget: None, workers: 1, time_limit, max_free: DEFAULT_MAX_FREE }
    }
}

impl SolveOptions {
    pub fn with_budget(budget: usize) -> Self {
        SolveOptions { budget: Some(budget), ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// `size` is the minimum.
    Optimal,
    /// Budget mode found a code of `size` at most the budget.
    WithinBudget,
    /// Budget mode proved that no code fits the budget.
    OverBudget,
    /// No code of this kind exists at all.
    Infeasible,
    /// The time limit hit first; `size` is the best code seen, if any.
    TimedOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub kind: CodeKind,
    pub status: SolveStatus,
    /// Size of `witness`.
    pub size: Option<usize>,
    pub witness: Option<VertexSet>,
    /// `size / n`, reduced.
    pub density: Option<Density>,
    pub nodes_explored: u64,
    pub forced: VertexSet,
    /// Set for infeasible DET:IC instances.
    pub obstruction: Option<Obstruction>,
}

impl SolveResult {
    fn new(g: &Graph, kind: CodeKind, status: SolveStatus, witness: Option<VertexSet>, nodes: u64, forced: VertexSet) -> Self {
        let size = witness.as_ref().map(VertexSet::len);
        let density = match (size, g.n()) {
            (Some(k), n) if n > 0 => Some(Density::new(k as u64, n as u64)),
            _ => None,
        };
        SolveResult { kind, status, size, witness, density, nodes_explored: nodes, forced, obstruction: None }
    }

    fn infeasible(g: &Graph, kind: CodeKind) -> Self {
        let mut r = SolveResult::new(g, kind, SolveStatus::Infeasible, None, 0, VertexSet::new(g.n()));
        if kind == CodeKind::Detic {
            r.obstruction = detic_exists(g).err();
        }
        r
    }

    /// The optimum, when the search proved it.
    pub fn optimum(&self) -> Option<usize> {
        (self.status == SolveStatus::Optimal).then_some(self.size).flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Alt {
    pub terms: Vec<(usize, u32)>,
    pub need: u32,
}

impl Alt {
    /// Merges repeated variables into weights.
    pub fn new(vars: impl IntoIterator<Item = usize>, need: u32) -> Alt {
        let mut v: Vec<usize> = vars.into_iter().collect();
        v.sort_unstable();
        let mut terms: Vec<(usize, u32)> = Vec::with_capacity(v.len());
        for x in v {
            match terms.last_mut() {
                Some((y, w)) if *y == x => *w += 1,
                _ => terms.push((x, 1)),
            }
        }
        Alt { terms, need }
    }
}

/// Satisfied when any alternative is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Constraint {
    pub alts: Vec<Alt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct System {
    pub costs: Vec<u64>,
    pub constraints: Vec<Constraint>,
}

fn sorted_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect()
}

fn sorted_sym_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = sorted_difference(a, b);
    out.extend(sorted_difference(b, a));
    out
}

/// Constraint system whose solutions are exactly the valid codes of `kind`.
pub(crate) fn graph_system(g: &Graph, kind: CodeKind) -> System {
    let n = g.n();
    let closed: Vec<Vec<usize>> = (0..n).map(|v| g.closed_list(v)).collect();
    let open = |v: usize| g.neighbors(v);
    let mut constraints = Vec::new();
    for v in 0..n {
        let alt = match kind {
            CodeKind::Old => Alt::new(open(v).iter().copied(), 1),
            _ => Alt::new(closed[v].iter().copied(), kind.required_domination() as u32),
        };
        constraints.push(Constraint { alts: vec![alt] });
    }
    for (u, v) in candidate_pairs(g, kind) {
        let alts = match kind {
            CodeKind::Ic => vec![Alt::new(sorted_sym_difference(&closed[u], &closed[v]), 1)],
            CodeKind::Detic => vec![
                Alt::new(sorted_difference(&closed[u], &closed[v]), 2),
                Alt::new(sorted_difference(&closed[v], &closed[u]), 2),
            ],
            CodeKind::Ld => {
                let mut t = sorted_sym_difference(open(u), open(v));
                t.extend([u, v]);
                t.sort_unstable();
                t.dedup();
                vec![Alt::new(t, 1)]
            }
            CodeKind::Old => vec![Alt::new(sorted_sym_difference(open(u), open(v)), 1)],
        };
        constraints.push(Constraint { alts });
    }
    System { costs: vec![1; n], constraints }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    Free,
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    /// The search space was exhausted (or a budget witness found).
    Complete,
    TimedOut,
}

#[derive(Debug, Clone)]
pub(crate) struct CoreResult {
    pub outcome: Outcome,
    /// Cost and membership of the best solution found.
    pub best: Option<(u64, Vec<bool>)>,
    pub nodes: u64,
    pub forced: Vec<bool>,
}

struct Shared {
    bound: AtomicU64,
    best: Mutex<Option<(u64, Vec<bool>)>>,
    stop: AtomicBool,
    timed_out: AtomicBool,
    nodes: AtomicU64,
}

#[derive(Clone)]
struct Search<'a> {
    sys: &'a System,
    occ: Vec<Vec<(usize, usize, u32)>>,
    val: Vec<Val>,
    in_w: Vec<[u32; 2]>,
    avail_w: Vec<[u32; 2]>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    in_cost: u64,
    stamp: Vec<u32>,
    epoch: u32,
    nodes: u64,
    budget: Option<u64>,
    deadline: Option<Instant>,
}

impl<'a> Search<'a> {
    fn new(sys: &'a System, budget: Option<u64>, deadline: Option<Instant>) -> Self {
        let nv = sys.costs.len();
        let mut occ = vec![Vec::new(); nv];
        let mut avail_w = vec![[0u32; 2]; sys.constraints.len()];
        for (c, con) in sys.constraints.iter().enumerate() {
            for (a, alt) in con.alts.iter().enumerate() {
                for &(v, w) in &alt.terms {
                    occ[v].push((c, a, w));
                    avail_w[c][a] += w;
                }
            }
        }
        Search {
            sys,
            occ,
            val: vec![Val::Free; nv],
            in_w: vec![[0; 2]; sys.constraints.len()],
            avail_w,
            trail: Vec::new(),
            queue: Vec::new(),
            in_cost: 0,
            stamp: vec![0; nv],
            epoch: 0,
            nodes: 0,
            budget,
            deadline,
        }
    }

    fn satisfied(&self, c: usize) -> bool {
        self.sys.constraints[c].alts.iter().enumerate().any(|(a, alt)| self.in_w[c][a] >= alt.need)
    }

    fn live(&self, c: usize, a: usize) -> bool {
        self.in_w[c][a] + self.avail_w[c][a] >= self.sys.constraints[c].alts[a].need
    }

    fn assign(&mut self, v: usize, val: Val) {
        debug_assert_eq!(self.val[v], Val::Free);
        self.val[v] = val;
        self.trail.push(v);
        for &(c, a, w) in &self.occ[v] {
            self.avail_w[c][a] -= w;
            if val == Val::In {
                self.in_w[c][a] += w;
            }
        }
        if val == Val::In {
            self.in_cost += self.sys.costs[v];
        } else {
            self.queue.extend(self.occ[v].iter().map(|&(c, _, _)| c));
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            let val = self.val[v];
            for &(c, a, w) in &self.occ[v] {
                self.avail_w[c][a] += w;
                if val == Val::In {
                    self.in_w[c][a] -= w;
                }
            }
            if val == Val::In {
                self.in_cost -= self.sys.costs[v];
            }
            self.val[v] = Val::Free;
        }
        self.queue.clear();
    }

    /// Unit propagation over queued constraints. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while let Some(c) = self.queue.pop() {
            if self.satisfied(c) {
                continue;
            }
            let n_alts = self.sys.constraints[c].alts.len();
            let mut live = (0..n_alts).filter(|&a| self.live(c, a));
            let Some(a) = live.next() else {
                self.queue.clear();
                return false;
            };
            if live.next().is_some() {
                continue;
            }
            let sys = self.sys;
            let alt = &sys.constraints[c].alts[a];
            let slack = self.in_w[c][a] + self.avail_w[c][a] - alt.need;
            for &(v, w) in &alt.terms {
                if w > slack && self.val[v] == Val::Free {
                    self.assign(v, Val::In);
                }
            }
        }
        true
    }

    fn decide(&mut self, v: usize, val: Val) -> bool {
        self.assign(v, val);
        self.propagate()
    }

    /// Lower bound on extra cost plus the branching variable, or `None` when
    /// every constraint already holds.
    fn scan(&mut self) -> (u64, Option<usize>) {
        let sys = self.sys;
        let mut open: Vec<(usize, usize)> = Vec::new();
        for c in 0..sys.constraints.len() {
            if self.satisfied(c) {
                continue;
            }
            let helpers: usize = sys.constraints[c]
                .alts
                .iter()
                .enumerate()
                .filter(|&(a, _)| self.live(c, a))
                .map(|(_, alt)| alt.terms.iter().filter(|&&(v, _)| self.val[v] == Val::Free).count())
                .sum();
            open.push((helpers, c));
        }
        if open.is_empty() {
            return (0, None);
        }
        open.sort_unstable();
        let pick = open[0].1;
        let var = sys.constraints[pick]
            .alts
            .iter()
            .enumerate()
            .filter(|&(a, _)| self.live(pick, a))
            .flat_map(|(_, alt)| alt.terms.iter().map(|&(v, _)| v))
            .filter(|&v| self.val[v] == Val::Free)
            .min();

        self.epoch += 1;
        let epoch = self.epoch;
        let mut lb = 0u64;
        'outer: for &(_, c) in &open {
            let mut need_cost = u64::MAX;
            for (a, alt) in sys.constraints[c].alts.iter().enumerate() {
                if !self.live(c, a) {
                    continue;
                }
                for &(v, _) in &alt.terms {
                    if self.val[v] == Val::Free && self.stamp[v] == epoch {
                        continue 'outer;
                    }
                }
                let deficit = u64::from(alt.need - self.in_w[c][a]);
                // cheapest cost per unit weight among the helpers
                let (mut bc, mut bw) = (u64::MAX, 1u64);
                for &(v, w) in &alt.terms {
                    if self.val[v] == Val::Free {
                        let (cv, wv) = (sys.costs[v], u64::from(w));
                        if cv * bw < bc.saturating_mul(wv) {
                            (bc, bw) = (cv, wv);
                        }
                    }
                }
                need_cost = need_cost.min((deficit * bc).div_ceil(bw));
            }
            for (a, alt) in sys.constraints[c].alts.iter().enumerate() {
                if self.live(c, a) {
                    for &(v, _) in &alt.terms {
                        self.stamp[v] = epoch;
                    }
                }
            }
            lb += need_cost;
        }
        (lb, var)
    }

    fn record(&self, shared: &Shared) {
        let cost = self.in_cost;
        let mut guard = shared.best.lock().unwrap();
        let better = match &*guard {
            Some((c, _)) => cost < *c,
            None => true,
        };
        if better {
            *guard = Some((cost, self.val.iter().map(|&x| x == Val::In).collect()));
            shared.bound.fetch_min(cost, Ordering::SeqCst);
            if self.budget.is_some_and(|b| cost <= b) {
                shared.stop.store(true, Ordering::SeqCst);
            }
        }
    }

    fn dfs(&mut self, shared: &Shared) {
        if shared.stop.load(Ordering::Relaxed) {
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            shared.timed_out.store(true, Ordering::SeqCst);
            shared.stop.store(true, Ordering::SeqCst);
            return;
        }
        let (lb, var) = self.scan();
        let Some(v) = var else {
            if self.in_cost < shared.bound.load(Ordering::SeqCst) {
                self.record(shared);
            }
            return;
        };
        if self.in_cost + lb >= shared.bound.load(Ordering::SeqCst) {
            return;
        }
        let mark = self.trail.len();
        for val in [Val::In, Val::Out] {
            if self.decide(v, val) {
                self.dfs(shared);
            }
            self.undo_to(mark);
            if shared.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    /// Decision paths to the subtrees at `depth`, in search order.
    fn frontier(&mut self, depth: usize, path: &mut Vec<(usize, Val)>, out: &mut Vec<Vec<(usize, Val)>>) {
        let (_, var) = self.scan();
        let Some(v) = var.filter(|_| depth > 0) else {
            out.push(path.clone());
            return;
        };
        let mark = self.trail.len();
        for val in [Val::In, Val::Out] {
            if self.decide(v, val) {
                path.push((v, val));
                self.frontier(depth - 1, path, out);
                path.pop();
            }
            self.undo_to(mark);
        }
    }
}

/// Root-level propagation: variables in every solution.
pub(crate) fn propagate_root(sys: &System) -> Option<Vec<bool>> {
    let mut s = Search::new(sys, None, None);
    s.queue.extend(0..sys.constraints.len());
    s.propagate().then(|| s.val.iter().map(|&x| x == Val::In).collect())
}

/// Runs the branch and bound. In exact mode `incumbent` must be a known
/// solution (its cost seeds the bound).
pub(crate) fn solve_system(
    sys: &System,
    opts: &SolveOptions,
    incumbent: Option<(u64, Vec<bool>)>,
) -> Result<CoreResult, SolveError> {
    let budget = opts.budget.map(|b| b as u64);
    let deadline = opts.time_limit.map(|d| Instant::now() + d);
    let mut root = Search::new(sys, budget, deadline);
    root.queue.extend(0..sys.constraints.len());
    if !root.propagate() {
        return Ok(CoreResult { outcome: Outcome::Complete, best: None, nodes: 1, forced: vec![false; sys.costs.len()] });
    }
    let forced: Vec<bool> = root.val.iter().map(|&x| x == Val::In).collect();
    let free = root.val.iter().filter(|&&x| x == Val::Free).count();
    if free > opts.max_free {
        return Err(SolveError::SizeLimit { free, limit: opts.max_free });
    }

    let initial_bound = match (budget, &incumbent) {
        (Some(b), _) => b + 1,
        (None, Some((c, _))) => *c,
        (None, None) => u64::MAX,
    };
    let shared = Shared {
        bound: AtomicU64::new(initial_bound),
        best: Mutex::new(if budget.is_some() { None } else { incumbent }),
        stop: AtomicBool::new(false),
        timed_out: AtomicBool::new(false),
        nodes: AtomicU64::new(0),
    };

    if opts.workers <= 1 {
        root.dfs(&shared);
        shared.nodes.fetch_add(root.nodes, Ordering::SeqCst);
    } else {
        let depth = 2.max(usize::BITS as usize - (opts.workers - 1).leading_zeros() as usize + 1);
        let mut tasks = Vec::new();
        root.frontier(depth, &mut Vec::new(), &mut tasks);
        let next = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..opts.workers {
                let (root, shared, tasks, next) = (&root, &shared, &tasks, &next);
                scope.spawn(move || {
                    let mut s = root.clone();
                    loop {
                        let i = next.fetch_add(1, Ordering::SeqCst);
                        if i >= tasks.len() || shared.stop.load(Ordering::Relaxed) {
                            break;
                        }
                        let mark = s.trail.len();
                        if tasks[i].iter().all(|&(v, val)| s.decide(v, val)) {
                            s.dfs(shared);
                        }
                        s.undo_to(mark);
                    }
                    shared.nodes.fetch_add(s.nodes, Ordering::SeqCst);
                });
            }
        });
    }

    let outcome = if shared.timed_out.load(Ordering::SeqCst) { Outcome::TimedOut } else { Outcome::Complete };
    Ok(CoreResult {
        outcome,
        best: shared.best.into_inner().unwrap(),
        nodes: shared.nodes.load(Ordering::SeqCst),
        forced,
    })
}

fn to_set(n: usize, bits: &[bool]) -> VertexSet {
    VertexSet::from_iter_in(n, (0..n).filter(|&v| bits[v]))
}

/// Minimum code of `kind` (or, with a budget, any code within it).
pub fn min_code(g: &Graph, kind: CodeKind, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    let n = g.n();
    let full = VertexSet::full(n);
    if verify_code(g, &full, kind).is_err() {
        return Ok(SolveResult::infeasible(g, kind));
    }
    let sys = graph_system(g, kind);
    let core = solve_system(&sys, opts, Some((n as u64, vec![true; n])))?;
    let forced = to_set(n, &core.forced);
    let witness = core.best.as_ref().map(|(_, bits)| to_set(n, bits));
    if let Some(w) = &witness {
        debug_assert!(verify_code(g, w, kind).is_ok(), "solver produced an invalid code");
    }
    let status = match (core.outcome, opts.budget, &witness) {
        (Outcome::TimedOut, _, _) => SolveStatus::TimedOut,
        (Outcome::Complete, None, _) => SolveStatus::Optimal,
        (Outcome::Complete, Some(_), Some(_)) => SolveStatus::WithinBudget,
        (Outcome::Complete, Some(_), None) => SolveStatus::OverBudget,
    };
    Ok(SolveResult::new(g, kind, status, witness, core.nodes, forced))
}

/// Exhaustive ascending-cardinality scan; the oracle for [`min_code`].
pub fn min_code_bruteforce(g: &Graph, kind: CodeKind) -> Result<SolveResult, SolveError> {
    let n = g.n();
    if n > BRUTEFORCE_MAX_N {
        return Err(SolveError::TooLargeForBruteForce(n));
    }
    if verify_code(g, &VertexSet::full(n), kind).is_err() {
        return Ok(SolveResult::infeasible(g, kind));
    }
    let mut examined = 0u64;
    for k in 0..=n {
        if let Some(s) = first_code_of_size(g, kind, k, &mut examined) {
            return Ok(SolveResult::new(g, kind, SolveStatus::Optimal, Some(s), examined, VertexSet::new(n)));
        }
    }
    unreachable!("the full vertex set is a valid code")
}

/// First code with exactly `k` vertices in colexicographic order, if any.
pub fn first_code_of_size(g: &Graph, kind: CodeKind, k: usize, examined: &mut u64) -> Option<VertexSet> {
    let n = g.n();
    assert!(n <= BRUTEFORCE_MAX_N);
    if k > n {
        return None;
    }
    if k == 0 {
        *examined += 1;
        let s = VertexSet::new(n);
        return verify_code(g, &s, kind).is_ok().then_some(s);
    }
    let limit = 1u32 << n;
    let mut mask: u32 = (1 << k) - 1;
    while mask < limit {
        *examined += 1;
        let s = VertexSet::from_iter_in(n, (0..n).filter(|&v| mask >> v & 1 == 1));
        if verify_code(g, &s, kind).is_ok() {
            return Some(s);
        }
        // next mask with the same popcount
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    None
}

/// Vertices contained in every valid code, by unit propagation.
pub fn forced_detectors(g: &Graph, kind: CodeKind) -> Result<VertexSet, SolveError> {
    if let Err(v) = verify_code(g, &VertexSet::full(g.n()), kind) {
        return Err(SolveError::Infeasible(v));
    }
    let bits = propagate_root(&graph_system(g, kind)).expect("feasible systems propagate cleanly");
    Ok(to_set(g.n(), &bits))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub value: usize,
    pub graph: Graph,
    pub witness: VertexSet,
    /// Non-isomorphic connected cubic graphs that admit a DET:IC.
    pub feasible_graphs: usize,
}

/// Extreme DET:IC value over connected cubic graphs on `n` vertices.
pub fn extremal_cubic(n: usize, objective: Objective) -> Result<ExtremalResult, SolveError> {
    if !(8..=12).contains(&n) || !n.is_multiple_of(2) {
        return Err(SolveError::ExtremalRange(n));
    }
    let mut best: Option<ExtremalResult> = None;
    let mut feasible = 0;
    for g in enumerate_cubic(n, true)? {
        if detic_exists(&g).is_err() {
            continue;
        }
        feasible += 1;
        let r = min_code(&g, CodeKind::Detic, &SolveOptions { time_limit: None, ..Default::default() })?;
        let value = r.optimum().expect("cubic instances are small enough to finish");
        let better = match &best {
            None => true,
            Some(b) => match objective {
                Objective::Min => value < b.value,
                Objective::Max => value > b.value,
            },
        };
        if better {
            best = Some(ExtremalResult { value, graph: g, witness: r.witness.unwrap(), feasible_graphs: 0 });
        }
    }
    let mut best = best.expect("every even n >= 8 has a triangle-free twin-free cubic graph");
    best.feasible_graphs = feasible;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, random::gnp};
    use crate::verify::ALL_KINDS;
    use rand::SeedableRng;

    fn fam(s: &str) -> Graph {
        generate(&s.parse().unwrap()).unwrap()
    }

    fn solve(g: &Graph, kind: CodeKind) -> SolveResult {
        min_code(g, kind, &SolveOptions { time_limit: None, ..Default::default() }).unwrap()
    }

    #[test]
    fn small_examples() {
        let r = solve(&fam("g77"), CodeKind::Detic);
        assert_eq!(r.optimum(), Some(7));
        assert_eq!(r.density, Some(Density::new(1, 1)));
        let r = solve(&fam("cycle:4"), CodeKind::Detic);
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert!(r.obstruction.is_some());
        assert_eq!(solve(&fam("path:3"), CodeKind::Ic).optimum(), Some(2));
        assert_eq!(min_code_bruteforce(&fam("complete:2"), CodeKind::Detic).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn budget_mode() {
        let g = fam("hypercube:3");
        let opt = solve(&g, CodeKind::Detic).optimum().unwrap();
        let ok = min_code(&g, CodeKind::Detic, &SolveOptions::with_budget(opt)).unwrap();
        assert_eq!(ok.status, SolveStatus::WithinBudget);
        assert!(ok.size.unwrap() <= opt);
        let no = min_code(&g, CodeKind::Detic, &SolveOptions::with_budget(opt - 1)).unwrap();
        assert_eq!(no.status, SolveStatus::OverBudget);
        assert!(no.witness.is_none());
    }

    #[test]
    fn forcing_g77_and_soundness_on_cube() {
        assert_eq!(forced_detectors(&fam("g77"), CodeKind::Detic).unwrap().len(), 7);
        let q3 = fam("hypercube:3");
        let forced = forced_detectors(&q3, CodeKind::Detic).unwrap();
        let opt = min_code_bruteforce(&q3, CodeKind::Detic).unwrap().size.unwrap();
        // every optimal code contains the forced set
        for mask in 0u32..256 {
            let s = VertexSet::from_iter_in(8, (0..8).filter(|&v| mask >> v & 1 == 1));
            if s.len() == opt && verify_code(&q3, &s, CodeKind::Detic).is_ok() {
                assert!(forced.is_subset(&s));
            }
        }
        assert!(matches!(forced_detectors(&fam("cycle:5"), CodeKind::Detic), Err(SolveError::Infeasible(_))));
    }

    #[test]
    fn parallel_matches_serial() {
        let g = fam("hypercube:4");
        let serial = solve(&g, CodeKind::Detic);
        let par = min_code(&g, CodeKind::Detic, &SolveOptions { workers: 4, time_limit: None, ..Default::default() }).unwrap();
        assert_eq!(serial.optimum(), par.optimum());
        assert!(verify_code(&g, par.witness.as_ref().unwrap(), CodeKind::Detic).is_ok());
    }

    #[test]
    fn size_limit() {
        let opts = SolveOptions { max_free: 4, time_limit: None, ..Default::default() };
        assert!(matches!(
            min_code(&fam("hypercube:3"), CodeKind::Ic, &opts),
            Err(SolveError::SizeLimit { limit: 4, .. })
        ));
    }

    #[test]
    fn agrees_with_bruteforce_on_random_graphs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for i in 0..60 {
            let g = gnp(3 + i % 6, 0.5, &mut rng);
            for kind in ALL_KINDS {
                let a = solve(&g, kind);
                let b = min_code_bruteforce(&g, kind).unwrap();
                assert_eq!(a.status, b.status, "{kind} on {g:?}");
                assert_eq!(a.size, b.size, "{kind} on {g:?}");
            }
        }
    }

    #[test]
    fn extremal_cubic_values() {
        let max8 = extremal_cubic(8, Objective::Max).unwrap();
        assert_eq!((max8.value, max8.feasible_graphs), (7, 2));
        assert_eq!(extremal_cubic(10, Objective::Max).unwrap().value, 9);
        // both feasible cubic graphs on 8 vertices need 7 detectors
        assert_eq!(extremal_cubic(8, Objective::Min).unwrap().value, 7);
        assert_eq!(extremal_cubic(10, Objective::Min).unwrap().value, 8);
        assert!(matches!(extremal_cubic(14, Objective::Max), Err(SolveError::ExtremalRange(14))));
    }

    #[test]
    fn bruteforce_examples() {
        let c5 = fam("cycle:5");
        assert_eq!(min_code_bruteforce(&c5, CodeKind::Ic).unwrap().size, solve(&c5, CodeKind::Ic).size);
        assert_eq!(min_code_bruteforce(&fam("g77"), CodeKind::Detic).unwrap().optimum(), Some(7));
        assert!(matches!(min_code_bruteforce(&Graph::empty(21), CodeKind::Ic), Err(SolveError::TooLargeForBruteForce(21))));
    }
}

