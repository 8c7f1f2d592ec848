//! 3-SAT to DET:IC.
//!
//! Each variable `x_i` becomes a ten-vertex gadget `F_i` and each clause an
//! eight-vertex gadget `H_j` whose vertex `c_j` is joined to the three literal
//! vertices of the clause. The instance has a DET:IC of size at most
//! `K = 9N + 8M` iff the formula is satisfiable.
//!
//! `F_i` (local ids): `0 x`, `1 x̄`, `2 y`, `3 z`, `4 p`, `5 q`, `6 s`, `7 t`, `8 h`, `9 g`.
//! `y` and `z` differ only in `x` versus `x̄`, so a code must hold a literal.
//!
//! `H_j`: `0 a`, `1 c`, `2 w`, `3 a'`, `4 v`, `5 v'`, `6 r`, `7 w'`.
//! `a` and `c` differ only by `a'` against `v` plus the external neighbors
//! of `c`, so some literal of the clause must be a detector.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::solver::forced_detectors;
use crate::verify::{is_sharp2_distinguished, verify_code, CodeKind, Violation};
use crate::vertex_set::VertexSet;

/// A DIMACS literal: variable `var` (1-based) with its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn from_dimacs(x: i64) -> Option<Literal> {
        (x != 0).then(|| Literal { var: x.unsigned_abs() as usize, positive: x > 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("missing 'p cnf <vars> <clauses>' header")]
    MissingHeader,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("clause {clause} has {width} literals, expected 3")]
    Width { clause: usize, width: usize },
    #[error("clause {clause} repeats variable {var}")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("clause {clause} mentions variable {var} outside 1..={n}")]
    VariableOutOfRange { clause: usize, var: usize, n: usize },
    #[error("header declares {declared} clauses but {found} were given")]
    ClauseCount { declared: usize, found: usize },
}

/// A 3-CNF formula; every clause has three distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Formula {
    n_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl Formula {
    pub fn new(n_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Formula, CnfError> {
        for (j, c) in clauses.iter().enumerate() {
            for (k, lit) in c.iter().enumerate() {
                if lit.var == 0 || lit.var > n_vars {
                    return Err(CnfError::VariableOutOfRange { clause: j + 1, var: lit.var, n: n_vars });
                }
                if c[..k].iter().any(|o| o.var == lit.var) {
                    return Err(CnfError::RepeatedVariable { clause: j + 1, var: lit.var });
                }
            }
        }
        Ok(Formula { n_vars, clauses })
    }

    /// Builds from DIMACS integer triples.
    pub fn from_ints(n_vars: usize, clauses: &[[i64; 3]]) -> Result<Formula, CnfError> {
        let clauses = clauses
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let mut out = [Literal { var: 0, positive: true }; 3];
                for (k, &x) in c.iter().enumerate() {
                    out[k] = Literal::from_dimacs(x).ok_or(CnfError::VariableOutOfRange { clause: j + 1, var: 0, n: n_vars })?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>, CnfError>>()?;
        Formula::new(n_vars, clauses)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// All satisfying assignments, by exhaustive enumeration.
    pub fn satisfying_assignments(&self) -> Vec<Vec<bool>> {
        assert!(self.n_vars < 32, "too many variables to enumerate");
        (0u32..1 << self.n_vars)
            .map(|m| (0..self.n_vars).map(|i| m >> i & 1 == 1).collect::<Vec<bool>>())
            .filter(|a| self.eval(a))
            .collect()
    }
}

impl fmt::Display for Formula {
    /// DIMACS CNF.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.n_vars, self.clauses.len())?;
        for c in &self.clauses {
            writeln!(f, "{} {} {} 0", c[0], c[1], c[2])?;
        }
        Ok(())
    }
}

/// Parses DIMACS CNF restricted to width-3 clauses over distinct variables.
pub fn parse_dimacs(text: &str) -> Result<Formula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            let bad = || CnfError::Syntax { line, msg: "expected 'p cnf <vars> <clauses>'".into() };
            if header.is_some() || toks.len() != 4 || toks[1] != "cnf" {
                return Err(bad());
            }
            header = Some((toks[2].parse().map_err(|_| bad())?, toks[3].parse().map_err(|_| bad())?));
            continue;
        }
        if header.is_none() {
            return Err(CnfError::MissingHeader);
        }
        for tok in trimmed.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| CnfError::Syntax { line, msg: format!("bad literal '{tok}'") })?;
            if x == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(x);
            }
        }
    }
    let (n, m) = header.ok_or(CnfError::MissingHeader)?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != m {
        return Err(CnfError::ClauseCount { declared: m, found: clauses.len() });
    }
    let mut triples = Vec::with_capacity(m);
    for (j, c) in clauses.iter().enumerate() {
        if c.len() != 3 {
            return Err(CnfError::Width { clause: j + 1, width: c.len() });
        }
        triples.push([c[0], c[1], c[2]]);
    }
    Formula::from_ints(n, &triples)
}

impl FromStr for Formula {
    type Err = CnfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_dimacs(s)
    }
}

pub const VARIABLE_ROLES: [&str; 10] = ["x", "xbar", "y", "z", "p", "q", "s", "t", "h", "g"];
pub const CLAUSE_ROLES: [&str; 8] = ["a", "c", "w", "a'", "v", "v'", "r", "w'"];

pub const VARIABLE_EDGES: [(usize, usize); 14] = [
    (0, 2),
    (0, 4),
    (1, 3),
    (1, 5),
    (2, 4),
    (2, 5),
    (2, 6),
    (3, 4),
    (3, 5),
    (3, 6),
    (4, 8),
    (5, 8),
    (6, 7),
    (8, 9),
];

pub const CLAUSE_EDGES: [(usize, usize); 9] = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (4, 5), (2, 6), (2, 7), (4, 6)];

const X: usize = 0;
const XBAR: usize = 1;
const Y: usize = 2;
const Z: usize = 3;
const A: usize = 0;
const C: usize = 1;

/// Internal topology of both gadgets; swappable so contracts can be mutation-tested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetTemplates {
    pub variable: Vec<(usize, usize)>,
    pub clause: Vec<(usize, usize)>,
}

impl Default for GadgetTemplates {
    fn default() -> Self {
        GadgetTemplates { variable: VARIABLE_EDGES.to_vec(), clause: CLAUSE_EDGES.to_vec() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gadget {
    /// 0-based variable index.
    Variable(usize),
    /// 0-based clause index.
    Clause(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRole {
    pub gadget: Gadget,
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionInstance {
    pub formula: Formula,
    pub graph: Graph,
    /// Budget `K = 9N + 8M`.
    pub k: usize,
    /// `[x_i, x̄_i]` per variable.
    pub literal_vertices: Vec<[usize; 2]>,
    /// `c_j` per clause.
    pub clause_vertices: Vec<usize>,
    pub roles: Vec<VertexRole>,
}

impl ReductionInstance {
    pub fn literal_vertex(&self, lit: Literal) -> usize {
        self.literal_vertices[lit.var - 1][usize::from(!lit.positive)]
    }

    /// Vertices of one gadget, in local id order.
    pub fn gadget_vertices(&self, gadget: Gadget) -> Vec<usize> {
        (0..self.graph.n()).filter(|&v| self.roles[v].gadget == gadget).collect()
    }

    /// Every vertex that is not a literal vertex.
    pub fn non_literal_vertices(&self) -> VertexSet {
        let mut s = VertexSet::full(self.graph.n());
        for &[x, xb] in &self.literal_vertices {
            s.remove(x);
            s.remove(xb);
        }
        s
    }
}

pub fn reduce_to_detic(f: &Formula) -> ReductionInstance {
    reduce_with(f, &GadgetTemplates::default())
}

/// Builds the instance; variable gadgets are numbered first, then clause
/// gadgets, each block in input order.
pub fn reduce_with(f: &Formula, t: &GadgetTemplates) -> ReductionInstance {
    let (nv, nc) = (VARIABLE_ROLES.len(), CLAUSE_ROLES.len());
    let n = nv * f.n_vars + nc * f.n_clauses();
    let mut edges = Vec::with_capacity(t.variable.len() * f.n_vars + (t.clause.len() + 3) * f.n_clauses());
    let mut roles = Vec::with_capacity(n);
    let mut literal_vertices = Vec::with_capacity(f.n_vars);
    for i in 0..f.n_vars {
        let base = nv * i;
        edges.extend(t.variable.iter().map(|&(a, b)| (base + a, base + b)));
        roles.extend(VARIABLE_ROLES.iter().map(|r| VertexRole { gadget: Gadget::Variable(i), role: r.to_string() }));
        literal_vertices.push([base + X, base + XBAR]);
    }
    let mut clause_vertices = Vec::with_capacity(f.n_clauses());
    for (j, clause) in f.clauses().iter().enumerate() {
        let base = nv * f.n_vars + nc * j;
        edges.extend(t.clause.iter().map(|&(a, b)| (base + a, base + b)));
        roles.extend(CLAUSE_ROLES.iter().map(|r| VertexRole { gadget: Gadget::Clause(j), role: r.to_string() }));
        for lit in clause {
            edges.push((base + C, literal_vertices[lit.var - 1][usize::from(!lit.positive)]));
        }
        clause_vertices.push(base + C);
    }
    let graph = Graph::from_edges(n, &edges).expect("gadget edges are in range");
    ReductionInstance {
        formula: f.clone(),
        graph,
        k: 9 * f.n_vars + 8 * f.n_clauses(),
        literal_vertices,
        clause_vertices,
        roles,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("assignment has {got} values but the formula has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("detector set is not a DET:IC ({} violation(s), first: {})", .0.len(), .0[0])]
    InvalidCode(Vec<Violation>),
    #[error("detector set has {size} vertices, over the budget K = {k}")]
    OverBudget { size: usize, k: usize },
    #[error("detector set is over a universe of {got} vertices, instance has {expected}")]
    Universe { expected: usize, got: usize },
    #[error("map line {line}: {msg}")]
    Map { line: usize, msg: String },
}

/// Non-literal vertices plus the literal chosen by each variable; size `K`.
pub fn assignment_to_code(inst: &ReductionInstance, assignment: &[bool]) -> Result<VertexSet, ReductionError> {
    let nv = inst.formula.n_vars();
    if assignment.len() != nv {
        return Err(ReductionError::AssignmentLength { expected: nv, got: assignment.len() });
    }
    let mut s = inst.non_literal_vertices();
    for (i, &val) in assignment.iter().enumerate() {
        s.insert(inst.literal_vertices[i][usize::from(!val)]);
    }
    Ok(s)
}

/// Reads `x_i = (x_i ∈ S)` from a valid code within budget.
pub fn code_to_assignment(inst: &ReductionInstance, s: &VertexSet) -> Result<Vec<bool>, ReductionError> {
    if s.universe() != inst.graph.n() {
        return Err(ReductionError::Universe { expected: inst.graph.n(), got: s.universe() });
    }
    if s.len() > inst.k {
        return Err(ReductionError::OverBudget { size: s.len(), k: inst.k });
    }
    verify_code(&inst.graph, s, CodeKind::Detic).map_err(ReductionError::InvalidCode)?;
    Ok(inst.literal_vertices.iter().map(|&[x, _]| s.contains(x)).collect())
}

/// Sidecar map: `k <K>`, then `l <literal> <vertex>` (1-based vertices).
pub fn write_map(inst: &ReductionInstance) -> String {
    let mut out = format!("k {}\n", inst.k);
    for (i, &[x, xb]) in inst.literal_vertices.iter().enumerate() {
        out.push_str(&format!("l {} {}\nl -{} {}\n", i + 1, x + 1, i + 1, xb + 1));
    }
    out
}

/// Parses a sidecar map into `K` and `(literal, 0-based vertex)` pairs.
pub fn read_map(text: &str) -> Result<(usize, Vec<(Literal, usize)>), ReductionError> {
    let mut k = None;
    let mut lits = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: &str| ReductionError::Map { line, msg: msg.to_string() };
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["c", ..] => {}
            ["k", v] => k = Some(v.parse().map_err(|_| err("bad budget"))?),
            ["l", lit, v] => {
                let lit = lit.parse::<i64>().ok().and_then(Literal::from_dimacs).ok_or_else(|| err("bad literal"))?;
                let v: usize = v.parse().map_err(|_| err("bad vertex"))?;
                if v == 0 {
                    return Err(err("vertex ids are 1-based"));
                }
                lits.push((lit, v - 1));
            }
            _ => return Err(err("expected 'k <K>' or 'l <literal> <vertex>'")),
        }
    }
    let k = k.ok_or(ReductionError::Map { line: 0, msg: "missing 'k' line".into() })?;
    Ok((k, lits))
}

/// Outcome of one gadget contract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractReport {
    pub results: Vec<ContractResult>,
}

impl ContractReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.results.iter().filter(|r| !r.passed).map(|r| r.id.as_str()).collect()
    }
}

pub fn verify_gadget_contracts() -> ContractReport {
    verify_gadget_contracts_with(&GadgetTemplates::default())
}

/// Assemblies used by the behavioral contracts: the lone variable, and
/// three-variable formulas in which `x_1` (or `x̄_1`) feeds `k` clauses.
fn assemblies() -> Vec<(usize, String, Formula)> {
    let mut out = vec![(0, "no clauses".to_string(), Formula::from_ints(1, &[]).unwrap())];
    for k in 1..=3 {
        for sign in [1i64, -1] {
            let clauses: Vec<[i64; 3]> = (0..k).map(|j| [sign, if j % 2 == 0 { 2 } else { -2 }, if j < 2 { 3 } else { -3 }]).collect();
            let name = format!("{} literal with {k} clause(s)", if sign > 0 { "positive" } else { "negative" });
            out.push((k, name, Formula::from_ints(3, &clauses).unwrap()));
        }
    }
    out
}

/// Checks the gadget templates against their contracts:
///
/// * `V1` / `C1`: sizes, and three external edges at each `c_j`.
/// * `V2` / `C2`: propagation forces every non-literal vertex, and no literal.
/// * `V3`: without a literal `y, z` fail; with one, every condition inside `F_i` holds.
/// * `C3`: `a_j, c_j` fail exactly when no literal neighbor of `c_j` is a detector.
/// * `V4` / `C4`: the same checks on assemblies where a literal feeds 2 or 3
///   clauses.
///
/// `V2`, `V3`, `C2`, `C3` run on assemblies with at most one attachment.
pub fn verify_gadget_contracts_with(t: &GadgetTemplates) -> ContractReport {
    let mut results = Vec::new();
    let mut push = |id: &str, passed: bool, detail: String| {
        results.push(ContractResult { id: id.to_string(), passed, detail });
    };

    let fsize = Graph::from_edges(VARIABLE_ROLES.len(), &t.variable);
    let v1 = matches!(&fsize, Ok(g) if g.m() == 14) && t.variable.len() == 14;
    push("V1", v1, format!("F_i: {} vertices, {} edges", VARIABLE_ROLES.len(), t.variable.len()));

    let hsize = Graph::from_edges(CLAUSE_ROLES.len(), &t.clause);
    let probe = reduce_with(&Formula::from_ints(3, &[[1, 2, 3]]).unwrap(), t);
    let c = probe.clause_vertices[0];
    let stubs = probe.graph.neighbors(c).iter().filter(|&&w| !matches!(probe.roles[w].gadget, Gadget::Clause(_))).count();
    let c1 = matches!(&hsize, Ok(g) if g.m() == 9) && t.clause.len() == 9 && stubs == 3;
    push("C1", c1, format!("H_j: {} vertices, {} edges, {stubs} external at c", CLAUSE_ROLES.len(), t.clause.len()));

    if fsize.is_err() || hsize.is_err() {
        for id in ["V2", "V3", "V4", "C2", "C3", "C4"] {
            push(id, false, "template edges out of range".into());
        }
        return ContractReport { results };
    }

    // base assemblies: the lone variable for F_i, one clause for H_j
    let mut base = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    let mut extra = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for (attachments, name, f) in assemblies() {
        let inst = reduce_with(&f, t);
        let errs = if attachments <= 1 { &mut base } else { &mut extra };
        let [v2, v3, c2, c3] = errs;
        check_forcing(&inst, v2, c2, &name);
        check_variable_gadget(&inst, v3, &name);
        check_clause_gadget(&inst, c3, &name);
    }
    let first = |errs: &[String]| errs.first().cloned().unwrap_or_else(|| "ok".into());
    push("V2", base[0].is_empty(), first(&base[0]));
    push("V3", base[1].is_empty(), first(&base[1]));
    push("C2", base[2].is_empty(), first(&base[2]));
    push("C3", base[3].is_empty(), first(&base[3]));
    push("V4", extra[0].is_empty() && extra[1].is_empty(), first(&[extra[0].clone(), extra[1].clone()].concat()));
    push("C4", extra[2].is_empty() && extra[3].is_empty(), first(&[extra[2].clone(), extra[3].clone()].concat()));
    ContractReport { results }
}

fn check_forcing(inst: &ReductionInstance, v_errs: &mut Vec<String>, c_errs: &mut Vec<String>, name: &str) {
    let forced = match forced_detectors(&inst.graph, CodeKind::Detic) {
        Ok(f) => f,
        Err(e) => {
            v_errs.push(format!("{name}: {e}"));
            return;
        }
    };
    for v in 0..inst.graph.n() {
        let role = &inst.roles[v];
        let literal = matches!(role.gadget, Gadget::Variable(_)) && (role.role == "x" || role.role == "xbar");
        if forced.contains(v) == literal {
            let errs = if matches!(role.gadget, Gadget::Variable(_)) { &mut *v_errs } else { &mut *c_errs };
            let what = if literal { "literal forced" } else { "not forced" };
            errs.push(format!("{name}: {:?} {} {what}", role.gadget, role.role));
        }
    }
}

/// Conditions whose vertices all lie in `gadget`.
fn internal_violations(inst: &ReductionInstance, s: &VertexSet, gadget: Gadget) -> Vec<Violation> {
    let inside = |v: usize| inst.roles[v].gadget == gadget;
    match verify_code(&inst.graph, s, CodeKind::Detic) {
        Ok(()) => Vec::new(),
        Err(vs) => vs
            .into_iter()
            .filter(|v| match v {
                Violation::UnderDominated { vertex, .. } => inside(*vertex),
                Violation::Undistinguished { u, v, .. } => inside(*u) && inside(*v),
            })
            .collect(),
    }
}

fn check_variable_gadget(inst: &ReductionInstance, errs: &mut Vec<String>, name: &str) {
    let n = inst.graph.n();
    let g0 = Gadget::Variable(0);
    let base = inst.gadget_vertices(g0)[0];
    let (x, xb, y, z) = (base + X, base + XBAR, base + Y, base + Z);
    let mut neither = VertexSet::full(n);
    neither.remove(x);
    neither.remove(xb);
    if is_sharp2_distinguished(&inst.graph, &neither, y, z).unwrap_or(true) {
        errs.push(format!("{name}: y, z distinguished without a literal"));
    }
    for lit in [x, xb] {
        let mut s = neither.clone();
        s.insert(lit);
        let bad = internal_violations(inst, &s, g0);
        if let Some(v) = bad.first() {
            errs.push(format!("{name}: with literal {lit} inside F fails: {v}"));
        }
    }
}

fn check_clause_gadget(inst: &ReductionInstance, errs: &mut Vec<String>, name: &str) {
    let n = inst.graph.n();
    for (j, &c) in inst.clause_vertices.iter().enumerate() {
        let a = inst.gadget_vertices(Gadget::Clause(j))[A];
        debug_assert_eq!(inst.gadget_vertices(Gadget::Clause(j))[C], c);
        let ext: Vec<usize> = inst.formula.clauses()[j].iter().map(|&l| inst.literal_vertex(l)).collect();
        for mask in 0u8..8 {
            let mut s = VertexSet::full(n);
            for (b, &e) in ext.iter().enumerate() {
                if mask >> b & 1 == 0 {
                    s.remove(e);
                }
            }
            let distinguished = is_sharp2_distinguished(&inst.graph, &s, a, c).unwrap_or(false);
            if distinguished != (mask != 0) {
                errs.push(format!("{name}: clause {j}, detector literals {mask:03b}: a, c distinguished = {distinguished}"));
            }
            if mask != 0 {
                if let Some(v) = internal_violations(inst, &s, Gadget::Clause(j)).first() {
                    errs.push(format!("{name}: clause {j}, detector literals {mask:03b}: {v}"));
                }
            }
        }
    }
}

/// Templates with one internal edge removed, for every edge of both gadgets.
pub fn single_edge_mutations() -> Vec<(Gadget, (usize, usize), GadgetTemplates)> {
    let base = GadgetTemplates::default();
    let mut out = Vec::new();
    for i in 0..base.variable.len() {
        let mut t = base.clone();
        let e = t.variable.remove(i);
        out.push((Gadget::Variable(0), e, t));
    }
    for i in 0..base.clause.len() {
        let mut t = base.clone();
        let e = t.clause.remove(i);
        out.push((Gadget::Clause(0), e, t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{min_code, SolveOptions, SolveStatus};

    fn example() -> Formula {
        Formula::from_ints(5, &[[-1, -2, -4], [1, -3, -5], [2, 4, 5], [-1, 3, 5]]).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = parse_dimacs("p cnf 3 1\n1 -2 3 0\n").unwrap();
        assert_eq!((f.n_vars(), f.n_clauses()), (3, 1));
        assert_eq!(parse_dimacs("p cnf 3 1\n1 1 2 0\n"), Err(CnfError::RepeatedVariable { clause: 1, var: 1 }));
        assert_eq!(parse_dimacs("p cnf 3 1\n1 2 0\n"), Err(CnfError::Width { clause: 1, width: 2 }));
        assert_eq!(parse_dimacs("p cnf 3 2\n1 2 3 0\n"), Err(CnfError::ClauseCount { declared: 2, found: 1 }));
        assert_eq!(parse_dimacs("1 2 3 0\n"), Err(CnfError::MissingHeader));
        let g = parse_dimacs(&example().to_string()).unwrap();
        assert_eq!(g, example());
    }

    #[test]
    fn sizing() {
        let inst = reduce_to_detic(&example());
        assert_eq!((inst.graph.n(), inst.graph.m(), inst.k), (82, 118, 77));
        let one = reduce_to_detic(&Formula::from_ints(1, &[]).unwrap());
        assert_eq!((one.graph.n(), one.graph.m(), one.k), (10, 14, 9));
        let three = reduce_to_detic(&Formula::from_ints(3, &[[1, 2, 3]]).unwrap());
        assert_eq!((three.graph.n(), three.graph.m(), three.k), (38, 54, 35));
        for &c in &inst.clause_vertices {
            let ext = inst.graph.neighbors(c).iter().filter(|&&w| w < 50).count();
            assert_eq!(ext, 3);
        }
    }

    #[test]
    fn certificates() {
        let f = example();
        let inst = reduce_to_detic(&f);
        let a = vec![false, true, false, true, true];
        assert!(f.eval(&a));
        let s = assignment_to_code(&inst, &a).unwrap();
        assert_eq!(s.len(), inst.k);
        assert_eq!(verify_code(&inst.graph, &s, CodeKind::Detic), Ok(()));
        assert_eq!(code_to_assignment(&inst, &s).unwrap(), a);
        assert!(matches!(
            code_to_assignment(&inst, &VertexSet::full(82)),
            Err(ReductionError::OverBudget { size: 82, k: 77 })
        ));
        assert!(matches!(assignment_to_code(&inst, &[true]), Err(ReductionError::AssignmentLength { .. })));
    }

    #[test]
    fn unsatisfying_assignment_breaks_its_clause() {
        let f = Formula::from_ints(3, &[[1, 2, 3]]).unwrap();
        let inst = reduce_to_detic(&f);
        let s = assignment_to_code(&inst, &[false, false, false]).unwrap();
        let errs = verify_code(&inst.graph, &s, CodeKind::Detic).unwrap_err();
        let (a, c) = (30, inst.clause_vertices[0]);
        assert!(errs.iter().any(|e| matches!(e, Violation::Undistinguished { u, v, .. } if (*u, *v) == (a, c))));
    }

    #[test]
    fn forcing_leaves_only_literals() {
        let inst = reduce_to_detic(&example());
        let forced = forced_detectors(&inst.graph, CodeKind::Detic).unwrap();
        assert_eq!(forced, inst.non_literal_vertices());
        assert_eq!(forced.len(), 8 * 5 + 8 * 4);
    }

    #[test]
    fn solver_finds_certificate() {
        let f = Formula::from_ints(2, &[]).unwrap();
        let f2 = Formula::from_ints(3, &[[1, -2, 3]]).unwrap();
        for f in [f, f2] {
            let inst = reduce_to_detic(&f);
            let r = min_code(&inst.graph, CodeKind::Detic, &SolveOptions::with_budget(inst.k)).unwrap();
            assert_eq!(r.status, SolveStatus::WithinBudget);
            let a = code_to_assignment(&inst, r.witness.as_ref().unwrap()).unwrap();
            assert!(f.eval(&a));
        }
    }

    #[test]
    fn map_round_trip() {
        let inst = reduce_to_detic(&example());
        let (k, lits) = read_map(&write_map(&inst)).unwrap();
        assert_eq!(k, 77);
        assert_eq!(lits.len(), 10);
        for (lit, v) in lits {
            assert_eq!(inst.literal_vertex(lit), v);
        }
    }

    #[test]
    fn contracts_pass() {
        let r = verify_gadget_contracts();
        assert!(r.all_passed(), "{:#?}", r.results);
    }
}
