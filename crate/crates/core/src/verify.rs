//! Exact verification of detection codes.
//!
//! Every kind is a domination requirement plus a pairwise distinguishing rule:
//!
//! | kind  | domination               | pair `u, v` must satisfy                         |
//! |-------|--------------------------|--------------------------------------------------|
//! | IC    | `|N_S[v]| >= 1`          | `N_S[u] != N_S[v]`                               |
//! | LD    | `v in S` or `N_S(v) != ∅` | `u in S` or `v in S` or `N_S(u) != N_S(v)`       |
//! | OLD   | `|N_S(v)| >= 1`          | `N_S(u) != N_S(v)`                               |
//! | DETIC | `|N_S[v]| >= 2`          | `|N_S[u] - N_S[v]| >= 2` or `|N_S[v] - N_S[u]| >= 2` |

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Ic,
    Ld,
    Old,
    Detic,
}

pub const ALL_KINDS: [CodeKind; 4] = [CodeKind::Ic, CodeKind::Ld, CodeKind::Old, CodeKind::Detic];

impl CodeKind {
    pub fn name(self) -> &'static str {
        match self {
            CodeKind::Ic => "ic",
            CodeKind::Ld => "ld",
            CodeKind::Old => "old",
            CodeKind::Detic => "detic",
        }
    }

    /// Detectors required in the sensing neighborhood of every vertex.
    pub fn required_domination(self) -> usize {
        match self {
            CodeKind::Detic => 2,
            _ => 1,
        }
    }

    /// Whether the kind senses through closed (`N[v]`) rather than open neighborhoods.
    ///
    /// LD uses the closed neighborhood for domination and the open one for
    /// distinguishing; this reports the distinguishing side.
    pub fn distinguishes_closed(self) -> bool {
        matches!(self, CodeKind::Ic | CodeKind::Detic)
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ic" => Ok(CodeKind::Ic),
            "ld" => Ok(CodeKind::Ld),
            "old" => Ok(CodeKind::Old),
            "detic" | "det:ic" | "det-ic" => Ok(CodeKind::Detic),
            other => Err(format!("unknown code kind '{other}' (expected ic, ld, old or detic)")),
        }
    }
}

/// A single failed condition. Sorting groups domination failures first,
/// then pairs, each by vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Violation {
    /// `trace` lists the detectors that do sense `vertex`.
    UnderDominated { vertex: usize, level: usize, required: usize, trace: Vec<usize> },
    /// `u_only` / `v_only` are the one-sided differences of the sensed sets.
    Undistinguished { u: usize, v: usize, u_only: Vec<usize>, v_only: Vec<usize> },
}

fn shift(ids: &[usize]) -> Vec<usize> {
    ids.iter().map(|v| v + 1).collect()
}

impl Violation {
    /// The same violation with 1-based ids, matching the file formats.
    pub fn one_based(&self) -> Violation {
        match self {
            Violation::UnderDominated { vertex, level, required, trace } => {
                Violation::UnderDominated { vertex: vertex + 1, level: *level, required: *required, trace: shift(trace) }
            }
            Violation::Undistinguished { u, v, u_only, v_only } => {
                Violation::Undistinguished { u: u + 1, v: v + 1, u_only: shift(u_only), v_only: shift(v_only) }
            }
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnderDominated { vertex, level, required, trace } => {
                write!(f, "under-dominated vertex {vertex}: level {level} < {required}, dominators {trace:?}")
            }
            Violation::Undistinguished { u, v, u_only, v_only } => {
                write!(f, "undistinguished pair ({u}, {v}): only-{u} {u_only:?}, only-{v} {v_only:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("a vertex cannot be compared with itself ({0})")]
    SameVertex(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `|N[v] ∩ S|`.
pub fn domination_level(g: &Graph, s: &VertexSet, v: usize) -> usize {
    usize::from(s.contains(v)) + g.neighbors(v).iter().filter(|&&w| s.contains(w)).count()
}

fn closed_sensed(g: &Graph, s: &VertexSet, v: usize) -> VertexSet {
    let mut out = VertexSet::from_iter_in(g.n(), g.neighbors(v).iter().copied().filter(|&w| s.contains(w)));
    if s.contains(v) {
        out.insert(v);
    }
    out
}

fn open_sensed(g: &Graph, s: &VertexSet, v: usize) -> VertexSet {
    VertexSet::from_iter_in(g.n(), g.neighbors(v).iter().copied().filter(|&w| s.contains(w)))
}

fn check_pair(g: &Graph, u: usize, v: usize) -> Result<(), VerifyError> {
    if u == v {
        return Err(VerifyError::SameVertex(u));
    }
    for x in [u, v] {
        if x >= g.n() {
            return Err(GraphError::InvalidVertex { v: x, n: g.n() }.into());
        }
    }
    Ok(())
}

/// `|N_S[u] △ N_S[v]| >= k`.
pub fn is_k_distinguished(g: &Graph, s: &VertexSet, u: usize, v: usize, k: usize) -> Result<bool, VerifyError> {
    check_pair(g, u, v)?;
    let (a, b) = (closed_sensed(g, s, u), closed_sensed(g, s, v));
    Ok(a.len() + b.len() - 2 * a.intersection_len(&b) >= k)
}

/// `|N_S[u] - N_S[v]| >= 2` or `|N_S[v] - N_S[u]| >= 2`.
pub fn is_sharp2_distinguished(g: &Graph, s: &VertexSet, u: usize, v: usize) -> Result<bool, VerifyError> {
    check_pair(g, u, v)?;
    let (a, b) = (closed_sensed(g, s, u), closed_sensed(g, s, v));
    Ok(sharp2(&a, &b))
}

fn sharp2(a: &VertexSet, b: &VertexSet) -> bool {
    let common = a.intersection_len(b);
    a.len() - common >= 2 || b.len() - common >= 2
}

/// Checks `S` against every condition of `kind` and reports all failures,
/// sorted.
///
/// Once domination holds everywhere, only pairs that can actually collide
/// are examined: pairs within distance 2 for the closed kinds, pairs with a
/// common neighbor for LD and OLD.
pub fn verify_code(g: &Graph, s: &VertexSet, kind: CodeKind) -> Result<(), Vec<Violation>> {
    verify_impl(g, s, kind, true)
}

/// As [`verify_code`] but always examines every pair.
pub fn verify_code_all_pairs(g: &Graph, s: &VertexSet, kind: CodeKind) -> Result<(), Vec<Violation>> {
    verify_impl(g, s, kind, false)
}

fn verify_impl(g: &Graph, s: &VertexSet, kind: CodeKind, shortcut: bool) -> Result<(), Vec<Violation>> {
    let n = g.n();
    debug_assert!(s.iter().all(|v| v < n), "detector set exceeds the vertex range");
    let closed: Vec<VertexSet> = (0..n).map(|v| closed_sensed(g, s, v)).collect();
    let open: Vec<VertexSet> = if kind.distinguishes_closed() {
        Vec::new()
    } else {
        (0..n).map(|v| open_sensed(g, s, v)).collect()
    };

    let mut out = Vec::new();
    for v in 0..n {
        let dom = match kind {
            CodeKind::Old => &open[v],
            _ => &closed[v],
        };
        let required = kind.required_domination();
        if dom.len() < required {
            out.push(Violation::UnderDominated { vertex: v, level: dom.len(), required, trace: dom.to_vec() });
        }
    }

    let pairs: Vec<(usize, usize)> = if shortcut && out.is_empty() {
        candidate_pairs(g, kind)
    } else {
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
    };

    for (u, v) in pairs {
        let ok = match kind {
            CodeKind::Ic => closed[u] != closed[v],
            CodeKind::Detic => sharp2(&closed[u], &closed[v]),
            CodeKind::Ld => s.contains(u) || s.contains(v) || open[u] != open[v],
            CodeKind::Old => open[u] != open[v],
        };
        if !ok {
            let sets = if kind.distinguishes_closed() { &closed } else { &open };
            out.push(Violation::Undistinguished {
                u,
                v,
                u_only: sets[u].difference(&sets[v]).to_vec(),
                v_only: sets[v].difference(&sets[u]).to_vec(),
            });
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        out.sort();
        Err(out)
    }
}

/// Pairs `(u, v)`, `u < v`, whose sensing neighborhoods intersect.
pub(crate) fn candidate_pairs(g: &Graph, kind: CodeKind) -> Vec<(usize, usize)> {
    let mut pairs = BTreeSet::new();
    if kind.distinguishes_closed() {
        for u in 0..g.n() {
            pairs.extend(g.ball2(u).into_iter().filter(|&v| v > u).map(|v| (u, v)));
        }
    } else {
        for w in 0..g.n() {
            let nb = g.neighbors(w);
            for (i, &u) in nb.iter().enumerate() {
                pairs.extend(nb[i + 1..].iter().map(|&v| (u, v)));
            }
        }
    }
    pairs.into_iter().collect()
}

/// Why a graph admits no DET:IC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Obstruction {
    IsolatedVertex { vertex: usize },
    OpenTwins { u: usize, v: usize },
    /// Edge with `deg(u) < t + 3` and `deg(v) < t + 3`, `t` the triangles on it.
    WeakEdge { u: usize, v: usize, triangles: usize },
}

impl Obstruction {
    pub fn one_based(&self) -> Obstruction {
        match *self {
            Obstruction::IsolatedVertex { vertex } => Obstruction::IsolatedVertex { vertex: vertex + 1 },
            Obstruction::OpenTwins { u, v } => Obstruction::OpenTwins { u: u + 1, v: v + 1 },
            Obstruction::WeakEdge { u, v, triangles } => Obstruction::WeakEdge { u: u + 1, v: v + 1, triangles },
        }
    }
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::IsolatedVertex { vertex } => write!(f, "isolated vertex {vertex}"),
            Obstruction::OpenTwins { u, v } => write!(f, "open twins {u} and {v}"),
            Obstruction::WeakEdge { u, v, triangles } => {
                write!(f, "edge ({u}, {v}) lies on {triangles} triangle(s) and neither endpoint has degree >= {}", triangles + 3)
            }
        }
    }
}

/// Decides whether `g` has any DET:IC, without search.
///
/// The graph qualifies iff it has no isolated vertex, no open twins, and
/// every edge `uv` on `t` triangles has an endpoint of degree at least
/// `t + 3`. The first failing witness is returned in that order.
pub fn detic_exists(g: &Graph) -> Result<(), Obstruction> {
    if let Some(vertex) = (0..g.n()).find(|&v| g.degree(v) == 0) {
        return Err(Obstruction::IsolatedVertex { vertex });
    }
    if let Some(t) = g.find_twins().into_iter().find(|t| t.kind == crate::graph::TwinKind::Open) {
        return Err(Obstruction::OpenTwins { u: t.u, v: t.v });
    }
    for (u, v) in g.edges() {
        let t = crate::graph::sorted_intersection_len(g.neighbors(u), g.neighbors(v));
        if g.degree(u) < t + 3 && g.degree(v) < t + 3 {
            return Err(Obstruction::WeakEdge { u, v, triangles: t });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proposition {
    /// A non-detector `x` forces every endpoint of a 3-path from `x`.
    ThirdNeighborhood,
    /// Every 4-cycle holds at least 3 detectors.
    FourCycle,
    /// Non-detectors at distance 2 force both neighborhoods.
    SecondNeighborhood,
    /// On a detector path `xvy`, `dom(x) >= 3` or `dom(y) >= 3`.
    DetectorPath,
    /// Rivals `x, y` with friends `p, q` hold at least 3 detectors.
    Rivals,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PropositionViolation {
    pub proposition: Proposition,
    pub vertices: Vec<usize>,
}

impl PropositionViolation {
    pub fn one_based(&self) -> PropositionViolation {
        PropositionViolation { proposition: self.proposition, vertices: shift(&self.vertices) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicCheckError {
    #[error("graph is not cubic: vertex {vertex} has degree {degree}")]
    NotCubic { vertex: usize, degree: usize },
    #[error("graph admits no DET:IC: {0}")]
    NoDetic(Obstruction),
    #[error("detector set is not a DET:IC ({} violation(s), first: {})", .0.len(), .0[0])]
    NotADetic(Vec<Violation>),
}

/// Machine-checks the structural facts every DET:IC of a cubic graph obeys.
///
/// The result should always be empty; anything else points at a bug in the
/// verifier or the solver that produced `s`.
pub fn check_cubic_propositions(g: &Graph, s: &VertexSet) -> Result<Vec<PropositionViolation>, CubicCheckError> {
    if let Some(vertex) = (0..g.n()).find(|&v| g.degree(v) != 3) {
        return Err(CubicCheckError::NotCubic { vertex, degree: g.degree(vertex) });
    }
    detic_exists(g).map_err(CubicCheckError::NoDetic)?;
    verify_code(g, s, CodeKind::Detic).map_err(CubicCheckError::NotADetic)?;

    let n = g.n();
    let ins = |v: usize| s.contains(v);
    let dom = |v: usize| domination_level(g, s, v);
    let mut out = Vec::new();
    let mut report = |proposition, vertices: Vec<usize>| out.push(PropositionViolation { proposition, vertices });

    for x in (0..n).filter(|&x| !ins(x)) {
        for &u in g.neighbors(x) {
            for &v in g.neighbors(u).iter().filter(|&&v| v != x) {
                for &y in g.neighbors(v).iter().filter(|&&y| y != u && y != x) {
                    if !ins(y) {
                        report(Proposition::ThirdNeighborhood, vec![x, u, v, y]);
                    }
                }
            }
        }
    }

    for (a, b, c, d) in four_cycles(g) {
        if [a, b, c, d].iter().filter(|&&v| ins(v)).count() < 3 {
            report(Proposition::FourCycle, vec![a, b, c, d]);
        }
    }

    for x in 0..n {
        for &v in g.neighbors(x) {
            for &y in g.neighbors(v).iter().filter(|&&y| y > x) {
                if !ins(x) && !ins(y) {
                    let all_in = g.neighbors(x).iter().chain(g.neighbors(y)).all(|&w| ins(w));
                    if !all_in {
                        report(Proposition::SecondNeighborhood, vec![x, v, y]);
                    }
                }
                if ins(x) && ins(v) && ins(y) && dom(x) < 3 && dom(y) < 3 {
                    report(Proposition::DetectorPath, vec![x, v, y]);
                }
            }
        }
    }

    for (x, a, y, b) in four_cycles(g).into_iter().flat_map(|(a, b, c, d)| [(a, b, c, d), (b, c, d, a)]) {
        let friend = |z: usize| *g.neighbors(z).iter().find(|&&w| w != a && w != b).expect("cubic");
        let (p, q) = (friend(x), friend(y));
        if [x, y, p, q].iter().filter(|&&v| ins(v)).count() < 3 {
            report(Proposition::Rivals, vec![x, y, p, q]);
        }
    }

    out.sort();
    out.dedup();
    Ok(out)
}

/// Each 4-cycle once, as `(a, b, c, d)` with `a` smallest and `b < d`.
fn four_cycles(g: &Graph) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..g.n() {
        for &b in g.neighbors(a).iter().filter(|&&b| b > a) {
            for &c in g.neighbors(b).iter().filter(|&&c| c > a) {
                for &d in g.neighbors(c).iter().filter(|&&d| d > b && d != a) {
                    if g.has_edge(d, a) {
                        out.push((a, b, c, d));
                    }
                }
            }
        }
    }
    out
}
