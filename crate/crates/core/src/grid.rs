//! Periodic DET:ICs on the infinite ladder and the planar grids.
//!
//! A pattern is a `w × h` tile of detector cells; the infinite detector set
//! holds `(x, y)` iff `(x mod w, y mod h)` is a cell. Verification walks the
//! infinite lattice around one period and looks membership up modulo the
//! tile, so short wraparound cycles of a finite torus never appear.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{generate, FamilySpec, GraphError};
use crate::lattice::Lattice;
use crate::solver::{self, min_code, Alt, Constraint, Outcome, SolveError, SolveOptions, SolveResult, System};
use crate::verify::CodeKind;
use crate::Density;

pub type Cell = (i64, i64);

/// Largest tile searched without a symmetry restriction.
pub const MAX_EXHAUSTIVE_CELLS: usize = 24;
/// Largest number of cell orbits searched with one.
pub const MAX_ORBITS: usize = 64;
pub const MAX_TORUS_CELLS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("period ({w}, {h}) is invalid for {lattice}: {why}")]
    BadPeriod { lattice: Lattice, w: usize, h: usize, why: &'static str },
    #[error("cell ({x}, {y}) lies outside the {w}x{h} tile")]
    CellOutOfRange { x: usize, y: usize, w: usize, h: usize },
    #[error("a pattern needs at least one detector cell")]
    Empty,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{cells} cells exceed the exhaustive limit of {MAX_EXHAUSTIVE_CELLS}; use a symmetry restriction")]
    DomainTooLarge { cells: usize },
    #[error("{orbits} orbits exceed the limit of {MAX_ORBITS}")]
    TooManyOrbits { orbits: usize },
    #[error("torus has {cells} vertices, more than {MAX_TORUS_CELLS}")]
    TorusTooLarge { cells: usize },
    #[error("search hit the time limit before deciding the budget")]
    TimedOut,
    #[error("operation needs the LADDER lattice, got {0}")]
    NotLadder(Lattice),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Detector cells in a `w × h` tile of a lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicPattern {
    lattice: Lattice,
    w: usize,
    h: usize,
    cells: BTreeSet<(usize, usize)>,
}

fn check_period(lattice: Lattice, w: usize, h: usize) -> Result<(), PatternError> {
    let bad = |why| Err(PatternError::BadPeriod { lattice, w, h, why });
    if w == 0 || h == 0 {
        return bad("dimensions must be positive");
    }
    match lattice {
        Lattice::Ladder if h != 2 => bad("the ladder has height 2"),
        Lattice::Hex if !w.is_multiple_of(2) => bad("HEX needs an even width"),
        _ => Ok(()),
    }
}

impl PeriodicPattern {
    pub fn new(lattice: Lattice, w: usize, h: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, PatternError> {
        check_period(lattice, w, h)?;
        let cells: BTreeSet<(usize, usize)> = cells.into_iter().collect();
        if let Some(&(x, y)) = cells.iter().find(|&&(x, y)| x >= w || y >= h) {
            return Err(PatternError::CellOutOfRange { x, y, w, h });
        }
        if cells.is_empty() {
            return Err(PatternError::Empty);
        }
        Ok(PeriodicPattern { lattice, w, h, cells })
    }

    pub fn full(lattice: Lattice, w: usize, h: usize) -> Result<Self, PatternError> {
        Self::new(lattice, w, h, (0..h).flat_map(|y| (0..w).map(move |x| (x, y))))
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn period(&self) -> (usize, usize) {
        (self.w, self.h)
    }

    pub fn cells(&self) -> &BTreeSet<(usize, usize)> {
        &self.cells
    }

    /// Membership of an arbitrary lattice point in the infinite set.
    pub fn contains(&self, (x, y): Cell) -> bool {
        self.cells.contains(&(x.rem_euclid(self.w as i64) as usize, y.rem_euclid(self.h as i64) as usize))
    }

    /// Translate of the pattern by `(dx, dy)`.
    pub fn shifted(&self, dx: i64, dy: i64) -> PeriodicPattern {
        let (w, h) = (self.w as i64, self.h as i64);
        let cells = self.cells.iter().map(|&(x, y)| ((x as i64 + dx).rem_euclid(w) as usize, (y as i64 + dy).rem_euclid(h) as usize));
        PeriodicPattern::new(self.lattice, self.w, self.h, cells).expect("shift keeps cells in range")
    }

    /// The same infinite set described by a `kx × ky` block of tiles.
    pub fn tiled(&self, kx: usize, ky: usize) -> Result<PeriodicPattern, PatternError> {
        let (w, h) = (self.w * kx, self.h * ky);
        let cells = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).filter(|&(x, y)| self.contains((x as i64, y as i64)));
        PeriodicPattern::new(self.lattice, w, h, cells)
    }

    /// Points whose neighborhoods cover every distinct local situation.
    fn sweep_domain(&self) -> (usize, usize) {
        // brick-wall parity repeats with period 2 vertically
        let h = if self.lattice == Lattice::Hex && self.h % 2 == 1 { 2 * self.h } else { self.h };
        (self.w, h)
    }
}

impl fmt::Display for PeriodicPattern {
    /// The pattern file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lattice {}", self.lattice)?;
        writeln!(f, "period {} {}", self.w, self.h)?;
        for &(x, y) in &self.cells {
            writeln!(f, "cell {x} {y}")?;
        }
        Ok(())
    }
}

impl FromStr for PeriodicPattern {
    type Err = PatternError;

    /// Parses `lattice NAME`, `period w h`, then `cell x y` lines; `#` starts a comment.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lattice = None;
        let mut period = None;
        let mut cells = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            let syntax = |msg: String| PatternError::Syntax { line, msg };
            let num = |t: &str| t.parse::<usize>().map_err(|_| syntax(format!("bad number '{t}'")));
            match toks.as_slice() {
                [] => {}
                ["lattice", name] => lattice = Some(name.parse::<Lattice>().map_err(syntax)?),
                ["period", w, h] => period = Some((num(w)?, num(h)?)),
                ["cell", x, y] => {
                    if lattice.is_none() || period.is_none() {
                        return Err(syntax("'cell' before 'lattice' and 'period'".into()));
                    }
                    cells.push((num(x)?, num(y)?));
                }
                _ => return Err(syntax(format!("unrecognised line '{}'", content.trim()))),
            }
        }
        let lattice = lattice.ok_or(PatternError::Syntax { line: 0, msg: "missing 'lattice' line".into() })?;
        let (w, h) = period.ok_or(PatternError::Syntax { line: 0, msg: "missing 'period' line".into() })?;
        PeriodicPattern::new(lattice, w, h, cells)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GridViolation {
    UnderDominated { cell: Cell, level: usize },
    Undistinguished { u: Cell, v: Cell, u_only: Vec<Cell>, v_only: Vec<Cell> },
}

impl fmt::Display for GridViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridViolation::UnderDominated { cell, level } => write!(f, "cell {cell:?} is {level}-dominated"),
            GridViolation::Undistinguished { u, v, u_only, v_only } => {
                write!(f, "cells {u:?} and {v:?} undistinguished: only-u {u_only:?}, only-v {v_only:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternReport {
    pub lattice: Lattice,
    pub period: (usize, usize),
    pub cells: usize,
    pub passed: bool,
    pub density: Density,
    pub violations: Vec<GridViolation>,
}

fn closed_nbhd(lattice: Lattice, u: Cell) -> Vec<Cell> {
    let mut out = lattice.neighbors(u.0, u.1);
    out.push(u);
    out.sort_unstable();
    out
}

/// Points at distance 1 or 2 from `u` in the infinite lattice.
fn ball2(lattice: Lattice, u: Cell) -> Vec<Cell> {
    let mut seen = HashSet::from([u]);
    let mut queue = VecDeque::from([(u, 0)]);
    let mut out = Vec::new();
    while let Some((p, d)) = queue.pop_front() {
        if d == 2 {
            continue;
        }
        for q in lattice.neighbors(p.0, p.1) {
            if seen.insert(q) {
                out.push(q);
                queue.push_back((q, d + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

fn minus(a: &[Cell], b: &[Cell]) -> Vec<Cell> {
    a.iter().copied().filter(|p| b.binary_search(p).is_err()).collect()
}

/// Every `(u, v)` pair the DET:IC conditions look at, `u` in the sweep domain.
fn local_pairs(lattice: Lattice, (dw, dh): (usize, usize)) -> Vec<(Cell, Cell)> {
    let in_domain = |p: Cell| (0..dw as i64).contains(&p.0) && (0..dh as i64).contains(&p.1);
    let mut out = Vec::new();
    for y in 0..dh as i64 {
        for x in 0..dw as i64 {
            let u = (x, y);
            for v in ball2(lattice, u) {
                if !in_domain(v) || u < v {
                    out.push((u, v));
                }
            }
        }
    }
    out
}

/// Exact DET:IC check of the infinite periodic set.
pub fn verify_pattern(p: &PeriodicPattern) -> PatternReport {
    let domain = p.sweep_domain();
    let lat = p.lattice;
    let mut violations = Vec::new();
    let sensed = |u: Cell| -> Vec<Cell> { closed_nbhd(lat, u).into_iter().filter(|&q| p.contains(q)).collect() };
    for y in 0..domain.1 as i64 {
        for x in 0..domain.0 as i64 {
            let level = sensed((x, y)).len();
            if level < 2 {
                violations.push(GridViolation::UnderDominated { cell: (x, y), level });
            }
        }
    }
    for (u, v) in local_pairs(lat, domain) {
        let (a, b) = (sensed(u), sensed(v));
        let (u_only, v_only) = (minus(&a, &b), minus(&b, &a));
        if u_only.len() < 2 && v_only.len() < 2 {
            violations.push(GridViolation::Undistinguished { u, v, u_only, v_only });
        }
    }
    violations.sort();
    PatternReport {
        lattice: lat,
        period: p.period(),
        cells: p.cells.len(),
        passed: violations.is_empty(),
        density: pattern_density(p),
        violations,
    }
}

pub fn pattern_density(p: &PeriodicPattern) -> Density {
    Density::new(p.cells.len() as u64, (p.w * p.h) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PatternSearchOptions {
    /// Restrict to patterns invariant under this translation of the tile.
    pub symmetry: Option<(usize, usize)>,
    pub workers: usize,
    pub time_limit: Option<Duration>,
}

/// Orbits of tile cells under the translation; `orbit[y * w + x]` is the orbit id.
fn orbits(w: usize, h: usize, sym: Option<(usize, usize)>) -> (Vec<usize>, Vec<u64>) {
    let mut orbit = vec![usize::MAX; w * h];
    let mut sizes = Vec::new();
    for start in 0..w * h {
        if orbit[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut size = 0;
        let (mut x, mut y) = (start % w, start / w);
        while orbit[y * w + x] == usize::MAX {
            orbit[y * w + x] = id;
            size += 1;
            match sym {
                Some((dx, dy)) => {
                    x = (x + dx) % w;
                    y = (y + dy) % h;
                }
                None => break,
            }
        }
        sizes.push(size);
    }
    (orbit, sizes)
}

fn pattern_system(lattice: Lattice, w: usize, h: usize, sym: Option<(usize, usize)>) -> (System, Vec<usize>) {
    let (orbit, costs) = orbits(w, h, sym);
    let var = |(x, y): Cell| orbit[y.rem_euclid(h as i64) as usize * w + x.rem_euclid(w as i64) as usize];
    let probe = PeriodicPattern { lattice, w, h, cells: BTreeSet::new() };
    let domain = probe.sweep_domain();
    let mut seen: HashSet<Vec<(Vec<(usize, u32)>, u32)>> = HashSet::new();
    let mut constraints = Vec::new();
    let mut add = |alts: Vec<Alt>| {
        let mut key: Vec<(Vec<(usize, u32)>, u32)> = alts.iter().map(|a| (a.terms.clone(), a.need)).collect();
        key.sort();
        if seen.insert(key) {
            constraints.push(Constraint { alts });
        }
    };
    for y in 0..domain.1 as i64 {
        for x in 0..domain.0 as i64 {
            add(vec![Alt::new(closed_nbhd(lattice, (x, y)).into_iter().map(var), 2)]);
        }
    }
    for (u, v) in local_pairs(lattice, domain) {
        let (a, b) = (closed_nbhd(lattice, u), closed_nbhd(lattice, v));
        add(vec![Alt::new(minus(&a, &b).into_iter().map(var), 2), Alt::new(minus(&b, &a).into_iter().map(var), 2)]);
    }
    (System { costs, constraints }, orbit)
}

fn run_search(
    lattice: Lattice,
    (w, h): (usize, usize),
    budget: Option<usize>,
    opts: &PatternSearchOptions,
) -> Result<Option<PeriodicPattern>, PatternError> {
    check_period(lattice, w, h)?;
    if opts.symmetry.is_none() && w * h > MAX_EXHAUSTIVE_CELLS {
        return Err(PatternError::DomainTooLarge { cells: w * h });
    }
    let full = PeriodicPattern::full(lattice, w, h)?;
    if !verify_pattern(&full).passed {
        return Ok(None);
    }
    let (sys, orbit) = pattern_system(lattice, w, h, opts.symmetry);
    if sys.costs.len() > MAX_ORBITS {
        return Err(PatternError::TooManyOrbits { orbits: sys.costs.len() });
    }
    let solve_opts = SolveOptions {
        budget,
        workers: opts.workers.max(1),
        time_limit: opts.time_limit,
        max_free: MAX_ORBITS,
    };
    let incumbent = (budget.is_none()).then(|| ((w * h) as u64, vec![true; sys.costs.len()]));
    let core = solver::solve_system(&sys, &solve_opts, incumbent)?;
    if core.outcome == Outcome::TimedOut && budget.is_some() && core.best.is_none() {
        return Err(PatternError::TimedOut);
    }
    Ok(core.best.map(|(_, chosen)| {
        let cells = (0..w * h).filter(|&i| chosen[orbit[i]]).map(|i| (i % w, i / w));
        let p = PeriodicPattern::new(lattice, w, h, cells).expect("solver picks at least one cell");
        debug_assert!(verify_pattern(&p).passed, "search produced a failing pattern");
        p
    }))
}

/// A passing pattern with density at most `target` at this period, if any.
pub fn search_pattern(
    lattice: Lattice,
    period: (usize, usize),
    target: Density,
    opts: &PatternSearchOptions,
) -> Result<Option<PeriodicPattern>, PatternError> {
    let budget = (target * Density::from_integer((period.0 * period.1) as u64)).floor().to_integer() as usize;
    if budget == 0 {
        return Ok(None);
    }
    run_search(lattice, period, Some(budget), opts)
}

/// A minimum-density passing pattern at this period, if any pattern passes.
pub fn min_pattern(lattice: Lattice, period: (usize, usize), opts: &PatternSearchOptions) -> Result<Option<PeriodicPattern>, PatternError> {
    run_search(lattice, period, None, opts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusReport {
    pub lattice: Lattice,
    pub w: usize,
    pub h: usize,
    pub result: SolveResult,
    pub advisory: String,
}

/// Exact DET:IC of the finite torus; advisory evidence only.
pub fn torus_consistency(lattice: Lattice, w: usize, h: usize) -> Result<TorusReport, PatternError> {
    if w * h > MAX_TORUS_CELLS {
        return Err(PatternError::TorusTooLarge { cells: w * h });
    }
    let g = generate(&FamilySpec::Torus(lattice, w, h))?;
    let result = min_code(&g, CodeKind::Detic, &SolveOptions::default())?;
    let mut advisory =
        format!("the {w}x{h} torus optimum bounds only patterns of this exact period, not the infinite optimum");
    if w < 5 || (h < 5 && lattice != Lattice::Ladder) {
        advisory.push_str("; short wraparound cycles may distort the value");
    }
    Ok(TorusReport { lattice, w, h, result, advisory })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderFact {
    /// Both ends of a rung are non-detectors.
    Rung,
    /// Two rail neighbors are non-detectors.
    Rail,
    /// `(x, y)` and `(x + 1, 1 - y)` are both non-detectors.
    Diagonal,
}

/// Non-detector placements ruled out on any ladder DET:IC, found in `p`.
pub fn ladder_fact_violations(p: &PeriodicPattern) -> Result<Vec<(LadderFact, Cell, Cell)>, PatternError> {
    if p.lattice != Lattice::Ladder {
        return Err(PatternError::NotLadder(p.lattice));
    }
    let mut out = Vec::new();
    for x in 0..p.w as i64 {
        let out_of = |c: Cell| !p.contains(c);
        if out_of((x, 0)) && out_of((x, 1)) {
            out.push((LadderFact::Rung, (x, 0), (x, 1)));
        }
        for y in 0..2 {
            if out_of((x, y)) && out_of((x + 1, y)) {
                out.push((LadderFact::Rail, (x, y), (x + 1, y)));
            }
            if out_of((x, y)) && out_of((x + 1, 1 - y)) {
                out.push((LadderFact::Diagonal, (x, y), (x + 1, 1 - y)));
            }
        }
    }
    Ok(out)
}
