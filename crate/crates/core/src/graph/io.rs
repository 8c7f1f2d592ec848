//! Text formats for graphs and detector sets, plus DOT export.
//!
//! Graph files look like DIMACS:
//!
//! ```text
//! c comment
//! p graph 4 4
//! e 1 2
//! e 2 3
//! ...
//! ```
//!
//! Detector sets are `s <k>` followed by `k` lines `d <v>`. Ids are 1-based
//! in both formats.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Graph, GraphError};
use crate::vertex_set::VertexSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line")]
    MissingHeader,
    #[error("header declares {declared} entries but {found} were given")]
    CountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn parse_id(tok: Option<&str>, line: usize, n: usize) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, "missing vertex id"))?;
    let id: usize = tok.parse().map_err(|_| syntax(line, format!("bad vertex id '{tok}'")))?;
    if id == 0 || id > n {
        return Err(syntax(line, format!("vertex id {id} not in 1..={n}")));
    }
    Ok(id - 1)
}

pub fn read_graph(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate header"));
                }
                if toks.next() != Some("graph") {
                    return Err(syntax(line, "expected 'p graph <n> <m>'"));
                }
                let mut num = || -> Result<usize, ParseError> {
                    toks.next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| syntax(line, "expected 'p graph <n> <m>'"))
                };
                header = Some((num()?, num()?));
            }
            Some("e") => {
                let (n, _) = header.ok_or(ParseError::MissingHeader)?;
                let u = parse_id(toks.next(), line, n)?;
                let v = parse_id(toks.next(), line, n)?;
                if u == v {
                    return Err(GraphError::Loop(u).into());
                }
                edges.push((u, v));
            }
            Some(other) => return Err(syntax(line, format!("unknown line type '{other}'"))),
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if edges.len() != m {
        return Err(ParseError::CountMismatch { declared: m, found: edges.len() });
    }
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p graph {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Reads a detector-set file for a graph on `n` vertices.
pub fn read_detector_set(text: &str, n: usize) -> Result<VertexSet, ParseError> {
    let mut declared = None;
    let mut set = VertexSet::new(n);
    let mut found = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("s") => {
                let k = toks
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| syntax(line, "expected 's <k>'"))?;
                declared = Some(k);
            }
            Some("d") => {
                if declared.is_none() {
                    return Err(ParseError::MissingHeader);
                }
                set.insert(parse_id(toks.next(), line, n)?);
                found += 1;
            }
            Some(other) => return Err(syntax(line, format!("unknown line type '{other}'"))),
        }
    }
    let declared = declared.ok_or(ParseError::MissingHeader)?;
    if declared != found {
        return Err(ParseError::CountMismatch { declared, found });
    }
    Ok(set)
}

pub fn write_detector_set(s: &VertexSet) -> String {
    let mut out = format!("s {}\n", s.len());
    for v in s {
        let _ = writeln!(out, "d {}", v + 1);
    }
    out
}

/// Graphviz rendering; detectors (if given) are drawn filled.
pub fn to_dot(g: &Graph, detectors: Option<&VertexSet>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in 0..g.n() {
        let style = match detectors {
            Some(s) if s.contains(v) => " [style=filled, fillcolor=gray40, fontcolor=white]",
            _ => "",
        };
        let _ = writeln!(out, "  {}{};", v + 1, style);
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", u + 1, v + 1);
    }
    out.push_str("}\n");
    out
}
