//! Connected cubic graphs by backtracking, and a canonical form for
//! isomorphism tests on small graphs.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::Graph;

pub const MAX_CUBIC_N: usize = 14;
pub const MAX_CANONICAL_N: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicError {
    #[error("cubic graphs need an even vertex count, got {0}")]
    Odd(usize),
    #[error("vertex count {0} not in 4..={MAX_CUBIC_N}")]
    OutOfRange(usize),
}

/// Streams connected cubic graphs on `n` vertices.
///
/// Without `dedup` isomorphic copies may repeat; with it each isomorphism
/// class appears exactly once (first representative in search order).
pub fn enumerate_cubic(n: usize, dedup: bool) -> Result<CubicGraphs, CubicError> {
    if !n.is_multiple_of(2) {
        return Err(CubicError::Odd(n));
    }
    if !(4..=MAX_CUBIC_N).contains(&n) {
        return Err(CubicError::OutOfRange(n));
    }
    Ok(CubicGraphs {
        n,
        adj: vec![0; n],
        deg: vec![0; n],
        stack: Vec::new(),
        descend: true,
        done: false,
        seen: dedup.then(HashSet::new),
    })
}

/// Iterator returned by [`enumerate_cubic`].
///
/// Edges are added from the smallest unfinished vertex `v` to larger
/// vertices in increasing order; untouched vertices are introduced in id
/// order, and a finished prefix that closes off a component is cut.
pub struct CubicGraphs {
    n: usize,
    adj: Vec<u64>,
    deg: Vec<u8>,
    stack: Vec<(usize, usize)>,
    descend: bool,
    done: bool,
    seen: Option<HashSet<Vec<u64>>>,
}

impl CubicGraphs {
    fn toggle(&mut self, v: usize, u: usize, add: bool) {
        if add {
            self.adj[v] |= 1 << u;
            self.adj[u] |= 1 << v;
            self.deg[v] += 1;
            self.deg[u] += 1;
            self.stack.push((v, u));
        } else {
            self.adj[v] &= !(1 << u);
            self.adj[u] &= !(1 << v);
            self.deg[v] -= 1;
            self.deg[u] -= 1;
        }
    }

    /// Smallest valid partner `u >= from` for `v`.
    fn candidate(&self, v: usize, from: usize) -> Option<usize> {
        let used = (0..self.n).rev().find(|&x| self.deg[x] > 0).unwrap_or(0).max(v);
        let last = (used + 1).min(self.n - 1);
        (from.max(v + 1)..=last).find(|&u| self.deg[u] < 3 && self.adj[v] >> u & 1 == 0)
    }

    fn graph(&self) -> Graph {
        let edges: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|v| (v + 1..self.n).filter(move |&u| self.adj[v] >> u & 1 == 1).map(move |u| (v, u)))
            .collect();
        Graph::from_edges(self.n, &edges).expect("valid edges")
    }
}

impl Iterator for CubicGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        loop {
            if self.done {
                return None;
            }
            if self.descend {
                match (0..self.n).find(|&v| self.deg[v] < 3) {
                    None => {
                        self.descend = false;
                        let g = self.graph();
                        let fresh = match &mut self.seen {
                            Some(seen) => seen.insert(canonical_form(&g)),
                            None => true,
                        };
                        if fresh {
                            return Some(g);
                        }
                    }
                    // an untouched vertex after finished ones: the prefix is a closed component
                    Some(v) if v > 0 && self.deg[v] == 0 => self.descend = false,
                    Some(v) => {
                        // partners above v are added in increasing order
                        let from = match self.stack.last() {
                            Some(&(w, u)) if w == v => u + 1,
                            _ => v + 1,
                        };
                        match self.candidate(v, from) {
                            Some(u) => self.toggle(v, u, true),
                            None => self.descend = false,
                        }
                    }
                }
            } else {
                let Some((v, u)) = self.stack.pop() else {
                    self.done = true;
                    return None;
                };
                self.toggle(v, u, false);
                if let Some(u2) = self.candidate(v, u + 1) {
                    self.toggle(v, u2, true);
                    self.descend = true;
                }
            }
        }
    }
}

/// Canonical adjacency of `g`: two graphs are isomorphic iff their forms are equal.
///
/// Individualization-refinement without automorphism pruning; fine for the
/// small, sparse graphs this crate enumerates. Panics if `n > 64`.
pub fn canonical_form(g: &Graph) -> Vec<u64> {
    let n = g.n();
    assert!(n <= MAX_CANONICAL_N, "canonical form supports at most {MAX_CANONICAL_N} vertices");
    let colors = refine(g, (0..n).map(|v| g.degree(v)).collect());
    let mut best: Option<Vec<u64>> = None;
    search(g, colors, &mut best);
    let mut form = best.unwrap_or_default();
    form.insert(0, n as u64);
    form
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.m() == b.m() && canonical_form(a) == canonical_form(b)
}

/// Replaces colors by dense ranks, ordered by the given keys.
fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

/// Color refinement to the coarsest equitable partition.
fn refine(g: &Graph, colors: Vec<usize>) -> Vec<usize> {
    let mut colors = rank(&colors);
    loop {
        let classes = colors.iter().max().map_or(0, |&m| m + 1);
        let keys: Vec<(usize, Vec<usize>)> = (0..g.n())
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&keys);
        if next.iter().max().map_or(0, |&m| m + 1) == classes {
            return next;
        }
        colors = next;
    }
}

fn search(g: &Graph, colors: Vec<usize>, best: &mut Option<Vec<u64>>) {
    let n = g.n();
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c] += 1;
    }
    let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
        let mut rows = vec![0u64; n];
        for v in 0..n {
            rows[colors[v]] = g.neighbors(v).iter().fold(0, |acc, &w| acc | 1 << colors[w]);
        }
        if best.as_ref().is_none_or(|b| rows < *b) {
            *best = Some(rows);
        }
        return;
    };
    for v in (0..n).filter(|&v| colors[v] == target) {
        let split: Vec<usize> = (0..n).map(|x| 2 * colors[x] + usize::from(colors[x] == target && x != v)).collect();
        search(g, refine(g, split), best);
    }
}
