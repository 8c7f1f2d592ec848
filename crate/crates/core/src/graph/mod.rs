//! Finite simple undirected graphs with contiguous vertex ids.

mod generate;
pub mod io;
pub mod random;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vertex_set::VertexSet;

pub use generate::{generate, FamilySpec, G77_LABELS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0} in edge ({0}, {0})")]
    Loop(usize),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    OutOfRange { u: usize, v: usize, n: usize },
    #[error("vertex {v} is not in 0..{n}")]
    InvalidVertex { v: usize, n: usize },
    #[error("({u}, {v}) is not an edge")]
    NotAnEdge { u: usize, v: usize },
    #[error("unsupported family parameters: {0}")]
    Unsupported(String),
}

/// Simple undirected graph on vertices `0..n`.
///
/// Neighbor lists are sorted ascending and symmetric; the graph is immutable
/// once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwinKind {
    Open,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwinPair {
    pub u: usize,
    pub v: usize,
    pub kind: TwinKind,
}

impl Graph {
    /// Builds a graph from an edge list, collapsing duplicate edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m2 = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m2 += list.len();
        }
        Ok(Graph { adj, m: m2 / 2 })
    }

    pub fn empty(n: usize) -> Graph {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex { v, n: self.n() })
        }
    }

    pub fn open_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(VertexSet::from_iter_in(self.n(), self.adj[v].iter().copied()))
    }

    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        let mut s = self.open_neighborhood(v)?;
        s.insert(v);
        Ok(s)
    }

    /// Sorted closed neighborhood `N[v]` as a vector.
    pub fn closed_list(&self, v: usize) -> Vec<usize> {
        let list = &self.adj[v];
        let pos = list.partition_point(|&x| x < v);
        let mut out = Vec::with_capacity(list.len() + 1);
        out.extend_from_slice(&list[..pos]);
        out.push(v);
        out.extend_from_slice(&list[pos..]);
        out
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).max()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|l| l.len() == d)
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices at distance 1 or 2 from `v` (excluding `v`), ascending.
    pub fn ball2(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &a in &self.adj[v] {
            out.push(a);
            out.extend(self.adj[a].iter().copied().filter(|&b| b != v));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of triangles through edge `uv`, i.e. `|N(u) ∩ N(v)|`.
    pub fn triangle_count_edge(&self, u: usize, v: usize) -> Result<usize, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge { u, v });
        }
        Ok(sorted_intersection_len(&self.adj[u], &self.adj[v]))
    }

    /// Every unordered pair of open or closed twins, sorted by `(u, v)`.
    pub fn find_twins(&self) -> Vec<TwinPair> {
        let mut out = Vec::new();
        let mut open: HashMap<&[usize], Vec<usize>> = HashMap::new();
        for v in 0..self.n() {
            open.entry(&self.adj[v]).or_default().push(v);
        }
        let closed_lists: Vec<Vec<usize>> = (0..self.n()).map(|v| self.closed_list(v)).collect();
        let mut closed: HashMap<&[usize], Vec<usize>> = HashMap::new();
        for (v, l) in closed_lists.iter().enumerate() {
            closed.entry(l).or_default().push(v);
        }
        for (groups, kind) in [(open, TwinKind::Open), (closed, TwinKind::Closed)] {
            for members in groups.values() {
                for (i, &u) in members.iter().enumerate() {
                    for &v in &members[i + 1..] {
                        out.push(TwinPair { u, v, kind });
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges().all(|(u, v)| sorted_intersection_len(&self.adj[u], &self.adj[v]) == 0)
    }

    /// Applies a relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n(), &edges).expect("relabel keeps edges valid")
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let edges: Vec<_> = self.edges().filter(|&e| e != (u.min(v), u.max(v))).collect();
        Graph::from_edges(self.n(), &edges).expect("subset of valid edges")
    }
}

pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}
