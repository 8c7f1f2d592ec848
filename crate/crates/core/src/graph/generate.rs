use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};
use crate::lattice::Lattice;

/// Named graph families with deterministic labelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Hypercube(usize),
    /// `P_k □ P_2`.
    Ladder(usize),
    /// `C_k □ P_2`.
    Prism(usize),
    G77,
    Torus(Lattice, usize, usize),
}

/// Vertex names of the seven-vertex graph, in label order.
pub const G77_LABELS: [&str; 7] = ["a", "b", "c", "d", "a'", "b'", "c'"];

pub const MAX_HYPERCUBE_DIM: usize = 10;

fn unsupported(msg: impl Into<String>) -> GraphError {
    GraphError::Unsupported(msg.into())
}

/// Builds the graph described by `spec`.
///
/// Two-row families (`ladder`, `prism`, `torus`) number row-major: vertex
/// `(x, y)` gets id `y * width + x`.
pub fn generate(spec: &FamilySpec) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let n = match *spec {
        FamilySpec::Path(k) => {
            if k < 1 {
                return Err(unsupported("path needs k >= 1"));
            }
            edges.extend((1..k).map(|i| (i - 1, i)));
            k
        }
        FamilySpec::Cycle(k) => {
            if k < 3 {
                return Err(unsupported("cycle needs k >= 3"));
            }
            edges.extend((0..k).map(|i| (i, (i + 1) % k)));
            k
        }
        FamilySpec::Complete(k) => {
            if k < 1 {
                return Err(unsupported("complete graph needs k >= 1"));
            }
            for u in 0..k {
                edges.extend((u + 1..k).map(|v| (u, v)));
            }
            k
        }
        FamilySpec::Hypercube(d) => {
            if !(1..=MAX_HYPERCUBE_DIM).contains(&d) {
                return Err(unsupported(format!("hypercube dimension {d} not in 1..={MAX_HYPERCUBE_DIM}")));
            }
            let n = 1usize << d;
            for u in 0..n {
                for b in 0..d {
                    let v = u ^ (1 << b);
                    if u < v {
                        edges.push((u, v));
                    }
                }
            }
            n
        }
        FamilySpec::Ladder(k) => {
            if k < 1 {
                return Err(unsupported("ladder needs k >= 1"));
            }
            for x in 0..k {
                edges.push((x, k + x));
                if x + 1 < k {
                    edges.push((x, x + 1));
                    edges.push((k + x, k + x + 1));
                }
            }
            2 * k
        }
        FamilySpec::Prism(k) => {
            if k < 3 {
                return Err(unsupported("prism needs k >= 3"));
            }
            for x in 0..k {
                edges.push((x, k + x));
                edges.push((x, (x + 1) % k));
                edges.push((k + x, k + (x + 1) % k));
            }
            2 * k
        }
        FamilySpec::G77 => {
            // a b c d a' b' c'
            edges.extend([(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 5), (2, 6)]);
            7
        }
        FamilySpec::Torus(lattice, w, h) => return torus(lattice, w, h),
    };
    Graph::from_edges(n, &edges)
}

fn torus(lattice: Lattice, w: usize, h: usize) -> Result<Graph, GraphError> {
    match lattice {
        Lattice::Ladder => {
            if h != 2 {
                return Err(unsupported("LADDER torus has height 2"));
            }
            return generate(&FamilySpec::Prism(w));
        }
        Lattice::Hex if !w.is_multiple_of(2) || !h.is_multiple_of(2) => {
            return Err(unsupported("HEX torus needs even width and height"));
        }
        _ => {}
    }
    if w < 3 || h < 3 {
        return Err(unsupported("torus needs w, h >= 3"));
    }
    let id = |x: i64, y: i64| (y.rem_euclid(h as i64) as usize) * w + x.rem_euclid(w as i64) as usize;
    let mut edges = Vec::new();
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let u = id(x, y);
            for (a, b) in lattice.neighbors(x, y) {
                let v = id(a, b);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::from_edges(w * h, &edges)
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Path(k) => write!(f, "path:{k}"),
            FamilySpec::Cycle(k) => write!(f, "cycle:{k}"),
            FamilySpec::Complete(k) => write!(f, "complete:{k}"),
            FamilySpec::Hypercube(d) => write!(f, "hypercube:{d}"),
            FamilySpec::Ladder(k) => write!(f, "ladder:{k}"),
            FamilySpec::Prism(k) => write!(f, "prism:{k}"),
            FamilySpec::G77 => write!(f, "g77"),
            FamilySpec::Torus(l, w, h) => write!(f, "torus:{}:{w}:{h}", l.name().to_lowercase()),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = String;

    /// Parses `path:5`, `hypercube:3`, `g77`, `torus:sqr:4:4` and friends.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<usize, String> {
            parts
                .get(i)
                .ok_or_else(|| format!("'{s}': missing parameter"))?
                .parse::<usize>()
                .map_err(|e| format!("'{s}': {e}"))
        };
        let want = |k: usize| -> Result<(), String> {
            if parts.len() == k {
                Ok(())
            } else {
                Err(format!("'{s}': expected {} parameter(s)", k - 1))
            }
        };
        let spec = match parts[0].to_ascii_lowercase().as_str() {
            "path" => FamilySpec::Path(num(1)?),
            "cycle" => FamilySpec::Cycle(num(1)?),
            "complete" => FamilySpec::Complete(num(1)?),
            "hypercube" => FamilySpec::Hypercube(num(1)?),
            "ladder" => FamilySpec::Ladder(num(1)?),
            "prism" => FamilySpec::Prism(num(1)?),
            "g77" => {
                want(1)?;
                return Ok(FamilySpec::G77);
            }
            "torus" => {
                want(4)?;
                let lat: Lattice = parts[1].parse()?;
                return Ok(FamilySpec::Torus(lat, num(2)?, num(3)?));
            }
            other => return Err(format!("unknown family '{other}'")),
        };
        want(2)?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: FamilySpec) -> Graph {
        generate(&spec).unwrap()
    }

    #[test]
    fn family_sizes() {
        let q3 = g(FamilySpec::Hypercube(3));
        assert_eq!((q3.n(), q3.m()), (8, 12));
        for d in 1..=6 {
            let q = g(FamilySpec::Hypercube(d));
            assert_eq!(q.m(), d << (d - 1));
            assert!(q.is_regular(d));
        }
        let g77 = g(FamilySpec::G77);
        assert_eq!((g77.n(), g77.m()), (7, 7));
        let t = g(FamilySpec::Torus(Lattice::Sqr, 4, 4));
        assert_eq!((t.n(), t.m()), (16, 32));
        assert!(g(FamilySpec::Prism(5)).is_regular(3));
        assert!(g(FamilySpec::Torus(Lattice::Kng, 3, 4)).is_regular(8));
        assert!(g(FamilySpec::Torus(Lattice::Tri, 3, 3)).is_regular(6));
        assert!(g(FamilySpec::Torus(Lattice::Hex, 4, 4)).is_regular(3));
        assert!(g(FamilySpec::Torus(Lattice::Sqr, 5, 3)).is_regular(4));
        assert_eq!(g(FamilySpec::Ladder(4)).m(), 10);
        assert_eq!(g(FamilySpec::Torus(Lattice::Ladder, 6, 2)), g(FamilySpec::Prism(6)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate(&FamilySpec::Hypercube(11)).is_err());
        assert!(generate(&FamilySpec::Cycle(2)).is_err());
        assert!(generate(&FamilySpec::Torus(Lattice::Sqr, 2, 5)).is_err());
        assert!(generate(&FamilySpec::Torus(Lattice::Hex, 5, 4)).is_err());
        assert!(generate(&FamilySpec::Path(0)).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["path:5", "cycle:12", "complete:4", "hypercube:3", "ladder:4", "prism:8", "g77", "torus:sqr:4:4"] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("torus:sqr:4".parse::<FamilySpec>().is_err());
        assert!("blob:3".parse::<FamilySpec>().is_err());
    }
}
