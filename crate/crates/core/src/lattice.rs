//! Coordinate conventions shared by the torus generators and periodic patterns.
//!
//! Every lattice lives on integer coordinates `(x, y)`:
//!
//! * `SQR`: the four axis neighbors.
//! * `TRI`: `SQR` plus the `(+1, +1)` / `(-1, -1)` diagonal.
//! * `KNG`: `SQR` plus both diagonals.
//! * `HEX`: brick wall. Horizontal edges everywhere, and `(x, y) ~ (x, y + 1)`
//!   only when `x + y` is even.
//! * `LADDER`: `Z × {0, 1}` with horizontal rails and rungs `(x, 0) ~ (x, 1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Lattice {
    Ladder,
    Sqr,
    Kng,
    Tri,
    Hex,
}

pub const ALL_LATTICES: [Lattice; 5] =
    [Lattice::Ladder, Lattice::Hex, Lattice::Sqr, Lattice::Tri, Lattice::Kng];

impl Lattice {
    pub fn degree(self) -> usize {
        match self {
            Lattice::Ladder | Lattice::Hex => 3,
            Lattice::Sqr => 4,
            Lattice::Tri => 6,
            Lattice::Kng => 8,
        }
    }

    /// Open neighborhood of `(x, y)` in the infinite lattice.
    pub fn neighbors(self, x: i64, y: i64) -> Vec<(i64, i64)> {
        let mut out = vec![(x + 1, y), (x - 1, y)];
        match self {
            Lattice::Ladder => out.push((x, 1 - y)),
            Lattice::Hex => {
                if (x + y).rem_euclid(2) == 0 {
                    out.push((x, y + 1));
                } else {
                    out.push((x, y - 1));
                }
            }
            Lattice::Sqr | Lattice::Tri | Lattice::Kng => {
                out.push((x, y + 1));
                out.push((x, y - 1));
                if self != Lattice::Sqr {
                    out.push((x + 1, y + 1));
                    out.push((x - 1, y - 1));
                }
                if self == Lattice::Kng {
                    out.push((x + 1, y - 1));
                    out.push((x - 1, y + 1));
                }
            }
        }
        out
    }

    pub fn name(self) -> &'static str {
        match self {
            Lattice::Ladder => "LADDER",
            Lattice::Sqr => "SQR",
            Lattice::Kng => "KNG",
            Lattice::Tri => "TRI",
            Lattice::Hex => "HEX",
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lattice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "LADDER" => Ok(Lattice::Ladder),
            "SQR" => Ok(Lattice::Sqr),
            "KNG" => Ok(Lattice::Kng),
            "TRI" => Ok(Lattice::Tri),
            "HEX" => Ok(Lattice::Hex),
            other => Err(format!("unknown lattice '{other}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbor_relation_is_symmetric_and_regular() {
        for lat in ALL_LATTICES {
            let ys: Vec<i64> = if lat == Lattice::Ladder { vec![0, 1] } else { (-3..=3).collect() };
            for x in -3..=3 {
                for &y in &ys {
                    let nb = lat.neighbors(x, y);
                    assert_eq!(nb.len(), lat.degree(), "{lat} at ({x},{y})");
                    for (a, b) in nb {
                        assert!(lat.neighbors(a, b).contains(&(x, y)), "{lat} ({x},{y})-({a},{b})");
                    }
                }
            }
        }
    }
}
