//! Error-detecting identifying codes (DET:IC) and the related IC, LD and OLD
//! detection systems on finite graphs and periodic grids.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] and [`vertex_set`]: the graph model, generators and file formats.
//! * [`cubic`]: enumeration of connected cubic graphs and a canonical form.
//! * [`verify`]: exact checkers for every code kind, the existence test and
//!   the cubic proposition checker.
//! * [`solver`]: branch and bound for minimum codes, plus brute-force oracles.
//! * [`reduction`]: 3-SAT to DET:IC with certificate translation.
//! * [`grid`]: periodic patterns on the infinite ladder and the planar grids.

pub mod cubic;
pub mod graph;
pub mod grid;
pub mod lattice;
pub mod reduction;
pub mod solver;
pub mod verify;
pub mod vertex_set;

pub use graph::{generate, FamilySpec, Graph, GraphError};
pub use lattice::Lattice;
pub use verify::{verify_code, CodeKind, Violation};
pub use vertex_set::VertexSet;

/// Exact density values.
pub type Density = num_rational::Ratio<u64>;
