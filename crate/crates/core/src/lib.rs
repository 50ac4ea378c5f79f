//! Positroids presented by Le-diagrams.
//!
//! A Le-diagram ([`LeDiagram`]) determines a planar DAG ([`LeGraph`]) whose
//! vertex-disjoint routings give the positroid's bases ([`routing::bases`]).
//! On top of the explicit basis list ([`BasisMatroid`]) the crate offers
//! flats, copoints on colines, duals and minors, the block decomposition of
//! the diagram, and a constructive search for positive colines
//! ([`coline::positive_coline`]). [`enumerate`] generates every diagram of a
//! given size and runs exhaustive checks over them.

pub mod coline;
pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod matroid;
pub mod routing;
pub mod simplicity;
pub mod structure;
pub mod subset;

pub use diagram::{parse_le_diagram, LeDiagram, Step};
pub use error::Error;
pub use graph::{build_le_graph, emit_dot, LeGraph, Vertex};
pub use matroid::{BasisMatroid, ColineReport, CopointKind, Flat};
pub use routing::{positroid, rank, RoutingPlan};
pub use subset::GroundSubset;
