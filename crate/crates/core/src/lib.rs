//! Search machinery for tight cycles in r-uniform hypergraphs.
//!
//! A tight cycle is a cyclic sequence of at least r+1 distinct vertices in
//! which every window of r consecutive vertices is an edge. This crate works
//! on the *line graph* of an r-partite r-uniform hypergraph: vertices are
//! r-tuples (one element per part), and two tuples are adjacent when they
//! differ in exactly one coordinate. On top of that structure it provides
//!
//! * block/density/degree calculus and hypergraph conversions ([`linegraph`]),
//! * minimum-degree peeling and expander extraction with certificates
//!   ([`expander`]),
//! * sigma-path reachability with forbidden coordinates ([`sigma`]),
//! * balanced partitioning, a two-sided path connector, cycle assembly and
//!   the density-increment outer search ([`search`]),
//! * brute-force oracles and extremal generators ([`oracle`]),
//! * the text formats used by the CLI ([`format`]).
//!
//! Everything is deterministic given a seed; all density and expansion
//! comparisons use exact rational arithmetic.

pub mod expander;
pub mod format;
pub mod hypergraph;
pub mod linegraph;
pub mod oracle;
pub mod rational;
pub mod search;
pub mod sigma;

pub use hypergraph::Hypergraph;
pub use linegraph::{Coordinate, DensityStats, LineGraph, VertexId};
pub use rational::Rational;
pub use sigma::{ForbiddenMap, Permutation, SigmaPath};
