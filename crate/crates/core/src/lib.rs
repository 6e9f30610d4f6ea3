//! Weighted 3-coloring: color the vertices of an edge-weighted graph with
//! three colors so that the total weight of monochromatic edges is minimal.
//!
//! The crate provides exact solvers for small instances, decomposition-based
//! lower bounds, greedy and local-search constructions, and a portfolio of
//! metaheuristics (simulated annealing, variable neighborhood search, a
//! genetic local search, iterative partial improvement and their
//! combination). All algorithms are generic over the edge-weight scalar
//! ([`Weight`]); the aliases below fix it to `f64`.

pub mod decomposition;
pub mod error;
pub mod exact;
pub mod graph;
pub mod instances;
pub mod io;
pub mod local_search;
pub mod metaheuristics;
pub mod objective;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use graph::{Color, Coloring, WeightedGraph, NUM_COLORS};
pub use scalar::Weight;

/// Graph with `f64` weights.
pub type Graph = WeightedGraph<f64>;
/// Graph with `f32` weights.
pub type Graph32 = WeightedGraph<f32>;
/// Solve result with `f64` objective values.
pub type Solution = exact::SolveResult<f64>;
