//! Numerical approximation of the density metric `d_rho`.
//!
//! The pipeline: a Whitney quadtree grid over the domain, a weighted graph on
//! the cell centers with boundary anchors, shortest-path sweeps for pairwise
//! distances, and radial/tent-path oracles plus condition checks used to
//! validate the graph distances.

pub mod checks;
pub mod graph;
pub mod radial;
pub mod whitney;

pub use checks::{local_exponents, volume_growth_check, LocalExponents};
pub use graph::{
    build_graph, rho_distance, rho_distance_matrix, shortest_paths, DistanceMatrix, MetricGraph,
    Node, NodeKind,
};
pub use radial::{radial_path_distance, tree_distance_twophase, vertical_integral};
pub use whitney::{whitney_grid, Cell, WhitneyGrid, MAX_GRID_DEPTH};
