//! Graph clustering and the cluster-sum lower bound.
//!
//! Deleting the edges between clusters can only lower the optimum, so the
//! sum of exact per-cluster optima is a lower bound for the whole graph.
//! Clusters come from spectral clustering with a size cap or from a greedy
//! heavy-edge agglomeration.

mod bound;
pub mod eigen;
mod heavy;
mod kmeans;
mod partition;
mod spectral;

pub use bound::{lower_bound, BoundConfig, ClusterBound, LowerBound};
pub use eigen::{lanczos_smallest, symmetric_eigen, DenseMatrix, LanczosConfig};
pub use heavy::heavy_edge_clusters;
pub use kmeans::{balanced_kmeans, spectral_clusters, spectral_clusters_with};
pub use partition::ClusterPartition;
pub use spectral::{
    laplacian_apply, normalized_laplacian, spectral_embedding, spectral_embedding_with, EigenSettings,
    SpectralEmbedding,
};

/// Default cluster cap for lower bounds.
pub const DEFAULT_Q: usize = 20;
