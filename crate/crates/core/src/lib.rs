//! Clustering of samples of weighted undirected networks that share a node
//! set.
//!
//! The method runs in two phases. Every edge is first min-max normalized
//! across the sample and cut at a per-edge quantile ([`preprocess`]). Each
//! processed network then has its self-loops removed and its community
//! structure found by Louvain ([`community`]); partitions are compared with the
//! Adjusted Rand Index ([`similarity`]) and merged by average linkage
//! ([`agglomerate`]).
//!
//! Around the core sit a football event-log ingester ([`pitch`]), a synthetic
//! benchmark against a naive baseline ([`simbench`]), a Dixon-Coles goals
//! model with a playing-style effect ([`scoremodel`]), and the file-based
//! pipeline used by the `tactinet` binary ([`pipeline`]).

pub mod agglomerate;
pub mod community;
pub mod error;
pub mod graph;
pub mod io;
pub mod method;
pub mod pipeline;
pub mod pitch;
pub mod preprocess;
pub mod scoremodel;
pub mod seed;
pub mod simbench;
pub mod similarity;

pub use agglomerate::{
    at_least_one_rate, co_membership_rates, count_perfect_merges, cut_dendrogram,
    merge_similarity_profile, upgma_cluster, CoMembership, GroupAssignment, MergeHistory,
    MergeProfile, MergeStep,
};
pub use community::{louvain, modularity, Partition};
pub use error::{Error, Result};
pub use graph::{build_network, zero_edges, zero_self_loops, Network, NetworkSample};
pub use preprocess::{
    apply_thresholds, compute_thresholds, edge_min_max, normalize_sample, preprocess,
    ThresholdTable,
};
pub use similarity::{ari, similarity_matrix, SimilarityMatrix};
