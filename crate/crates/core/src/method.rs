//! The two-phase network clustering method and the naive baseline.

use rayon::prelude::*;
use tracing::info;

use crate::agglomerate::{upgma_cluster, MergeHistory};
use crate::community::{louvain, Partition};
use crate::error::Result;
use crate::graph::NetworkSample;
use crate::preprocess::preprocess;
use crate::seed::derive_seed;
use crate::similarity::{similarity_matrix, SimilarityMatrix};

const LOUVAIN_STREAM: u64 = 1;
const UPGMA_STREAM: u64 = 2;

/// Everything produced by one clustering run.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterOutcome {
    /// Networks actually fed to Louvain (processed, self-loops zeroed).
    pub processed: NetworkSample,
    pub partitions: Vec<Partition>,
    pub similarity: SimilarityMatrix,
    pub history: MergeHistory,
}

/// Louvain on every network, each with its own seed derived from `seed`
/// and the network's position. Results do not depend on the thread count.
pub fn detect_communities(sample: &NetworkSample, seed: u64) -> Vec<Partition> {
    sample
        .networks()
        .par_iter()
        .enumerate()
        .map(|(t, net)| louvain(net, derive_seed(seed, &[LOUVAIN_STREAM, t as u64])))
        .collect()
}

fn merge_phase(processed: NetworkSample, seed: u64) -> Result<ClusterOutcome> {
    let processed = processed.zero_self_loops();
    info!(
        step = "zero_self_loops",
        networks = processed.len(),
        "self-loop weights set to zero"
    );
    let partitions = detect_communities(&processed, seed);
    info!(
        step = "louvain",
        networks = partitions.len(),
        mean_communities = partitions
            .iter()
            .map(|p| p.community_count() as f64)
            .sum::<f64>()
            / partitions.len() as f64,
        "community structures detected"
    );
    let similarity = similarity_matrix(&partitions)?;
    info!(
        step = "similarity",
        n = similarity.len(),
        "pairwise ARI matrix built"
    );
    let history = upgma_cluster(&similarity, derive_seed(seed, &[UPGMA_STREAM]));
    info!(
        step = "merge",
        merges = history.steps().len(),
        "average-linkage merging finished"
    );
    Ok(ClusterOutcome {
        processed,
        partitions,
        similarity,
        history,
    })
}

/// Full method: normalize and threshold at `alpha`, zero self-loops,
/// Louvain per network, ARI matrix, UPGMA.
pub fn cluster_sample(sample: &NetworkSample, alpha: f64, seed: u64) -> Result<ClusterOutcome> {
    sample.require_at_least(2)?;
    let processed = preprocess(sample, alpha)?;
    info!(
        step = "preprocess",
        alpha,
        networks = processed.len(),
        "normalized and thresholded"
    );
    merge_phase(processed, seed)
}

/// Baseline that skips preprocessing: the merge phase on the raw networks.
pub fn naive_cluster(sample: &NetworkSample, seed: u64) -> Result<ClusterOutcome> {
    sample.require_at_least(2)?;
    merge_phase(sample.clone(), seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agglomerate::count_perfect_merges;
    use crate::graph::build_network;

    fn identical_sample(n: usize) -> NetworkSample {
        let nets = (0..n)
            .map(|t| {
                build_network(
                    6,
                    &[
                        (1, 2, 3.0),
                        (2, 3, 3.0),
                        (1, 3, 3.0),
                        (4, 5, 2.0),
                        (5, 6, 2.0),
                        (4, 6, 2.0),
                        (3, 4, 0.5),
                    ],
                )
                .unwrap()
                .with_label(format!("n{t}"))
            })
            .collect();
        NetworkSample::new(nets).unwrap()
    }

    #[test]
    fn identical_networks_merge_perfectly() {
        let s = identical_sample(5);
        let naive = naive_cluster(&s, 1).unwrap();
        assert_eq!(count_perfect_merges(&naive.history), 4);
        // all edges constant across the sample: nothing survives preprocessing
        let method = cluster_sample(&s, 0.95, 1).unwrap();
        assert!(method.processed.networks().iter().all(|n| n.is_empty()));
        assert_eq!(count_perfect_merges(&method.history), 4);
    }

    #[test]
    fn naive_n2_single_merge() {
        let s = identical_sample(2);
        assert_eq!(naive_cluster(&s, 0).unwrap().history.steps().len(), 1);
    }

    #[test]
    fn self_loops_are_removed_before_louvain() {
        let nets = (0..3)
            .map(|t| build_network(3, &[(1, 1, 10.0 + t as f64), (2, 3, 1.0 + t as f64)]).unwrap())
            .collect();
        let out = cluster_sample(&NetworkSample::new(nets).unwrap(), 0.0, 0).unwrap();
        assert!(out
            .processed
            .networks()
            .iter()
            .all(|n| n.weight(0, 0) == 0.0));
    }
}
