//! Weighted undirected networks over a shared node set.
//!
//! Node labels in edge lists are 1-based (`1..=K`), matching the file formats.
//! Matrix accessors on [`Network`] take 0-based indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weighted undirected network stored as a dense symmetric matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    node_count: usize,
    weights: Vec<f64>,
    label: String,
}

impl Network {
    /// All-zero network on `node_count` nodes.
    pub fn empty(node_count: usize, label: impl Into<String>) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::NodeCount {
                min: 2,
                got: node_count,
            });
        }
        Ok(Self {
            node_count,
            weights: vec![0.0; node_count * node_count],
            label: label.into(),
        })
    }

    /// Builds a network from a row-major matrix, checking symmetry and weights.
    pub fn from_matrix(
        node_count: usize,
        weights: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::NodeCount {
                min: 2,
                got: node_count,
            });
        }
        if weights.len() != node_count * node_count {
            return Err(Error::ShapeMismatch(format!(
                "expected {} matrix entries, got {}",
                node_count * node_count,
                weights.len()
            )));
        }
        for i in 0..node_count {
            for j in 0..node_count {
                let w = weights[i * node_count + j];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidWeight(w));
                }
                if w != weights[j * node_count + i] {
                    return Err(Error::ShapeMismatch(format!(
                        "matrix not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self {
            node_count,
            weights,
            label: label.into(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.node_count + j]
    }

    /// Row-major view of the full matrix.
    pub fn matrix(&self) -> &[f64] {
        &self.weights
    }

    pub(crate) fn set_symmetric(&mut self, i: usize, j: usize, w: f64) {
        let k = self.node_count;
        self.weights[i * k + j] = w;
        self.weights[j * k + i] = w;
    }

    /// Sum of edge weights over unordered pairs, self-loops counted once.
    pub fn total_weight(&self) -> f64 {
        let k = self.node_count;
        let mut total = 0.0;
        for i in 0..k {
            for j in i..k {
                total += self.weight(i, j);
            }
        }
        total
    }

    pub fn is_empty(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0)
    }

    /// Copy with the diagonal set to zero.
    pub fn zero_self_loops(&self) -> Network {
        let mut out = self.clone();
        for i in 0..self.node_count {
            out.weights[i * self.node_count + i] = 0.0;
        }
        out
    }

    /// Returns a copy scaled by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Network {
        let mut out = self.clone();
        out.weights.iter_mut().for_each(|w| *w *= factor);
        out
    }
}

/// Builds a network from 1-based `(i, j, weight)` triples. Duplicate entries
/// for the same unordered pair are summed, so `(i, j)` and `(j, i)` counts
/// collapse into one undirected weight.
pub fn build_network(node_count: usize, edges: &[(usize, usize, f64)]) -> Result<Network> {
    let mut net = Network::empty(node_count, "")?;
    for &(i, j, w) in edges {
        check_node(i, node_count)?;
        check_node(j, node_count)?;
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidWeight(w));
        }
        let current = net.weight(i - 1, j - 1);
        net.set_symmetric(i - 1, j - 1, current + w);
    }
    Ok(net)
}

fn check_node(index: usize, node_count: usize) -> Result<()> {
    if index == 0 || index > node_count {
        Err(Error::IndexOutOfRange { index, node_count })
    } else {
        Ok(())
    }
}

/// Sets the diagonal of `net` to zero, leaving everything else untouched.
pub fn zero_self_loops(net: &Network) -> Network {
    net.zero_self_loops()
}

/// An ordered collection of networks over the same `K` nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSample {
    node_count: usize,
    node_labels: Vec<String>,
    networks: Vec<Network>,
}

impl NetworkSample {
    /// Node labels default to `"1".."K"`.
    pub fn new(networks: Vec<Network>) -> Result<Self> {
        let node_count = networks
            .first()
            .map(Network::node_count)
            .ok_or(Error::TooFewNetworks { min: 1, got: 0 })?;
        let labels = (1..=node_count).map(|i| i.to_string()).collect();
        Self::with_node_labels(networks, labels)
    }

    pub fn with_node_labels(networks: Vec<Network>, node_labels: Vec<String>) -> Result<Self> {
        let node_count = networks
            .first()
            .map(Network::node_count)
            .ok_or(Error::TooFewNetworks { min: 1, got: 0 })?;
        if let Some(bad) = networks.iter().find(|n| n.node_count() != node_count) {
            return Err(Error::InconsistentNodeCount {
                expected: node_count,
                found: bad.node_count(),
            });
        }
        if node_labels.len() != node_count {
            return Err(Error::ShapeMismatch(format!(
                "{} node labels for {} nodes",
                node_labels.len(),
                node_count
            )));
        }
        Ok(Self {
            node_count,
            node_labels,
            networks,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    pub fn networks(&self) -> &[Network] {
        &self.networks
    }

    pub fn len(&self) -> usize {
        self.networks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.networks.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.networks.iter().map(Network::label)
    }

    /// The weight of pair `(i, j)` (0-based) across every network.
    pub fn edge_series(&self, i: usize, j: usize) -> Vec<f64> {
        self.networks.iter().map(|n| n.weight(i, j)).collect()
    }

    pub(crate) fn map_networks(&self, f: impl Fn(&Network) -> Network) -> NetworkSample {
        NetworkSample {
            node_count: self.node_count,
            node_labels: self.node_labels.clone(),
            networks: self.networks.iter().map(f).collect(),
        }
    }

    pub(crate) fn replace_networks(&self, networks: Vec<Network>) -> NetworkSample {
        debug_assert_eq!(networks.len(), self.networks.len());
        NetworkSample {
            node_count: self.node_count,
            node_labels: self.node_labels.clone(),
            networks,
        }
    }

    pub fn zero_self_loops(&self) -> NetworkSample {
        self.map_networks(Network::zero_self_loops)
    }

    pub(crate) fn require_at_least(&self, min: usize) -> Result<()> {
        if self.networks.len() < min {
            Err(Error::TooFewNetworks {
                min,
                got: self.networks.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Zeroes the listed 1-based pairs (both orientations) in every network.
pub fn zero_edges(sample: &NetworkSample, pairs: &[(usize, usize)]) -> Result<NetworkSample> {
    let k = sample.node_count();
    for &(i, j) in pairs {
        check_node(i, k)?;
        check_node(j, k)?;
    }
    Ok(sample.map_networks(|net| {
        let mut out = net.clone();
        for &(i, j) in pairs {
            out.set_symmetric(i - 1, j - 1, 0.0);
        }
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_is_symmetric() {
        let net = build_network(3, &[(1, 2, 2.0)]).unwrap();
        assert_eq!(net.weight(0, 1), 2.0);
        assert_eq!(net.weight(1, 0), 2.0);
        assert_eq!(net.total_weight(), 2.0);
        for (i, j) in [(0, 0), (0, 2), (1, 2), (2, 2), (1, 1)] {
            assert_eq!(net.weight(i, j), 0.0);
        }
    }

    #[test]
    fn duplicate_orientations_sum() {
        let net = build_network(3, &[(1, 2, 1.0), (2, 1, 1.0)]).unwrap();
        assert_eq!(net.weight(0, 1), 2.0);
        assert_eq!(net.weight(1, 0), 2.0);
    }

    #[test]
    fn self_loop_on_diagonal() {
        let net = build_network(2, &[(1, 1, 3.0)]).unwrap();
        assert_eq!(net.weight(0, 0), 3.0);
        assert_eq!(net.weight(0, 1), 0.0);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            build_network(3, &[(0, 1, 1.0)]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            build_network(3, &[(1, 4, 1.0)]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            build_network(3, &[(1, 2, -1.0)]),
            Err(Error::InvalidWeight(_))
        ));
        assert!(matches!(
            build_network(3, &[(1, 2, f64::NAN)]),
            Err(Error::InvalidWeight(_))
        ));
        assert!(matches!(
            build_network(3, &[(1, 2, f64::INFINITY)]),
            Err(Error::InvalidWeight(_))
        ));
        assert!(matches!(
            build_network(1, &[]),
            Err(Error::NodeCount { .. })
        ));
    }

    #[test]
    fn from_matrix_rejects_asymmetry() {
        let err = Network::from_matrix(2, vec![0.0, 1.0, 2.0, 0.0], "x").unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch(_)));
    }

    #[test]
    fn zero_self_loops_clears_diagonal_only() {
        let net = build_network(3, &[(1, 1, 3.0), (2, 2, 1.0), (1, 3, 4.0), (2, 3, 0.5)]).unwrap();
        let z = zero_self_loops(&net);
        for i in 0..3 {
            assert_eq!(z.weight(i, i), 0.0);
        }
        assert_eq!(z.weight(0, 2), 4.0);
        assert_eq!(z.weight(1, 2), 0.5);
        assert_eq!(zero_self_loops(&z), z);
    }

    #[test]
    fn zero_self_loops_fixed_point_and_emptying() {
        let net = build_network(3, &[(1, 2, 1.0)]).unwrap();
        assert_eq!(zero_self_loops(&net), net);
        let only_loop = build_network(2, &[(1, 1, 5.0)]).unwrap();
        assert!(zero_self_loops(&only_loop).is_empty());
    }

    fn nine_node_sample() -> NetworkSample {
        let nets = (0..4)
            .map(|t| {
                let edges: Vec<_> = (1..=9)
                    .flat_map(|i| (i..=9).map(move |j| (i, j, (i * j + t) as f64)))
                    .collect();
                build_network(9, &edges)
                    .unwrap()
                    .with_label(format!("n{t}"))
            })
            .collect();
        NetworkSample::new(nets).unwrap()
    }

    #[test]
    fn zero_edges_clears_listed_pairs() {
        let sample = nine_node_sample();
        let out = zero_edges(&sample, &[(3, 7), (1, 9)]).unwrap();
        for (before, after) in sample.networks().iter().zip(out.networks()) {
            for i in 0..9 {
                for j in 0..9 {
                    let listed = matches!((i + 1, j + 1), (3, 7) | (7, 3) | (1, 9) | (9, 1));
                    if listed {
                        assert_eq!(after.weight(i, j), 0.0);
                    } else {
                        assert_eq!(after.weight(i, j), before.weight(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn zero_edges_identities() {
        let sample = nine_node_sample();
        assert_eq!(zero_edges(&sample, &[]).unwrap(), sample);
        let once = zero_edges(&sample, &[(1, 2)]).unwrap();
        assert_eq!(zero_edges(&once, &[(1, 2)]).unwrap(), once);
        assert!(matches!(
            zero_edges(&sample, &[(1, 10)]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn sample_rejects_mixed_node_counts() {
        let a = Network::empty(3, "a").unwrap();
        let b = Network::empty(4, "b").unwrap();
        assert!(matches!(
            NetworkSample::new(vec![a, b]),
            Err(Error::InconsistentNodeCount { .. })
        ));
    }
}
