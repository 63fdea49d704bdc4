//! Weighted modularity and a deterministic Louvain implementation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Network;

/// Gains closer than this are treated as equal.
pub const GAIN_TOLERANCE: f64 = 1e-12;

/// Community assignment of the `K` nodes of one network.
///
/// Ids are contiguous `1..=community_count()` and numbered by first
/// appearance, so two partitions that agree up to relabeling compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
}

impl Partition {
    /// Canonicalizes arbitrary community labels.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = seen.len() + 1;
                *seen.entry(l.clone()).or_insert(next)
            })
            .collect();
        Self { assignment }
    }

    /// Accepts an assignment already using ids `1..=C` without gaps.
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let max = assignment.iter().copied().max().unwrap_or(0);
        let mut present = vec![false; max + 1];
        for &c in &assignment {
            if c == 0 {
                return Err(Error::InvalidPartition("community ids start at 1".into()));
            }
            present[c] = true;
        }
        if present.iter().skip(1).any(|p| !p) {
            return Err(Error::InvalidPartition(format!(
                "ids are not contiguous 1..={max}"
            )));
        }
        Ok(Self::from_labels(&assignment))
    }

    pub fn singletons(node_count: usize) -> Self {
        Self {
            assignment: (1..=node_count).collect(),
        }
    }

    pub fn single_block(node_count: usize) -> Self {
        Self {
            assignment: vec![1; node_count],
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.assignment.iter().copied().max().unwrap_or(0)
    }

    /// Community id of node `i` (0-based).
    pub fn community_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    /// Members of each community, 0-based node indices.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.community_count()];
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c - 1].push(node);
        }
        out
    }
}

/// Newman-Girvan weighted modularity at resolution 1.
///
/// Self-loops count once toward the total weight and twice toward the
/// strength of their node.
pub fn modularity(net: &Network, part: &Partition) -> Result<f64> {
    let k = net.node_count();
    if part.len() != k {
        return Err(Error::LengthMismatch(part.len(), k));
    }
    let m = net.total_weight();
    if m <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let c = part.community_count();
    let mut internal = vec![0.0; c];
    let mut strength = vec![0.0; c];
    for i in 0..k {
        let ci = part.community_of(i) - 1;
        for j in 0..k {
            let w = net.weight(i, j);
            strength[ci] += if i == j { 2.0 * w } else { w };
            if j >= i && part.community_of(j) - 1 == ci {
                internal[ci] += w;
            }
        }
    }
    Ok(internal
        .iter()
        .zip(&strength)
        .map(|(&e, &a)| e / m - (a / (2.0 * m)).powi(2))
        .sum())
}

/// Dense working graph for one Louvain level. The diagonal holds internal
/// weight counted once.
struct Level {
    n: usize,
    adj: Vec<f64>,
}

impl Level {
    fn strength(&self, i: usize) -> f64 {
        let row = &self.adj[i * self.n..(i + 1) * self.n];
        row.iter().sum::<f64>() + row[i]
    }

    fn aggregate(&self, comm: &[usize], count: usize) -> Level {
        let mut adj = vec![0.0; count * count];
        for i in 0..self.n {
            for j in i..self.n {
                let w = self.adj[i * self.n + j];
                if w == 0.0 {
                    continue;
                }
                let (a, b) = (comm[i], comm[j]);
                if a == b {
                    adj[a * count + a] += w;
                } else {
                    adj[a * count + b] += w;
                    adj[b * count + a] += w;
                }
            }
        }
        Level { n: count, adj }
    }
}

/// Louvain community detection.
///
/// Nodes are visited in ascending order; `seed` only decides between
/// candidate communities whose gains tie within [`GAIN_TOLERANCE`]. A move is
/// made only when it beats staying put by more than the tolerance. Nodes with
/// zero strength stay singletons, and an all-zero network yields all
/// singletons.
pub fn louvain(net: &Network, seed: u64) -> Partition {
    let k = net.node_count();
    let m = net.total_weight();
    if m <= 0.0 {
        return Partition::singletons(k);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = Level {
        n: k,
        adj: net.matrix().to_vec(),
    };
    // original node -> node of the current level
    let mut membership: Vec<usize> = (0..k).collect();

    loop {
        let comm = local_moves(&level, m, &mut rng);
        let (comm, count) = renumber(&comm);
        if count == level.n {
            break;
        }
        for slot in membership.iter_mut() {
            *slot = comm[*slot];
        }
        level = level.aggregate(&comm, count);
    }
    Partition::from_labels(&membership)
}

fn local_moves(level: &Level, m: f64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = level.n;
    let strength: Vec<f64> = (0..n).map(|i| level.strength(i)).collect();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut total = strength.clone();
    let mut links = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::with_capacity(n);
    let mut candidates: Vec<usize> = Vec::with_capacity(n);
    let two_m_sq = 2.0 * m * m;

    loop {
        let mut moved = false;
        for i in 0..n {
            let ki = strength[i];
            if ki == 0.0 {
                continue;
            }
            let ci = comm[i];
            touched.clear();
            touched.push(ci);
            links[ci] = 0.0;
            let row = &level.adj[i * n..(i + 1) * n];
            for (j, &w) in row.iter().enumerate() {
                if j == i || w == 0.0 {
                    continue;
                }
                let c = comm[j];
                if !touched.contains(&c) {
                    touched.push(c);
                    links[c] = 0.0;
                }
                links[c] += w;
            }
            total[ci] -= ki;

            let gain = |c: usize| links[c] / m - total[c] * ki / two_m_sq;
            let best = touched
                .iter()
                .map(|&c| gain(c))
                .fold(f64::NEG_INFINITY, f64::max);
            let target = if gain(ci) >= best - GAIN_TOLERANCE {
                ci
            } else {
                candidates.clear();
                candidates.extend(
                    touched
                        .iter()
                        .copied()
                        .filter(|&c| gain(c) >= best - GAIN_TOLERANCE),
                );
                candidates.sort_unstable();
                if candidates.len() == 1 {
                    candidates[0]
                } else {
                    candidates[rng.gen_range(0..candidates.len())]
                }
            };
            total[target] += ki;
            if target != ci {
                comm[i] = target;
                moved = true;
            }
        }
        if !moved {
            return comm;
        }
    }
}

fn renumber(comm: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; comm.len()];
    let mut next = 0;
    let out = comm
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect();
    (out, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_network;

    fn two_cliques() -> Network {
        let mut edges = vec![];
        for (a, b) in [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)] {
            edges.push((a, b, 1.0));
        }
        edges.push((3, 4, 0.1));
        build_network(6, &edges).unwrap()
    }

    #[test]
    fn single_edge_modularity() {
        let net = build_network(2, &[(1, 2, 1.0)]).unwrap();
        let together = Partition::single_block(2);
        let split = Partition::singletons(2);
        assert!((modularity(&net, &together).unwrap() - 0.0).abs() < 1e-15);
        assert!((modularity(&net, &split).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn one_block_has_zero_modularity() {
        let q = modularity(&two_cliques(), &Partition::single_block(6)).unwrap();
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn modularity_rejects_empty_network() {
        let net = Network::empty(3, "").unwrap();
        assert!(matches!(
            modularity(&net, &Partition::singletons(3)),
            Err(Error::ZeroTotalWeight)
        ));
        let net = two_cliques();
        assert!(matches!(
            modularity(&net, &Partition::singletons(3)),
            Err(Error::LengthMismatch(3, 6))
        ));
    }

    #[test]
    fn self_loop_counts_twice_in_strength() {
        // loop on node 1 (w=1) plus edge 1-2 (w=1): m = 2, strengths (3, 1)
        let net = build_network(2, &[(1, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let q = modularity(&net, &Partition::singletons(2)).unwrap();
        let expected = 1.0 / 2.0 - (3.0f64 / 4.0).powi(2) - (1.0f64 / 4.0).powi(2);
        assert!((q - expected).abs() < 1e-15);
    }

    #[test]
    fn louvain_splits_two_cliques() {
        let p = louvain(&two_cliques(), 7);
        assert_eq!(p.assignment(), &[1, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn louvain_keeps_complete_graph_whole() {
        let edges: Vec<_> = (1..=4)
            .flat_map(|i| (i + 1..=4).map(move |j| (i, j, 1.0)))
            .collect();
        let net = build_network(4, &edges).unwrap();
        assert_eq!(louvain(&net, 0), Partition::single_block(4));
    }

    #[test]
    fn louvain_on_empty_network_gives_singletons() {
        let net = Network::empty(5, "").unwrap();
        assert_eq!(louvain(&net, 3), Partition::singletons(5));
    }

    #[test]
    fn isolated_nodes_are_singletons() {
        let net = build_network(5, &[(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)]).unwrap();
        let p = louvain(&net, 1);
        assert_eq!(p.assignment(), &[1, 1, 1, 2, 3]);
    }

    #[test]
    fn partition_canonical_form() {
        let p = Partition::from_labels(&[7, 7, 3, 9, 3]);
        assert_eq!(p.assignment(), &[1, 1, 2, 3, 2]);
        assert_eq!(p.community_count(), 3);
        assert_eq!(p.communities(), vec![vec![0, 1], vec![2, 4], vec![3]]);
        assert!(Partition::new(vec![1, 3]).is_err());
        assert!(Partition::new(vec![0, 1]).is_err());
        assert_eq!(
            Partition::new(vec![2, 1, 2]).unwrap().assignment(),
            &[1, 2, 1]
        );
    }
}
