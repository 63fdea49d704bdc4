//! Average-linkage (UPGMA) agglomeration on a similarity matrix, dendrogram
//! cuts, and group characterization.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::similarity::SimilarityMatrix;

/// One agglomeration. Leaves are `1..=n`; the group created at step `s`
/// (0-based) gets id `n + s + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeStep {
    pub left: usize,
    pub right: usize,
    pub new: usize,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeHistory {
    leaves: usize,
    steps: Vec<MergeStep>,
}

impl MergeHistory {
    /// Validates ids and the non-increasing similarity sequence.
    pub fn new(leaves: usize, steps: Vec<MergeStep>) -> Result<Self> {
        if leaves < 1 || steps.len() != leaves - 1 {
            return Err(Error::Invalid(format!(
                "{} steps for {} leaves",
                steps.len(),
                leaves
            )));
        }
        let mut consumed = vec![false; 2 * leaves];
        for (s, step) in steps.iter().enumerate() {
            let expected = leaves + s + 1;
            if step.new != expected {
                return Err(Error::Invalid(format!(
                    "step {} creates id {}, expected {}",
                    s + 1,
                    step.new,
                    expected
                )));
            }
            for id in [step.left, step.right] {
                if id == 0 || id >= expected || consumed[id] {
                    return Err(Error::Invalid(format!(
                        "step {} merges unavailable group {}",
                        s + 1,
                        id
                    )));
                }
                consumed[id] = true;
            }
            if step.left == step.right {
                return Err(Error::Invalid(format!(
                    "step {} merges a group with itself",
                    s + 1
                )));
            }
        }
        if steps.windows(2).any(|w| w[1].similarity > w[0].similarity) {
            return Err(Error::Invalid("merge similarities increase".into()));
        }
        Ok(Self { leaves, steps })
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn steps(&self) -> &[MergeStep] {
        &self.steps
    }

    pub fn similarities(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.similarity).collect()
    }
}

/// Average-linkage agglomeration on similarities.
///
/// At every step the pair of groups with the highest mean cross similarity is
/// merged. Pairs whose stored similarity equals the maximum exactly are
/// candidates, and one is drawn uniformly with an RNG seeded from `seed`.
pub fn upgma_cluster(sim: &SimilarityMatrix, seed: u64) -> MergeHistory {
    let n = sim.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // slot-indexed group similarity; slot i starts as leaf i
    let mut s: Vec<f64> = sim.values().to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    let mut ids: Vec<usize> = (1..=n).collect();
    let mut sizes = vec![1usize; n];
    let mut steps = Vec::with_capacity(n.saturating_sub(1));
    let mut ties: Vec<(usize, usize)> = Vec::new();

    while active.len() > 1 {
        let mut best = f64::NEG_INFINITY;
        ties.clear();
        for (ai, &a) in active.iter().enumerate() {
            for &b in &active[ai + 1..] {
                let v = s[a * n + b];
                if v > best {
                    best = v;
                    ties.clear();
                    ties.push((a, b));
                } else if v == best {
                    ties.push((a, b));
                }
            }
        }
        let (a, b) = if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.gen_range(0..ties.len())]
        };

        let new_id = n + steps.len() + 1;
        steps.push(MergeStep {
            left: ids[a].min(ids[b]),
            right: ids[a].max(ids[b]),
            new: new_id,
            similarity: best,
        });

        // merged group lives in slot a
        let (wa, wb) = (sizes[a] as f64, sizes[b] as f64);
        for &c in &active {
            if c == a || c == b {
                continue;
            }
            let (sa, sb) = (s[a * n + c], s[b * n + c]);
            // a size-weighted mean never leaves [min, max] of its inputs
            let v = ((wa * sa + wb * sb) / (wa + wb)).clamp(sa.min(sb), sa.max(sb));
            s[a * n + c] = v;
            s[c * n + a] = v;
        }
        sizes[a] += sizes[b];
        ids[a] = new_id;
        active.retain(|&x| x != b);
    }
    MergeHistory { leaves: n, steps }
}

/// Assignment of the `n` networks to `group_count` groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAssignment {
    groups: Vec<usize>,
    group_count: usize,
}

impl GroupAssignment {
    /// Canonicalizes arbitrary group labels (ids by first appearance).
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let p = Partition::from_labels(labels);
        let group_count = p.community_count();
        Self {
            groups: p.assignment().to_vec(),
            group_count,
        }
    }

    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    pub fn group_count(&self) -> usize {
        self.group_count
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// 0-based member indices of each group.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.group_count];
        for (t, &g) in self.groups.iter().enumerate() {
            out[g - 1].push(t);
        }
        out
    }

    /// Same assignment viewed as a partition, for scoring with ARI.
    pub fn as_partition(&self) -> Partition {
        Partition::from_labels(&self.groups)
    }
}

/// Undoes the last `n_groups - 1` merges.
pub fn cut_dendrogram(history: &MergeHistory, n_groups: usize) -> Result<GroupAssignment> {
    let n = history.leaves;
    if n_groups < 1 || n_groups > n {
        return Err(Error::GroupCountOutOfRange {
            groups: n_groups,
            n,
        });
    }
    // union-find over all 2n-1 ids, 1-based
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for step in &history.steps[..n - n_groups] {
        let l = find(&mut parent, step.left);
        let r = find(&mut parent, step.right);
        parent[l] = step.new;
        parent[r] = step.new;
    }
    let roots: Vec<usize> = (1..=n).map(|leaf| find(&mut parent, leaf)).collect();
    Ok(GroupAssignment::from_labels(&roots))
}

/// Merge similarities per step and the drops between successive steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeProfile {
    pub similarities: Vec<f64>,
    /// `drops[s] = similarities[s] - similarities[s + 1]`
    pub drops: Vec<f64>,
}

impl MergeProfile {
    /// Similarity of the merge that would reduce `groups` groups to `groups - 1`.
    pub fn similarity_at_cut(&self, groups: usize) -> Option<f64> {
        let n = self.similarities.len() + 1;
        if groups < 2 || groups > n {
            return None;
        }
        self.similarities.get(n - groups).copied()
    }
}

pub fn merge_similarity_profile(history: &MergeHistory) -> MergeProfile {
    let similarities = history.similarities();
    let drops = similarities.windows(2).map(|w| w[0] - w[1]).collect();
    MergeProfile {
        similarities,
        drops,
    }
}

/// Number of merges performed at similarity exactly 1.
pub fn count_perfect_merges(history: &MergeHistory) -> usize {
    history.steps.iter().filter(|s| s.similarity == 1.0).count()
}

/// Share of partitions in which a node tuple sits in one community.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoMembership {
    /// 1-based node labels, ascending.
    pub nodes: Vec<usize>,
    /// Fraction in `[0, 1]`.
    pub rate: f64,
}

/// For every pair (`order == 2`) or triple (`order == 3`) of nodes, the
/// fraction of `partitions` placing all its members in one community.
pub fn co_membership_rates(partitions: &[Partition], order: usize) -> Result<Vec<CoMembership>> {
    let first = partitions.first().ok_or(Error::EmptyGroup)?;
    let k = first.len();
    if let Some(bad) = partitions.iter().find(|p| p.len() != k) {
        return Err(Error::InconsistentNodeCount {
            expected: k,
            found: bad.len(),
        });
    }
    let tuples: Vec<Vec<usize>> = match order {
        2 => (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| vec![i, j]))
            .collect(),
        3 => (0..k)
            .flat_map(|i| (i + 1..k).flat_map(move |j| (j + 1..k).map(move |l| vec![i, j, l])))
            .collect(),
        _ => {
            return Err(Error::Invalid(format!(
                "co-membership order must be 2 or 3, got {order}"
            )))
        }
    };
    let total = partitions.len() as f64;
    Ok(tuples
        .into_iter()
        .map(|tuple| {
            let hits = partitions
                .iter()
                .filter(|p| same_community(p, &tuple))
                .count();
            CoMembership {
                nodes: tuple.iter().map(|i| i + 1).collect(),
                rate: hits as f64 / total,
            }
        })
        .collect())
}

/// Fraction of partitions that contain at least one of the given node
/// tuples (1-based labels) as co-members.
pub fn at_least_one_rate(partitions: &[Partition], tuples: &[Vec<usize>]) -> Result<f64> {
    let first = partitions.first().ok_or(Error::EmptyGroup)?;
    for tuple in tuples {
        for &node in tuple {
            if node == 0 || node > first.len() {
                return Err(Error::IndexOutOfRange {
                    index: node,
                    node_count: first.len(),
                });
            }
        }
    }
    let zero_based: Vec<Vec<usize>> = tuples
        .iter()
        .map(|t| t.iter().map(|i| i - 1).collect())
        .collect();
    let hits = partitions
        .iter()
        .filter(|p| zero_based.iter().any(|t| same_community(p, t)))
        .count();
    Ok(hits as f64 / partitions.len() as f64)
}

fn same_community(p: &Partition, nodes: &[usize]) -> bool {
    let c = p.community_of(nodes[0]);
    nodes[1..].iter().all(|&i| p.community_of(i) == c)
}
