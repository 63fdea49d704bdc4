//! Synthetic two-group network populations and a replication harness that
//! scores the method and the naive baseline against the true split.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agglomerate::{cut_dendrogram, GroupAssignment};
use crate::error::{Error, Result};
use crate::graph::{Network, NetworkSample};
use crate::method::{cluster_sample, naive_cluster};
use crate::seed::derive_seed;
use crate::similarity::ari;

/// Finite discrete distribution on positive integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDist {
    pub support: Vec<u32>,
    pub probs: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(support: Vec<u32>, probs: Vec<f64>) -> Self {
        Self { support, probs }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        let bad = |msg: String| Error::InvalidProbability(format!("{name}: {msg}"));
        if self.support.is_empty() || self.support.len() != self.probs.len() {
            return Err(bad(format!(
                "{} support points, {} probabilities",
                self.support.len(),
                self.probs.len()
            )));
        }
        if self.support.contains(&0) {
            return Err(bad("support must be positive integers".into()));
        }
        if self.probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(bad("negative or non-finite probability".into()));
        }
        let total: f64 = self.probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(bad(format!("probabilities sum to {total}")));
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.probs)
            .map(|(&v, &p)| v as f64 * p)
            .sum()
    }
}

/// Population design: `n1` networks of group 1 followed by `n2` of group 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: u8,
    pub subscenario: u8,
    pub n: usize,
    #[serde(rename = "K")]
    pub node_count: usize,
    pub n1: usize,
    pub n2: usize,
    /// `X`, `Y` for scenario 1; `X1`, `X2`, `Y1`, `Y2` for scenario 2.
    pub distributions: BTreeMap<String, DiscreteDist>,
}

fn dist(support: &[u32], probs: &[f64]) -> DiscreteDist {
    DiscreteDist::new(support.to_vec(), probs.to_vec())
}

impl ScenarioSpec {
    /// The four reference designs (`n = 100`, `K = 30`, `n1 = n2 = 50`).
    pub fn reference(scenario: u8, subscenario: u8) -> Result<Self> {
        let mut d = BTreeMap::new();
        match (scenario, subscenario) {
            (1, 1) => {
                let p = [0.4, 0.3, 0.2, 0.1];
                d.insert("X".into(), dist(&[4, 5, 6, 7], &p));
                d.insert("Y".into(), dist(&[10, 11, 12, 13], &p));
            }
            (1, 2) => {
                let p = [0.1, 0.25, 0.3, 0.25, 0.1];
                d.insert("X".into(), dist(&[4, 5, 6, 7, 8], &p));
                d.insert("Y".into(), dist(&[5, 6, 7, 8, 9], &p));
            }
            (2, 1) => {
                d.insert("X1".into(), dist(&[10, 11, 12], &[0.46, 0.46, 0.08]));
                d.insert("X2".into(), dist(&[2, 3, 4], &[0.8, 0.1, 0.1]));
                d.insert("Y1".into(), dist(&[9, 10, 11], &[0.64, 0.18, 0.18]));
                d.insert("Y2".into(), dist(&[3, 4, 5], &[0.1, 0.1, 0.8]));
            }
            (2, 2) => {
                let high_first = [0.18, 0.18, 0.18, 0.18, 0.18, 0.10];
                let low_first = [0.10, 0.18, 0.18, 0.18, 0.18, 0.18];
                d.insert("X1".into(), dist(&[12, 13, 14, 15, 16, 17], &high_first));
                d.insert("X2".into(), dist(&[1, 2, 3, 4, 5, 6], &low_first));
                d.insert("Y1".into(), dist(&[11, 12, 13, 14, 15, 16], &low_first));
                d.insert("Y2".into(), dist(&[2, 3, 4, 5, 6, 7], &high_first));
            }
            _ => {
                return Err(Error::Invalid(format!(
                    "no reference design for scenario {scenario}.{subscenario}"
                )))
            }
        }
        Ok(Self {
            scenario,
            subscenario,
            n: 100,
            node_count: 30,
            n1: 50,
            n2: 50,
            distributions: d,
        })
    }

    fn required(&self) -> &'static [&'static str] {
        match self.scenario {
            1 => &["X", "Y"],
            _ => &["X1", "X2", "Y1", "Y2"],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.scenario, 1 | 2) || !matches!(self.subscenario, 1 | 2) {
            return Err(Error::Invalid(format!(
                "unknown scenario {}.{}",
                self.scenario, self.subscenario
            )));
        }
        if self.n1 + self.n2 != self.n || self.n1 == 0 || self.n2 == 0 {
            return Err(Error::Invalid(format!(
                "group sizes {} + {} != n = {}",
                self.n1, self.n2, self.n
            )));
        }
        if self.node_count < 2 {
            return Err(Error::NodeCount {
                min: 2,
                got: self.node_count,
            });
        }
        for name in self.required() {
            self.distributions
                .get(*name)
                .ok_or_else(|| Error::InvalidProbability(format!("missing distribution {name}")))?
                .validate(name)?;
        }
        Ok(())
    }

    pub fn truth(&self) -> GroupAssignment {
        let labels: Vec<usize> = (0..self.n)
            .map(|t| if t < self.n1 { 1 } else { 2 })
            .collect();
        GroupAssignment::from_labels(&labels)
    }
}

/// Edge class in scenario 2, for 1-based labels `i != j`: class 1 joins two
/// even nodes or an even node with an odd node in the lower half of the
/// labels; class 2 is everything else.
pub fn edge_class(i: usize, j: usize, node_count: usize) -> u8 {
    let (even_i, even_j) = (i % 2 == 0, j % 2 == 0);
    match (even_i, even_j) {
        (true, true) => 1,
        (false, false) => 2,
        _ => {
            let odd = if even_i { j } else { i };
            if odd <= node_count / 2 {
                1
            } else {
                2
            }
        }
    }
}

struct Sampler {
    values: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl Sampler {
    fn new(d: &DiscreteDist) -> Result<Self> {
        let index =
            WeightedIndex::new(&d.probs).map_err(|e| Error::InvalidProbability(e.to_string()))?;
        Ok(Self {
            values: d.support.iter().map(|&v| v as f64).collect(),
            index,
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        self.values[self.index.sample(rng)]
    }
}

/// Draws one population. Off-diagonal weights only; no self-loops.
pub fn generate_scenario(
    spec: &ScenarioSpec,
    seed: u64,
) -> Result<(NetworkSample, GroupAssignment)> {
    spec.validate()?;
    let k = spec.node_count;
    let get = |name: &str| Sampler::new(&spec.distributions[name]);
    // (class 1, class 2) sampler per group
    let groups: [(Sampler, Sampler); 2] = match spec.scenario {
        1 => [(get("X")?, get("X")?), (get("Y")?, get("Y")?)],
        _ => [(get("X1")?, get("X2")?), (get("Y1")?, get("Y2")?)],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut networks = Vec::with_capacity(spec.n);
    for t in 0..spec.n {
        let group = usize::from(t >= spec.n1);
        let (class1, class2) = &groups[group];
        let mut weights = vec![0.0; k * k];
        for i in 0..k {
            for j in i + 1..k {
                let w = if edge_class(i + 1, j + 1, k) == 1 {
                    class1.draw(&mut rng)
                } else {
                    class2.draw(&mut rng)
                };
                weights[i * k + j] = w;
                weights[j * k + i] = w;
            }
        }
        networks.push(Network::from_matrix(
            k,
            weights,
            format!("g{}_{}", group + 1, t + 1),
        )?);
    }
    Ok((NetworkSample::new(networks)?, spec.truth()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    Method,
    Naive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRow {
    pub replication: usize,
    pub method: Approach,
    /// `None` for the naive baseline.
    pub alpha: Option<f64>,
    pub ari: f64,
}

/// Five-number summary plus the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

impl FiveNumber {
    /// Quartiles by linear interpolation between order statistics.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let h = (v.len() - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            v[lo] + (h - lo as f64) * (v[hi] - v[lo])
        };
        Some(Self {
            min: v[0],
            q1: q(0.25),
            median: q(0.5),
            q3: q(0.75),
            max: v[v.len() - 1],
            mean: v.iter().sum::<f64>() / v.len() as f64,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub method: Approach,
    pub alpha: Option<f64>,
    #[serde(flatten)]
    pub stats: FiveNumber,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkResult {
    pub spec: ScenarioSpec,
    pub alphas: Vec<f64>,
    pub replications: usize,
    pub seed: u64,
    pub groups: usize,
    pub rows: Vec<ReplicationRow>,
}

impl BenchmarkResult {
    pub fn aris(&self, method: Approach, alpha: Option<f64>) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.method == method && r.alpha == alpha)
            .map(|r| r.ari)
            .collect()
    }

    pub fn method_aris(&self, alpha: f64) -> Vec<f64> {
        self.aris(Approach::Method, Some(alpha))
    }

    pub fn naive_aris(&self) -> Vec<f64> {
        self.aris(Approach::Naive, None)
    }

    pub fn summaries(&self) -> Vec<CellSummary> {
        let mut cells: Vec<(Approach, Option<f64>)> = self
            .alphas
            .iter()
            .map(|&a| (Approach::Method, Some(a)))
            .collect();
        cells.push((Approach::Naive, None));
        cells
            .into_iter()
            .filter_map(|(method, alpha)| {
                FiveNumber::of(&self.aris(method, alpha)).map(|stats| CellSummary {
                    method,
                    alpha,
                    stats,
                })
            })
            .collect()
    }

    pub fn median(&self, method: Approach, alpha: Option<f64>) -> f64 {
        FiveNumber::of(&self.aris(method, alpha)).map_or(f64::NAN, |s| s.median)
    }
}

/// Runs `replications` independent populations. Replication `r` draws its
/// data from `derive_seed(seed, [r, 0])`; the method at the `a`-th alpha uses
/// `[r, 1, a]` and the baseline `[r, 2]`, so results are identical for any
/// thread count. Every dendrogram is cut at `groups` groups and scored by
/// ARI against the true split.
pub fn run_replications(
    spec: &ScenarioSpec,
    alphas: &[f64],
    replications: usize,
    seed: u64,
    groups: usize,
) -> Result<BenchmarkResult> {
    spec.validate()?;
    if replications < 1 {
        return Err(Error::Invalid(
            "at least one replication is required".into(),
        ));
    }
    if let Some(&a) = alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(Error::InvalidAlpha(a));
    }
    let per_rep: Vec<Vec<ReplicationRow>> = (0..replications)
        .into_par_iter()
        .map(|r| -> Result<Vec<ReplicationRow>> {
            let rr = r as u64;
            let (sample, truth) = generate_scenario(spec, derive_seed(seed, &[rr, 0]))?;
            let truth = truth.as_partition();
            let mut rows = Vec::with_capacity(alphas.len() + 1);
            for (a, &alpha) in alphas.iter().enumerate() {
                let out = cluster_sample(&sample, alpha, derive_seed(seed, &[rr, 1, a as u64]))?;
                let cut = cut_dendrogram(&out.history, groups)?;
                rows.push(ReplicationRow {
                    replication: r + 1,
                    method: Approach::Method,
                    alpha: Some(alpha),
                    ari: ari(&cut.as_partition(), &truth)?,
                });
            }
            let out = naive_cluster(&sample, derive_seed(seed, &[rr, 2]))?;
            let cut = cut_dendrogram(&out.history, groups)?;
            rows.push(ReplicationRow {
                replication: r + 1,
                method: Approach::Naive,
                alpha: None,
                ari: ari(&cut.as_partition(), &truth)?,
            });
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(BenchmarkResult {
        spec: spec.clone(),
        alphas: alphas.to_vec(),
        replications,
        seed,
        groups,
        rows: per_rep.into_iter().flatten().collect(),
    })
}

/// `replication,method,alpha,ari`; `alpha` is empty for the baseline.
pub fn write_rows<W: std::io::Write>(result: &BenchmarkResult, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in &result.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: std::io::Read>(reader: R) -> Result<Vec<ReplicationRow>> {
    let mut r = csv::Reader::from_reader(reader);
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSummary {
    pub scenario: u8,
    pub subscenario: u8,
    pub replications: usize,
    pub seed: u64,
    pub groups: usize,
    pub cells: Vec<CellSummary>,
}

impl From<&BenchmarkResult> for BenchmarkSummary {
    fn from(r: &BenchmarkResult) -> Self {
        Self {
            scenario: r.spec.scenario,
            subscenario: r.spec.subscenario,
            replications: r.replications,
            seed: r.seed,
            groups: r.groups,
            cells: r.summaries(),
        }
    }
}
