//! End-to-end clustering run with on-disk artifacts.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tracing::info;

use crate::agglomerate::{
    co_membership_rates, count_perfect_merges, cut_dendrogram, merge_similarity_profile,
    CoMembership, GroupAssignment, MergeProfile,
};
use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::{zero_edges, NetworkSample};
use crate::io;
use crate::method::{cluster_sample, ClusterOutcome};
use crate::pitch::PitchGrid;

/// Edges zeroed before preprocessing unless configured otherwise.
pub const DEFAULT_ZERO_EDGES: [(usize, usize); 2] = [(3, 7), (1, 9)];

/// Settings for [`run_pipeline`]. Every field has a default, so a JSON
/// config may list only what it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub alpha: f64,
    /// 1-based node pairs set to zero in every network before preprocessing.
    pub zero_edges: Vec<(usize, usize)>,
    /// Cut the dendrogram into this many groups.
    pub groups: Option<usize>,
    pub seed: u64,
    /// Worker threads; `None` leaves the choice to rayon.
    pub threads: Option<usize>,
    pub grid: PitchGrid,
    /// Sample CSV (`network_id,i,j,weight`).
    pub input: Option<PathBuf>,
    /// Manifest JSON; defaults to the input path with a `.json` extension.
    pub manifest: Option<PathBuf>,
    pub output: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            alpha: 0.95,
            zero_edges: DEFAULT_ZERO_EDGES.to_vec(),
            groups: None,
            seed: 0,
            threads: None,
            grid: PitchGrid::default(),
            input: None,
            manifest: None,
            output: PathBuf::from("out"),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidAlpha(self.alpha));
        }
        if self.threads == Some(0) {
            return Err(Error::Invalid("thread budget must be at least 1".into()));
        }
        Ok(())
    }

    pub fn manifest_path(&self) -> Option<PathBuf> {
        self.manifest
            .clone()
            .or_else(|| self.input.as_ref().map(|p| p.with_extension("json")))
    }
}

/// Parses `"3-7,1-9"` into pairs.
pub fn parse_edge_list(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let bad = || Error::Invalid(format!("edge `{p}` is not of the form i-j"));
            let (i, j) = p.split_once('-').ok_or_else(bad)?;
            Ok((
                i.trim().parse().map_err(|_| bad())?,
                j.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

/// Runs `f` on a rayon pool of `threads` workers, or on the global pool.
pub fn with_thread_budget<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Invalid(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Co-membership tables of one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTables {
    pub group: usize,
    pub members: Vec<String>,
    pub pairs: Vec<CoMembership>,
    pub triples: Vec<CoMembership>,
}

/// Scalar diagnostics of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub networks: usize,
    pub alpha: f64,
    pub seed: u64,
    pub perfect_merges: usize,
    pub groups: Option<usize>,
    pub similarity_at_cut: Option<f64>,
}

/// In-memory result of a pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineArtifacts {
    pub ids: Vec<String>,
    pub outcome: ClusterOutcome,
    pub profile: MergeProfile,
    pub groups: Option<GroupAssignment>,
    pub tables: Vec<GroupTables>,
    pub summary: RunSummary,
}

/// Per-group pair and triple co-membership rates of the partitions.
pub fn characterize_groups(
    ids: &[String],
    partitions: &[Partition],
    groups: &GroupAssignment,
) -> Result<Vec<GroupTables>> {
    if partitions.len() != groups.len() || ids.len() != groups.len() {
        return Err(Error::LengthMismatch(partitions.len(), groups.len()));
    }
    groups
        .members()
        .into_iter()
        .enumerate()
        .map(|(g, members)| {
            let parts: Vec<Partition> = members.iter().map(|&i| partitions[i].clone()).collect();
            Ok(GroupTables {
                group: g + 1,
                members: members.iter().map(|&i| ids[i].clone()).collect(),
                pairs: co_membership_rates(&parts, 2)?,
                triples: co_membership_rates(&parts, 3)?,
            })
        })
        .collect()
}

/// Clusters an in-memory sample according to `config` (paths are ignored).
pub fn cluster_with_config(
    sample: &NetworkSample,
    config: &PipelineConfig,
) -> Result<PipelineArtifacts> {
    config.validate()?;
    with_thread_budget(config.threads, || {
        let zeroed = zero_edges(sample, &config.zero_edges)?;
        info!(
            step = "zero_edges",
            pairs = config.zero_edges.len(),
            "configured edges removed"
        );
        let outcome = cluster_sample(&zeroed, config.alpha, config.seed)?;
        let profile = merge_similarity_profile(&outcome.history);
        let perfect_merges = count_perfect_merges(&outcome.history);
        info!(
            step = "diagnostics",
            perfect_merges, "merge profile computed"
        );
        let ids: Vec<String> = sample.labels().map(str::to_string).collect();
        let groups = match config.groups {
            Some(g) => Some(cut_dendrogram(&outcome.history, g)?),
            None => None,
        };
        let tables = match &groups {
            Some(g) => characterize_groups(&ids, &outcome.partitions, g)?,
            None => Vec::new(),
        };
        let summary = RunSummary {
            networks: sample.len(),
            alpha: config.alpha,
            seed: config.seed,
            perfect_merges,
            groups: config.groups,
            similarity_at_cut: config.groups.and_then(|g| profile.similarity_at_cut(g)),
        };
        Ok(PipelineArtifacts {
            ids,
            outcome,
            profile,
            groups,
            tables,
            summary,
        })
    })?
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes every artifact of a run into `dir`.
pub fn write_artifacts(artifacts: &PipelineArtifacts, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let a = artifacts;
    io::save_sample(
        &a.outcome.processed,
        &dir.join("processed.csv"),
        &dir.join("processed.json"),
    )?;
    io::write_partitions(
        &a.ids,
        &a.outcome.partitions,
        create(&dir.join("partitions.csv"))?,
    )?;
    io::write_similarity(
        &a.ids,
        &a.outcome.similarity,
        create(&dir.join("similarity.csv"))?,
    )?;
    io::write_history(&a.outcome.history, create(&dir.join("merge_history.json"))?)?;
    io::write_profile(&a.profile, create(&dir.join("merge_profile.csv"))?)?;
    io::write_json(&a.summary, &dir.join("summary.json"))?;
    if let Some(groups) = &a.groups {
        io::write_groups(&a.ids, groups, create(&dir.join("groups.csv"))?)?;
        write_tables(&a.tables, dir)?;
    }
    Ok(())
}

/// Writes `co_membership/group_<g>_{pairs,triples}.csv`.
pub fn write_tables(tables: &[GroupTables], dir: &Path) -> Result<()> {
    let sub = dir.join("co_membership");
    fs::create_dir_all(&sub)?;
    for t in tables {
        io::write_co_membership(
            &t.pairs,
            create(&sub.join(format!("group_{}_pairs.csv", t.group)))?,
        )?;
        io::write_co_membership(
            &t.triples,
            create(&sub.join(format!("group_{}_triples.csv", t.group)))?,
        )?;
    }
    Ok(())
}

/// Loads the configured sample, clusters it and writes the artifacts.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineArtifacts> {
    let input = config
        .input
        .as_ref()
        .ok_or_else(|| Error::Invalid("no input sample given".into()))?;
    let manifest = config.manifest_path().expect("input is set");
    let sample = io::load_sample(input, &manifest)?;
    let artifacts = cluster_with_config(&sample, config)?;
    write_artifacts(&artifacts, &config.output)?;
    info!(output = %config.output.display(), "artifacts written");
    Ok(artifacts)
}
