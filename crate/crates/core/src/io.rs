//! Readers and writers for the on-disk artifacts.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! artifact reads back bit-identical.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::agglomerate::{CoMembership, GroupAssignment, MergeHistory, MergeProfile, MergeStep};
use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::{build_network, Network, NetworkSample};
use crate::pitch::{EventCategory, EventRecord};
use crate::scoremodel::{format_day, parse_day, DateFormat, MatchRecord, ProfileResult};
use crate::similarity::SimilarityMatrix;

/// Sidecar manifest describing the node set of a sample CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleManifest {
    #[serde(rename = "K")]
    pub node_count: usize,
    pub labels: Vec<String>,
    /// Network ids in sample order. Networks without edges appear only here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub networks: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRow {
    network_id: String,
    i: usize,
    j: usize,
    weight: f64,
}

pub fn write_sample<W: Write>(sample: &NetworkSample, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let k = sample.node_count();
    for net in sample.networks() {
        for i in 0..k {
            for j in i..k {
                let weight = net.weight(i, j);
                if weight != 0.0 {
                    w.serialize(EdgeRow {
                        network_id: net.label().to_string(),
                        i: i + 1,
                        j: j + 1,
                        weight,
                    })?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn manifest_of(sample: &NetworkSample) -> SampleManifest {
    SampleManifest {
        node_count: sample.node_count(),
        labels: sample.node_labels().to_vec(),
        networks: Some(sample.labels().map(str::to_string).collect()),
    }
}

/// Reads a sample CSV. Duplicate rows for one pair are summed.
pub fn read_sample<R: Read>(reader: R, manifest: &SampleManifest) -> Result<NetworkSample> {
    let mut order: Vec<String> = manifest.networks.clone().unwrap_or_default();
    let mut index: HashMap<String, usize> = order
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, id)| (id, i))
        .collect();
    let mut edges: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); order.len()];
    let mut r = csv::Reader::from_reader(reader);
    for row in r.deserialize() {
        let row: EdgeRow = row?;
        let slot = match index.get(&row.network_id) {
            Some(&s) => s,
            None if manifest.networks.is_some() => {
                return Err(Error::Invalid(format!(
                    "network `{}` missing from manifest",
                    row.network_id
                )))
            }
            None => {
                index.insert(row.network_id.clone(), order.len());
                order.push(row.network_id.clone());
                edges.push(Vec::new());
                order.len() - 1
            }
        };
        edges[slot].push((row.i, row.j, row.weight));
    }
    let networks: Vec<Network> = order
        .iter()
        .zip(&edges)
        .map(|(id, e)| build_network(manifest.node_count, e).map(|n| n.with_label(id.clone())))
        .collect::<Result<_>>()?;
    NetworkSample::with_node_labels(networks, manifest.labels.clone())
}

pub fn save_sample(sample: &NetworkSample, csv_path: &Path, manifest_path: &Path) -> Result<()> {
    write_sample(sample, File::create(csv_path)?)?;
    write_json(&manifest_of(sample), manifest_path)
}

pub fn load_sample(csv_path: &Path, manifest_path: &Path) -> Result<NetworkSample> {
    let manifest: SampleManifest = read_json(manifest_path)?;
    read_sample(File::open(csv_path)?, &manifest)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(File::open(path)?)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct PartitionRow {
    network_id: String,
    node: usize,
    community: usize,
}

pub fn write_partitions<W: Write>(
    ids: &[String],
    partitions: &[Partition],
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (id, p) in ids.iter().zip(partitions) {
        for (node, &community) in p.assignment().iter().enumerate() {
            w.serialize(PartitionRow {
                network_id: id.clone(),
                node: node + 1,
                community,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_partitions<R: Read>(reader: R) -> Result<(Vec<String>, Vec<Partition>)> {
    let mut ids: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut r = csv::Reader::from_reader(reader);
    for row in r.deserialize() {
        let row: PartitionRow = row?;
        if ids.last() != Some(&row.network_id) {
            ids.push(row.network_id.clone());
            rows.push(Vec::new());
        }
        rows.last_mut()
            .expect("pushed above")
            .push((row.node, row.community));
    }
    let partitions = rows
        .into_iter()
        .map(|mut r| {
            r.sort_unstable();
            if r.iter().enumerate().any(|(i, &(node, _))| node != i + 1) {
                return Err(Error::InvalidPartition(
                    "nodes must be listed 1..=K once each".into(),
                ));
            }
            Partition::new(r.into_iter().map(|(_, c)| c).collect())
        })
        .collect::<Result<_>>()?;
    Ok((ids, partitions))
}

/// Full `n x n` matrix with a header row and a leading id column.
pub fn write_similarity<W: Write>(ids: &[String], sim: &SimilarityMatrix, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["network_id".to_string()];
    header.extend(ids.iter().cloned());
    w.write_record(&header)?;
    for (i, id) in ids.iter().enumerate() {
        let mut row = vec![id.clone()];
        row.extend((0..sim.len()).map(|j| sim.get(i, j).to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_similarity<R: Read>(reader: R) -> Result<(Vec<String>, SimilarityMatrix)> {
    let mut r = csv::Reader::from_reader(reader);
    let ids: Vec<String> = r.headers()?.iter().skip(1).map(str::to_string).collect();
    let mut values = Vec::with_capacity(ids.len() * ids.len());
    for rec in r.records() {
        let rec = rec?;
        for field in rec.iter().skip(1) {
            values.push(
                field
                    .parse::<f64>()
                    .map_err(|e| Error::Invalid(format!("similarity `{field}`: {e}")))?,
            );
        }
    }
    let sim = SimilarityMatrix::from_values(ids.len(), values)?;
    Ok((ids, sim))
}

pub fn write_history<W: Write>(history: &MergeHistory, mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, history.steps())?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_history<R: Read>(reader: R) -> Result<MergeHistory> {
    let steps: Vec<MergeStep> = serde_json::from_reader(reader)?;
    MergeHistory::new(steps.len() + 1, steps)
}

#[derive(Debug, Serialize, Deserialize)]
struct ProfileRow {
    step: usize,
    similarity: f64,
    drop: Option<f64>,
}

/// `step,similarity,drop`; `drop` is empty on the last step.
pub fn write_profile<W: Write>(profile: &MergeProfile, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (s, &similarity) in profile.similarities.iter().enumerate() {
        w.serialize(ProfileRow {
            step: s + 1,
            similarity,
            drop: profile.drops.get(s).copied(),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_profile<R: Read>(reader: R) -> Result<MergeProfile> {
    let mut r = csv::Reader::from_reader(reader);
    let rows: Vec<ProfileRow> = r.deserialize().collect::<std::result::Result<_, _>>()?;
    Ok(MergeProfile {
        similarities: rows.iter().map(|r| r.similarity).collect(),
        drops: rows.iter().filter_map(|r| r.drop).collect(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupRow {
    network_id: String,
    group: usize,
}

pub fn write_groups<W: Write>(ids: &[String], groups: &GroupAssignment, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (id, &group) in ids.iter().zip(groups.groups()) {
        w.serialize(GroupRow {
            network_id: id.clone(),
            group,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_groups<R: Read>(reader: R) -> Result<(Vec<String>, GroupAssignment)> {
    let mut r = csv::Reader::from_reader(reader);
    let rows: Vec<GroupRow> = r.deserialize().collect::<std::result::Result<_, _>>()?;
    let ids = rows.iter().map(|r| r.network_id.clone()).collect();
    let labels: Vec<usize> = rows.iter().map(|r| r.group).collect();
    Ok((ids, GroupAssignment::from_labels(&labels)))
}

/// `node_1,...,node_k,rate`.
pub fn write_co_membership<W: Write>(rates: &[CoMembership], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let order = rates.first().map_or(2, |r| r.nodes.len());
    let mut header: Vec<String> = (1..=order).map(|i| format!("node_{i}")).collect();
    header.push("rate".into());
    w.write_record(&header)?;
    for r in rates {
        let mut row: Vec<String> = r.nodes.iter().map(usize::to_string).collect();
        row.push(r.rate.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_co_membership<R: Read>(reader: R) -> Result<Vec<CoMembership>> {
    let mut r = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let fields: Vec<&str> = rec.iter().collect();
        let (rate, nodes) = fields
            .split_last()
            .ok_or_else(|| Error::Invalid("empty row".into()))?;
        let parse_err = |f: &str| Error::Invalid(format!("bad co-membership field `{f}`"));
        out.push(CoMembership {
            nodes: nodes
                .iter()
                .map(|f| f.parse().map_err(|_| parse_err(f)))
                .collect::<Result<_>>()?,
            rate: rate.parse().map_err(|_| parse_err(rate))?,
        });
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct EventRow {
    match_id: String,
    team_id: String,
    seq: u64,
    category: String,
    x: f64,
    y: f64,
}

/// Events CSV `match_id,team_id,seq,category,x,y`.
pub fn read_events<R: Read>(reader: R) -> Result<Vec<EventRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    r.deserialize()
        .map(|row| {
            let row: EventRow = row?;
            Ok(EventRecord {
                match_id: row.match_id,
                team_id: row.team_id,
                seq: row.seq,
                category: row.category.parse::<EventCategory>()?,
                x: row.x,
                y: row.y,
            })
        })
        .collect()
}

pub fn write_events<W: Write>(events: &[EventRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for e in events {
        w.serialize(EventRow {
            match_id: e.match_id.clone(),
            team_id: e.team_id.clone(),
            seq: e.seq,
            category: e.category.to_string(),
            x: e.x,
            y: e.y,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct MatchRow {
    date: String,
    home: usize,
    away: usize,
    home_goals: u32,
    away_goals: u32,
    home_style: String,
    away_style: String,
}

fn parse_flag(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" => Ok(true),
        "0" | "false" => Ok(false),
        other => Err(Error::Invalid(format!(
            "style indicator must be 0/1, got `{other}`"
        ))),
    }
}

/// Matches CSV `date,home,away,home_goals,away_goals,home_style,away_style`.
/// Dates are integer days or ISO dates; the format of the first row is
/// returned so output can mirror it.
pub fn read_matches<R: Read>(reader: R) -> Result<(Vec<MatchRecord>, DateFormat)> {
    let mut r = csv::Reader::from_reader(reader);
    let mut format = None;
    let mut out = Vec::new();
    for row in r.deserialize() {
        let row: MatchRow = row?;
        let (date, f) = parse_day(&row.date)?;
        if *format.get_or_insert(f) != f {
            return Err(Error::Invalid(
                "date column mixes integer days and ISO dates".into(),
            ));
        }
        out.push(MatchRecord::new(
            date,
            row.home,
            row.away,
            row.home_goals,
            row.away_goals,
            parse_flag(&row.home_style)?,
            parse_flag(&row.away_style)?,
        )?);
    }
    Ok((out, format.unwrap_or_default()))
}

pub fn write_matches<W: Write>(
    matches: &[MatchRecord],
    format: DateFormat,
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for m in matches {
        w.serialize(MatchRow {
            date: format_day(m.date, format),
            home: m.home,
            away: m.away,
            home_goals: m.home_goals,
            away_goals: m.away_goals,
            home_style: u8::from(m.home_style).to_string(),
            away_style: u8::from(m.away_style).to_string(),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// One row of the interval table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiRow {
    pub t: String,
    pub delta_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub adjustment: f64,
}

/// Interval table `t,delta_hat,ci_low,ci_high,adjustment`.
pub fn write_cis<W: Write>(results: &[ProfileResult], format: DateFormat, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in results {
        w.serialize(CiRow {
            t: format_day(r.t, format),
            delta_hat: r.delta_hat,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            adjustment: r.adjustment,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_cis<R: Read>(reader: R) -> Result<Vec<CiRow>> {
    let mut r = csv::Reader::from_reader(reader);
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}
