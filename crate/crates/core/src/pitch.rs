//! Football event logs to pitch-zone networks.
//!
//! The pitch is split into equal cells along its length (defense, midfield,
//! attack for three columns) and width. With the default 3x3 grid, zones
//! are numbered
//!
//! ```text
//!             defense   midfield   attack     (attack direction: +x)
//!   left  y↑     3         4          9
//!   centre       2         5          8
//!   right y=0    1         6          7
//! ```
//!
//! so that 1 is right defense, 3 left defense, 4 left midfield, 5 central
//! midfield, 7 right attack and 9 left attack. Numbering snakes through the
//! columns; for other grid sizes the same serpentine order applies.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Network, NetworkSample};

pub const PITCH_LENGTH: f64 = 105.0;
pub const PITCH_WIDTH: f64 = 68.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventCategory {
    AccuratePass,
    InaccuratePass,
    Assist,
    AccurateCross,
    InaccurateCross,
    SuccessfulDribble,
    UnsuccessfulDribble,
    SuccessfulTackle,
    UnsuccessfulTackle,
    ChallengeWon,
    ChallengeLost,
    Shot,
}

impl EventCategory {
    pub const ALL: [EventCategory; 12] = [
        EventCategory::AccuratePass,
        EventCategory::InaccuratePass,
        EventCategory::Assist,
        EventCategory::AccurateCross,
        EventCategory::InaccurateCross,
        EventCategory::SuccessfulDribble,
        EventCategory::UnsuccessfulDribble,
        EventCategory::SuccessfulTackle,
        EventCategory::UnsuccessfulTackle,
        EventCategory::ChallengeWon,
        EventCategory::ChallengeLost,
        EventCategory::Shot,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventCategory::AccuratePass => "accurate_pass",
            EventCategory::InaccuratePass => "inaccurate_pass",
            EventCategory::Assist => "assist",
            EventCategory::AccurateCross => "accurate_cross",
            EventCategory::InaccurateCross => "inaccurate_cross",
            EventCategory::SuccessfulDribble => "successful_dribble",
            EventCategory::UnsuccessfulDribble => "unsuccessful_dribble",
            EventCategory::SuccessfulTackle => "successful_tackle",
            EventCategory::UnsuccessfulTackle => "unsuccessful_tackle",
            EventCategory::ChallengeWon => "challenge_won",
            EventCategory::ChallengeLost => "challenge_lost",
            EventCategory::Shot => "shot",
        }
    }
}

impl fmt::Display for EventCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventCategory {
    type Err = Error;

    /// Accepts `accurate_pass`, `Accurate pass`, `accurate-pass`, ...
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .chars()
            .map(|c| {
                if c == ' ' || c == '-' {
                    '_'
                } else {
                    c.to_ascii_lowercase()
                }
            })
            .collect();
        EventCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == key)
            .ok_or_else(|| Error::UnknownCategory(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub match_id: String,
    pub team_id: String,
    pub seq: u64,
    pub category: EventCategory,
    pub x: f64,
    pub y: f64,
}

/// Equal-cell division of the pitch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PitchGrid {
    pub length: f64,
    pub width: f64,
    /// Cells along the length (x).
    pub columns: usize,
    /// Cells along the width (y).
    pub rows: usize,
    /// Treat `y = width` rather than `y = 0` as the attacking team's right.
    #[serde(default)]
    pub mirror_y: bool,
}

impl Default for PitchGrid {
    fn default() -> Self {
        Self {
            length: PITCH_LENGTH,
            width: PITCH_WIDTH,
            columns: 3,
            rows: 3,
            mirror_y: false,
        }
    }
}

impl PitchGrid {
    pub fn node_count(&self) -> usize {
        self.columns * self.rows
    }

    fn cell(coord: f64, extent: f64, cells: usize) -> usize {
        // half-open cells, the last one closed at `extent`
        ((coord * cells as f64 / extent).floor() as usize).min(cells - 1)
    }

    /// Zone label `1..=K` of a point; the attack direction is `+x`.
    pub fn area_of(&self, x: f64, y: f64) -> Result<usize> {
        if !(0.0..=self.length).contains(&x) || !(0.0..=self.width).contains(&y) {
            return Err(Error::OutOfBounds { x, y });
        }
        let y = if self.mirror_y { self.width - y } else { y };
        let c = Self::cell(x, self.length, self.columns);
        let r = Self::cell(y, self.width, self.rows);
        let r = if c % 2 == 0 { r } else { self.rows - 1 - r };
        Ok(c * self.rows + r + 1)
    }
}

/// Zone of `(x, y)` on `grid`.
pub fn area_of(x: f64, y: f64, grid: &PitchGrid) -> Result<usize> {
    grid.area_of(x, y)
}

/// Network of one team in one match.
///
/// `events` is the full stream of the match (both teams), ordered by `seq`.
/// Every pair of consecutive events both belonging to `team` adds one to the
/// weight between their zones; any opposing event in between breaks the chain.
pub fn build_match_network(
    events: &[EventRecord],
    team: &str,
    grid: &PitchGrid,
) -> Result<Network> {
    let k = grid.node_count();
    let mut net = Network::empty(k, "")?;
    if let Some(first) = events.first() {
        if let Some(other) = events.iter().find(|e| e.match_id != first.match_id) {
            return Err(Error::Invalid(format!(
                "events from matches {} and {} in one stream",
                first.match_id, other.match_id
            )));
        }
        if let Some(label) = events
            .iter()
            .find(|e| e.team_id == team)
            .map(|e| &e.match_id)
        {
            net = net.with_label(format!("{label}:{team}"));
        }
    }
    let areas: Vec<usize> = events
        .iter()
        .map(|e| grid.area_of(e.x, e.y))
        .collect::<Result<_>>()?;
    for (w, pair) in events.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        if b.seq <= a.seq {
            return Err(Error::UnsortedEvents {
                match_id: a.match_id.clone(),
            });
        }
        if a.team_id == team && b.team_id == team {
            let (i, j) = (areas[w] - 1, areas[w + 1] - 1);
            let current = net.weight(i, j);
            net.set_symmetric(i, j, current + 1.0);
        }
    }
    Ok(net)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IngestConfig {
    pub grid: PitchGrid,
    /// Coordinates are absolute: mirror `(x, y) -> (L - x, W - y)` for the
    /// away team, taken as the second team to appear in each match.
    #[serde(default)]
    pub flip_away: bool,
}

/// Orders ids numerically when both parse as integers, lexically otherwise.
fn id_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

/// Builds one network per (match, team), ordered by match id then team id.
/// Labels are `"<match_id>:<team_id>"`.
pub fn ingest_events(events: &[EventRecord], config: &IngestConfig) -> Result<NetworkSample> {
    let mut by_match: HashMap<&str, Vec<EventRecord>> = HashMap::new();
    for e in events {
        by_match
            .entry(e.match_id.as_str())
            .or_default()
            .push(e.clone());
    }
    let mut match_ids: Vec<&str> = by_match.keys().copied().collect();
    match_ids.sort_by(|a, b| id_order(a, b));

    let mut networks = Vec::new();
    for match_id in match_ids {
        let mut stream = by_match.remove(match_id).unwrap_or_default();
        stream.sort_by_key(|e| e.seq);
        if stream.windows(2).any(|w| w[0].seq == w[1].seq) {
            return Err(Error::UnsortedEvents {
                match_id: match_id.to_string(),
            });
        }
        let mut teams: Vec<String> = Vec::new();
        for e in &stream {
            if !teams.contains(&e.team_id) {
                teams.push(e.team_id.clone());
            }
        }
        if config.flip_away && teams.len() > 1 {
            let away = &teams[1];
            let grid = &config.grid;
            for e in stream.iter_mut().filter(|e| &e.team_id == away) {
                e.x = grid.length - e.x;
                e.y = grid.width - e.y;
            }
        }
        teams.sort_by(|a, b| id_order(a, b));
        for team in teams {
            let net = build_match_network(&stream, &team, &config.grid)?;
            networks.push(net.with_label(format!("{match_id}:{team}")));
        }
    }
    if networks.is_empty() {
        return Err(Error::TooFewNetworks { min: 1, got: 0 });
    }
    NetworkSample::new(networks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeStats {
    pub i: usize,
    pub j: usize,
    pub mean: f64,
    /// Sample variance (divisor `n - 1`); zero when `n == 1`.
    pub variance: f64,
    pub zero_fraction: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeWeight {
    pub i: usize,
    pub j: usize,
    /// Mean over the group's networks of edge weight / network total weight.
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkAverage {
    pub label: String,
    pub average_weight: f64,
}

/// Descriptive diagnostics of a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub networks: Vec<NetworkAverage>,
    pub edges: Vec<EdgeStats>,
    /// Keyed by group name; a single `"all"` group when none is given.
    pub relative_weights: BTreeMap<String, Vec<RelativeWeight>>,
}

impl SummaryStats {
    pub fn edge(&self, i: usize, j: usize) -> Option<&EdgeStats> {
        let (i, j) = (i.min(j), i.max(j));
        self.edges.iter().find(|e| e.i == i && e.j == j)
    }
}

/// Per-network average weight, per-edge distribution summaries and
/// per-group relative edge weights. Edges are unordered pairs `i <= j`
/// (self-loops included) with 1-based labels.
///
/// `groups`, when given, names a category (team, ranking band, ...) for each
/// network in order.
pub fn summarize_sample(sample: &NetworkSample, groups: Option<&[String]>) -> Result<SummaryStats> {
    if sample.is_empty() {
        return Err(Error::TooFewNetworks { min: 1, got: 0 });
    }
    let n = sample.len();
    if let Some(g) = groups {
        if g.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "{} group names for {} networks",
                g.len(),
                n
            )));
        }
    }
    let k = sample.node_count();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();

    let networks = sample
        .networks()
        .iter()
        .map(|net| NetworkAverage {
            label: net.label().to_string(),
            average_weight: net.total_weight() / pairs.len() as f64,
        })
        .collect();

    let edges = pairs
        .iter()
        .map(|&(i, j)| {
            let series = sample.edge_series(i, j);
            let mean = series.iter().sum::<f64>() / n as f64;
            let variance = if n > 1 {
                series.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (n - 1) as f64
            } else {
                0.0
            };
            EdgeStats {
                i: i + 1,
                j: j + 1,
                mean,
                variance,
                zero_fraction: series.iter().filter(|&&w| w == 0.0).count() as f64 / n as f64,
                max: series.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();

    let mut members: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for t in 0..n {
        let name = groups.map_or("all".to_string(), |g| g[t].clone());
        members.entry(name).or_default().push(t);
    }
    let relative_weights = members
        .into_iter()
        .map(|(name, idx)| {
            let nets: Vec<&Network> = idx
                .iter()
                .map(|&t| &sample.networks()[t])
                .filter(|net| net.total_weight() > 0.0)
                .collect();
            let shares = pairs
                .iter()
                .map(|&(i, j)| {
                    let share = if nets.is_empty() {
                        0.0
                    } else {
                        nets.iter()
                            .map(|net| net.weight(i, j) / net.total_weight())
                            .sum::<f64>()
                            / nets.len() as f64
                    };
                    RelativeWeight {
                        i: i + 1,
                        j: j + 1,
                        share,
                    }
                })
                .collect();
            (name, shares)
        })
        .collect();

    Ok(SummaryStats {
        networks,
        edges,
        relative_weights,
    })
}

pub fn events_per_minute(event_count: u64, effective_minutes: f64) -> Result<f64> {
    if !(effective_minutes > 0.0) {
        return Err(Error::NonPositiveMinutes(effective_minutes));
    }
    Ok(event_count as f64 / effective_minutes)
}
