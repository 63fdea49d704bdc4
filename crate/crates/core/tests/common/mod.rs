//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::Rng;
use tactinet::graph::{build_network, Network, NetworkSample};
use tactinet::pitch::{EventCategory, EventRecord};

/// ARI from the 2x2 pair-agreement table over all node pairs.
pub fn brute_force_ari(p: &[usize], q: &[usize]) -> f64 {
    let k = p.len();
    let (mut both, mut only_p, mut only_q, mut neither) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..k {
        for j in i + 1..k {
            match (p[i] == p[j], q[i] == q[j]) {
                (true, true) => both += 1.0,
                (true, false) => only_p += 1.0,
                (false, true) => only_q += 1.0,
                (false, false) => neither += 1.0,
            }
        }
    }
    let pairs: f64 = both + only_p + only_q + neither;
    let same_p = both + only_p;
    let same_q = both + only_q;
    let expected = same_p * same_q / pairs;
    let max = 0.5 * (same_p + same_q);
    if max == expected {
        let identical = (0..k).all(|i| (0..k).all(|j| (p[i] == p[j]) == (q[i] == q[j])));
        return if identical { 1.0 } else { 0.0 };
    }
    (both - expected) / (max - expected)
}

/// Every set partition of `k` nodes as restricted growth strings.
pub fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for label in 0..=max + 1 {
            prefix.push(label);
            grow(prefix, max.max(label), k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut prefix = vec![0];
    grow(&mut prefix, 0, k, &mut out);
    out
}

/// Modularity straight from its definition over ordered node pairs.
pub fn direct_modularity(net: &Network, labels: &[usize]) -> f64 {
    let k = net.node_count();
    let strength: Vec<f64> = (0..k)
        .map(|i| (0..k).map(|j| net.weight(i, j)).sum())
        .collect();
    let two_m: f64 = strength.iter().sum();
    let mut q = 0.0;
    for i in 0..k {
        for j in 0..k {
            if labels[i] == labels[j] {
                q += net.weight(i, j) - strength[i] * strength[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Small-graph regression corpus.
pub fn louvain_corpus() -> Vec<(&'static str, Network)> {
    let mut clique_bridge = vec![];
    for (a, b, c) in [(1, 2, 3), (4, 5, 6)] {
        clique_bridge.extend([(a, b, 1.0), (b, c, 1.0), (a, c, 1.0)]);
    }
    clique_bridge.push((3, 4, 0.1));
    let mut ring = vec![];
    for t in 0..3 {
        let (a, b, c) = (3 * t + 1, 3 * t + 2, 3 * t + 3);
        ring.extend([(a, b, 1.0), (b, c, 1.0), (a, c, 1.0)]);
        ring.push((c, (3 * t + 3) % 9 + 1, 1.0));
    }
    let star: Vec<_> = (2..=7).map(|leaf| (1, leaf, 1.0)).collect();
    let k4: Vec<_> = (1..=4)
        .flat_map(|i| (i + 1..=4).map(move |j| (i, j, 1.0)))
        .collect();
    vec![
        (
            "two-clique bridge",
            build_network(6, &clique_bridge).unwrap(),
        ),
        ("ring of 3 triangles", build_network(9, &ring).unwrap()),
        ("star", build_network(7, &star).unwrap()),
        ("K4", build_network(4, &k4).unwrap()),
    ]
}

/// Average-rank Spearman correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// A random two-team event stream for one match, sorted by `seq`.
pub fn random_stream(rng: &mut impl Rng, match_id: &str, len: usize) -> Vec<EventRecord> {
    let mut team = "A";
    (0..len)
        .map(|s| {
            if rng.gen_bool(0.3) {
                team = if team == "A" { "B" } else { "A" };
            }
            EventRecord {
                match_id: match_id.to_string(),
                team_id: team.to_string(),
                seq: s as u64 * 3 + 1,
                category: EventCategory::ALL[rng.gen_range(0..EventCategory::ALL.len())],
                x: rng.gen_range(0.0..=105.0),
                y: rng.gen_range(0.0..=68.0),
            }
        })
        .collect()
}

/// Number of consecutive same-team pairs for `team`, counted directly.
pub fn uninterrupted_pairs(stream: &[EventRecord], team: &str) -> usize {
    stream
        .windows(2)
        .filter(|w| w[0].team_id == team && w[1].team_id == team)
        .count()
}

/// Zone label from the named layout: rows are columns of the pitch
/// (defense, midfield, attack), entries run from the attacking right to left.
pub fn named_zone(x_cm: u32, y_cm: u32) -> usize {
    const LAYOUT: [[usize; 3]; 3] = [[1, 2, 3], [6, 5, 4], [7, 8, 9]];
    let column = ((x_cm as u64 * 3) / 10_500).min(2) as usize;
    let side = ((y_cm as u64 * 3) / 6_800).min(2) as usize;
    LAYOUT[column][side]
}

/// The two 5-node networks of the low/high weight pathology, followed by a
/// background in which edge 1-2 is routinely strong.
pub fn pathology_fixture(rng: &mut impl Rng, background: usize) -> NetworkSample {
    let fill = |low: f64, high: f64| {
        let mut edges = vec![];
        for i in 1..=5 {
            for j in i + 1..=5 {
                edges.push((i, j, if (i, j) == (1, 2) { high } else { low }));
            }
        }
        build_network(5, &edges).unwrap()
    };
    let mut nets = vec![
        fill(0.05, 0.10).with_label("low"),
        fill(0.40, 0.80).with_label("high"),
    ];
    for b in 0..background {
        let mut edges = vec![];
        for i in 1..=5 {
            for j in i + 1..=5 {
                let w = if (i, j) == (1, 2) {
                    rng.gen_range(0.3..0.7)
                } else {
                    rng.gen_range(0.0..0.3)
                };
                edges.push((i, j, w));
            }
        }
        nets.push(
            build_network(5, &edges)
                .unwrap()
                .with_label(format!("bg{b}")),
        );
    }
    NetworkSample::new(nets).unwrap()
}
