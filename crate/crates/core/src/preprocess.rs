//! Sample-aware preprocessing: per-edge min-max normalization followed by a
//! per-edge quantile threshold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Network, NetworkSample};

/// Value assigned to every entry of a constant edge series.
pub const CONSTANT_EDGE_VALUE: f64 = 0.5;

/// Per-edge thresholds `s_ij` together with the quantile order that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTable {
    node_count: usize,
    values: Vec<f64>,
    alpha: f64,
}

impl ThresholdTable {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Threshold for pair `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.node_count + j]
    }
}

/// Returns `(min, max)` of an edge series.
pub fn edge_min_max(series: &[f64]) -> Result<(f64, f64)> {
    let first = *series.first().ok_or(Error::EmptySeries)?;
    Ok(series
        .iter()
        .fold((first, first), |(lo, hi), &w| (lo.min(w), hi.max(w))))
}

/// Min-max normalizes one edge series; a constant series maps to 0.5 everywhere.
pub fn normalize_series(series: &[f64]) -> Result<Vec<f64>> {
    let (a, b) = edge_min_max(series)?;
    if a == b {
        return Ok(vec![CONSTANT_EDGE_VALUE; series.len()]);
    }
    let span = b - a;
    // clamp guards the rare case where rounding pushes (w - a) / span past 1
    Ok(series
        .iter()
        .map(|&w| ((w - a) / span).clamp(0.0, 1.0))
        .collect())
}

/// Index (1-based) of the order statistic used as the quantile of order `alpha`
/// in a sample of size `n`: `ceil(alpha * n)`, or 1 when `alpha == 0`.
pub fn quantile_rank(alpha: f64, n: usize) -> usize {
    if alpha <= 0.0 {
        return 1;
    }
    // products such as 0.3 * 10 land just above the integer in binary
    let raw = (alpha * n as f64 - 1e-9).ceil();
    (raw as usize).clamp(1, n)
}

/// Empirical order-statistic quantile `x_(ceil(alpha n))`.
pub fn empirical_quantile(values: &[f64], alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) || alpha.is_nan() {
        return Err(Error::InvalidAlpha(alpha));
    }
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[quantile_rank(alpha, sorted.len()) - 1])
}

/// Applies per-edge normalization to every unordered pair (self-loops included).
pub fn normalize_sample(sample: &NetworkSample) -> Result<NetworkSample> {
    sample.require_at_least(2)?;
    let k = sample.node_count();
    let pairs = upper_pairs(k);
    let columns: Vec<Vec<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| normalize_series(&sample.edge_series(i, j)))
        .collect::<Result<_>>()?;
    Ok(rebuild(sample, &pairs, &columns))
}

/// Per-edge quantile of order `alpha` over a normalized sample.
pub fn compute_thresholds(normalized: &NetworkSample, alpha: f64) -> Result<ThresholdTable> {
    if !(0.0..=1.0).contains(&alpha) || alpha.is_nan() {
        return Err(Error::InvalidAlpha(alpha));
    }
    normalized.require_at_least(1)?;
    let k = normalized.node_count();
    let mut values = vec![0.0; k * k];
    let pairs = upper_pairs(k);
    let qs: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| empirical_quantile(&normalized.edge_series(i, j), alpha))
        .collect::<Result<_>>()?;
    for (&(i, j), q) in pairs.iter().zip(qs) {
        values[i * k + j] = q;
        values[j * k + i] = q;
    }
    Ok(ThresholdTable {
        node_count: k,
        values,
        alpha,
    })
}

/// Keeps `u` where `u > s_ij` strictly, zero otherwise.
pub fn apply_thresholds(
    normalized: &NetworkSample,
    thresholds: &ThresholdTable,
) -> Result<NetworkSample> {
    let k = normalized.node_count();
    if thresholds.node_count != k {
        return Err(Error::ShapeMismatch(format!(
            "threshold table is {}x{}, sample has {} nodes",
            thresholds.node_count, thresholds.node_count, k
        )));
    }
    let nets = normalized
        .networks()
        .iter()
        .map(|net| {
            let mut out = net.clone();
            for i in 0..k {
                for j in i..k {
                    let u = net.weight(i, j);
                    out.set_symmetric(i, j, if u > thresholds.get(i, j) { u } else { 0.0 });
                }
            }
            out
        })
        .collect();
    Ok(normalized.replace_networks(nets))
}

/// Normalize, compute thresholds at `alpha`, and apply them.
pub fn preprocess(sample: &NetworkSample, alpha: f64) -> Result<NetworkSample> {
    if !(0.0..=1.0).contains(&alpha) || alpha.is_nan() {
        return Err(Error::InvalidAlpha(alpha));
    }
    let normalized = normalize_sample(sample)?;
    let thresholds = compute_thresholds(&normalized, alpha)?;
    apply_thresholds(&normalized, &thresholds)
}

fn upper_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect()
}

fn rebuild(
    sample: &NetworkSample,
    pairs: &[(usize, usize)],
    columns: &[Vec<f64>],
) -> NetworkSample {
    let nets: Vec<Network> = sample
        .networks()
        .iter()
        .enumerate()
        .map(|(t, net)| {
            let mut out = net.clone();
            for (&(i, j), col) in pairs.iter().zip(columns) {
                out.set_symmetric(i, j, col[t]);
            }
            out
        })
        .collect();
    sample.replace_networks(nets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_network;

    fn sample_from_edge(values: &[f64]) -> NetworkSample {
        let nets = values
            .iter()
            .enumerate()
            .map(|(t, &w)| {
                build_network(2, &[(1, 2, w)])
                    .unwrap()
                    .with_label(format!("{t}"))
            })
            .collect();
        NetworkSample::new(nets).unwrap()
    }

    fn series_of(sample: &NetworkSample) -> Vec<f64> {
        sample.edge_series(0, 1)
    }

    #[test]
    fn min_max() {
        assert_eq!(edge_min_max(&[2.0, 4.0, 6.0]).unwrap(), (2.0, 6.0));
        assert_eq!(edge_min_max(&[5.0, 5.0, 5.0]).unwrap(), (5.0, 5.0));
        assert_eq!(edge_min_max(&[0.0, 3.0, 1.0]).unwrap(), (0.0, 3.0));
        assert!(matches!(edge_min_max(&[]), Err(Error::EmptySeries)));
    }

    #[test]
    fn normalization_examples() {
        let s = normalize_sample(&sample_from_edge(&[2.0, 4.0, 6.0])).unwrap();
        assert_eq!(series_of(&s), vec![0.0, 0.5, 1.0]);
        let s = normalize_sample(&sample_from_edge(&[5.0, 5.0, 5.0])).unwrap();
        assert_eq!(series_of(&s), vec![0.5, 0.5, 0.5]);
        let s = normalize_sample(&sample_from_edge(&[0.0, 1.0])).unwrap();
        assert_eq!(series_of(&s), vec![0.0, 1.0]);
        // the all-zero self-loop series is constant too
        assert_eq!(s.networks()[0].weight(0, 0), 0.5);
    }

    #[test]
    fn normalization_needs_two_networks() {
        assert!(matches!(
            normalize_sample(&sample_from_edge(&[1.0])),
            Err(Error::TooFewNetworks { .. })
        ));
    }

    #[test]
    fn quantile_examples() {
        let u = [0.0, 0.25, 0.5, 0.75, 1.0];
        assert_eq!(empirical_quantile(&u, 0.5).unwrap(), 0.5);
        assert_eq!(empirical_quantile(&u, 1.0).unwrap(), 1.0);
        assert_eq!(empirical_quantile(&u, 0.0).unwrap(), 0.0);
        assert_eq!(empirical_quantile(&[0.5; 7], 0.3).unwrap(), 0.5);
        assert!(matches!(
            empirical_quantile(&u, 1.5),
            Err(Error::InvalidAlpha(_))
        ));
        assert!(matches!(
            empirical_quantile(&u, -0.1),
            Err(Error::InvalidAlpha(_))
        ));
    }

    #[test]
    fn quantile_rank_is_robust_to_binary_products() {
        assert_eq!(quantile_rank(0.3, 10), 3);
        assert_eq!(quantile_rank(0.7, 100), 70);
        assert_eq!(quantile_rank(0.95, 100), 95);
        assert_eq!(quantile_rank(0.95, 20), 19);
        assert_eq!(quantile_rank(0.01, 5), 1);
    }

    #[test]
    fn strict_threshold_examples() {
        let s = sample_from_edge(&[0.0, 0.25, 0.5, 0.75, 1.0]);
        let norm = normalize_sample(&s).unwrap();
        let th = compute_thresholds(&norm, 0.5).unwrap();
        assert_eq!(th.get(0, 1), 0.5);
        let out = apply_thresholds(&norm, &th).unwrap();
        assert_eq!(series_of(&out), vec![0.0, 0.0, 0.0, 0.75, 1.0]);

        // alpha = 1: threshold is the max, nothing survives
        let th = compute_thresholds(&norm, 1.0).unwrap();
        assert!(series_of(&apply_thresholds(&norm, &th).unwrap())
            .iter()
            .all(|&w| w == 0.0));

        // alpha = 0: only exact zeros removed
        let th = compute_thresholds(&norm, 0.0).unwrap();
        assert_eq!(th.get(0, 1), 0.0);
        assert_eq!(
            series_of(&apply_thresholds(&norm, &th).unwrap()),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
    }

    #[test]
    fn constant_edges_never_survive() {
        let out = preprocess(&sample_from_edge(&[3.0, 3.0, 3.0, 3.0]), 0.5).unwrap();
        assert!(series_of(&out).iter().all(|&w| w == 0.0));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = normalize_sample(&sample_from_edge(&[0.0, 1.0])).unwrap();
        let nets = (0..2)
            .map(|t| build_network(3, &[(1, 2, t as f64)]).unwrap())
            .collect();
        let b = normalize_sample(&NetworkSample::new(nets).unwrap()).unwrap();
        let th = compute_thresholds(&b, 0.5).unwrap();
        assert!(matches!(
            apply_thresholds(&a, &th),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
