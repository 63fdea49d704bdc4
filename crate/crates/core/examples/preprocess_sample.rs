//! Per-edge min-max normalization and quantile thresholding.
//!
//! cargo run --example preprocess_sample

use tactinet::preprocess::{apply_thresholds, compute_thresholds, normalize_sample};
use tactinet::{build_network, NetworkSample};

fn main() -> tactinet::Result<()> {
    let weights = [1.0, 4.0, 2.0, 8.0, 5.0];
    let nets = weights
        .iter()
        .enumerate()
        .map(|(t, &w)| {
            Ok(build_network(3, &[(1, 2, w), (2, 3, 10.0 - w)])?.with_label(format!("n{t}")))
        })
        .collect::<tactinet::Result<Vec<_>>>()?;
    let sample = NetworkSample::new(nets)?;

    let normalized = normalize_sample(&sample)?;
    println!("normalized edge 1-2: {:?}", normalized.edge_series(0, 1));

    for alpha in [0.0, 0.6, 0.95] {
        let thresholds = compute_thresholds(&normalized, alpha)?;
        let kept = apply_thresholds(&normalized, &thresholds)?;
        println!(
            "alpha {alpha}: threshold {:.3}, edge 1-2 after cut {:?}",
            thresholds.get(0, 1),
            kept.edge_series(0, 1)
        );
    }
    Ok(())
}
