//! Identical raw community structure can hide different edge importance:
//! two networks with one dominant edge, one weak and one strong relative to
//! the rest of the sample.
//!
//! cargo run --example edge_importance_pathology

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tactinet::{ari, build_network, louvain, preprocess, NetworkSample};

fn complete(w12: f64, mut rest: impl FnMut() -> f64) -> Vec<(usize, usize, f64)> {
    let mut edges = vec![];
    for i in 1..=5 {
        for j in i + 1..=5 {
            edges.push((i, j, if (i, j) == (1, 2) { w12 } else { rest() }));
        }
    }
    edges
}

fn main() -> tactinet::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut nets = vec![
        build_network(5, &complete(0.10, || 0.05))?.with_label("low"),
        build_network(5, &complete(0.80, || 0.40))?.with_label("high"),
    ];
    for b in 0..38 {
        let w = rng.gen_range(0.3..0.7);
        let rest: Vec<f64> = (0..9).map(|_| rng.gen_range(0.0..0.3)).collect();
        let mut it = rest.into_iter();
        nets.push(
            build_network(5, &complete(w, || it.next().unwrap()))?.with_label(format!("bg{b}")),
        );
    }
    let sample = NetworkSample::new(nets)?;

    let raw = [
        louvain(&sample.networks()[0], 1),
        louvain(&sample.networks()[1], 1),
    ];
    println!(
        "raw: {:?} vs {:?}, ARI {}",
        raw[0].assignment(),
        raw[1].assignment(),
        ari(&raw[0], &raw[1])?
    );

    let processed = preprocess(&sample, 0.95)?.zero_self_loops();
    let (low, high) = (&processed.networks()[0], &processed.networks()[1]);
    println!(
        "edge 1-2 after preprocessing: low {:.3}, high {:.3}",
        low.weight(0, 1),
        high.weight(0, 1)
    );
    let post = [louvain(low, 1), louvain(high, 1)];
    println!(
        "processed: {:?} vs {:?}, ARI {}",
        post[0].assignment(),
        post[1].assignment(),
        ari(&post[0], &post[1])?
    );
    Ok(())
}
