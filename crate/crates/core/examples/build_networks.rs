//! Build weighted networks over a shared node set and inspect a sample.
//!
//! cargo run --example build_networks

use tactinet::{build_network, NetworkSample};

fn main() -> tactinet::Result<()> {
    // Edges are 1-based `(i, j, weight)`; repeated pairs accumulate.
    let a =
        build_network(4, &[(1, 2, 3.0), (2, 3, 1.0), (3, 4, 2.0), (1, 1, 5.0)])?.with_label("a");
    let b = build_network(4, &[(1, 2, 1.0), (1, 2, 1.0), (2, 4, 4.0)])?.with_label("b");
    println!("a(1,2) = {}, a(2,1) = {}", a.weight(0, 1), a.weight(1, 0));
    println!("total weight of a: {}", a.total_weight());
    println!(
        "a without self-loops: total {}",
        a.zero_self_loops().total_weight()
    );

    let sample = NetworkSample::new(vec![a, b])?;
    println!(
        "{} networks over {} nodes",
        sample.len(),
        sample.node_count()
    );
    println!("edge 1-2 across the sample: {:?}", sample.edge_series(0, 1));
    Ok(())
}
