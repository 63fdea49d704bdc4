//! Community detection on a single network.
//!
//! cargo run --example louvain_communities

use tactinet::{build_network, louvain, modularity};

fn main() -> tactinet::Result<()> {
    let mut edges = vec![];
    for (a, b, c) in [(1, 2, 3), (4, 5, 6)] {
        edges.extend([(a, b, 1.0), (b, c, 1.0), (a, c, 1.0)]);
    }
    edges.push((3, 4, 0.1));
    let net = build_network(6, &edges)?;

    let part = louvain(&net, 42);
    println!("assignment: {:?}", part.assignment());
    println!("communities: {:?}", part.communities());
    println!("modularity: {:.4}", modularity(&net, &part)?);
    Ok(())
}
