//! Adjusted Rand Index between partitions and the pairwise similarity matrix.
//!
//! cargo run --example compare_partitions

use tactinet::{ari, similarity_matrix, Partition};

fn main() -> tactinet::Result<()> {
    let p = Partition::from_labels(&["x", "x", "y", "y"]);
    let q = Partition::from_labels(&[0, 1, 0, 1]);
    let r = Partition::from_labels(&[7, 7, 3, 3]);
    println!("ARI(p, r) = {}", ari(&p, &r)?);
    println!("ARI(p, q) = {}", ari(&p, &q)?);
    println!(
        "ARI(one block, singletons) = {}",
        ari(&Partition::single_block(4), &Partition::singletons(4))?
    );

    let sim = similarity_matrix(&[p, q, r])?;
    for i in 0..sim.len() {
        let row: Vec<String> = (0..sim.len())
            .map(|j| format!("{:6.2}", sim.get(i, j)))
            .collect();
        println!("{}", row.join(" "));
    }
    Ok(())
}
