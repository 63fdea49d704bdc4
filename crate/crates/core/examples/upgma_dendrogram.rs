//! Average-linkage merging of a similarity matrix and cutting the dendrogram.
//!
//! cargo run --example upgma_dendrogram

use tactinet::similarity::SimilarityMatrix;
use tactinet::{cut_dendrogram, merge_similarity_profile, upgma_cluster};

fn main() -> tactinet::Result<()> {
    #[rustfmt::skip]
    let values = vec![
        1.0, 0.9, 0.8, 0.1, 0.0,
        0.9, 1.0, 0.7, 0.2, 0.1,
        0.8, 0.7, 1.0, 0.0, 0.2,
        0.1, 0.2, 0.0, 1.0, 0.6,
        0.0, 0.1, 0.2, 0.6, 1.0,
    ];
    let sim = SimilarityMatrix::from_values(5, values)?;
    let history = upgma_cluster(&sim, 0);
    for step in history.steps() {
        println!(
            "merge {} + {} -> {} at {:.3}",
            step.left, step.right, step.new, step.similarity
        );
    }
    let profile = merge_similarity_profile(&history);
    println!("drops between merges: {:?}", profile.drops);
    let groups = cut_dendrogram(&history, 2)?;
    println!("two groups: {:?}", groups.groups());
    Ok(())
}
