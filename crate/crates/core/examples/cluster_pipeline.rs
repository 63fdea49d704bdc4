//! Cluster a generated two-group sample end to end and characterize the groups.
//!
//! cargo run --release --example cluster_pipeline [output-dir]

use tactinet::ari;
use tactinet::pipeline::{cluster_with_config, write_artifacts, PipelineConfig};
use tactinet::simbench::{generate_scenario, ScenarioSpec};

fn main() -> tactinet::Result<()> {
    let (sample, truth) = generate_scenario(&ScenarioSpec::reference(2, 1)?, 3)?;
    // Scenario networks have 30 nodes and no designated edges to drop.
    let config = PipelineConfig {
        zero_edges: vec![],
        groups: Some(2),
        seed: 1,
        ..PipelineConfig::default()
    };
    let run = cluster_with_config(&sample, &config)?;

    let groups = run.groups.as_ref().expect("groups requested");
    println!(
        "group sizes: {:?}",
        groups.members().iter().map(Vec::len).collect::<Vec<_>>()
    );
    println!(
        "ARI against the generating groups: {:.3}",
        ari(&truth.as_partition(), &groups.as_partition())?
    );
    println!("perfect merges: {}", run.summary.perfect_merges);
    for table in &run.tables {
        let top = table
            .pairs
            .iter()
            .max_by(|a, b| a.rate.total_cmp(&b.rate))
            .expect("pairs");
        println!(
            "group {}: most frequent pair {:?} ({:.2})",
            table.group, top.nodes, top.rate
        );
    }
    if let Some(dir) = std::env::args().nth(1) {
        write_artifacts(&run, dir.as_ref())?;
        println!("artifacts written to {dir}");
    }
    Ok(())
}
