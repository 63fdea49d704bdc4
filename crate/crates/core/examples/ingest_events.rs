//! Turn an event log into per-team zone networks and summarize them.
//!
//! cargo run --example ingest_events

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tactinet::pitch::{
    area_of, ingest_events, summarize_sample, EventCategory, EventRecord, IngestConfig, PitchGrid,
};

fn main() -> tactinet::Result<()> {
    let grid = PitchGrid::default();
    println!(
        "zone of (10, 5): {}, (52, 34): {}, (100, 60): {}",
        area_of(10.0, 5.0, &grid)?,
        area_of(52.0, 34.0, &grid)?,
        area_of(100.0, 60.0, &grid)?
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut events = Vec::new();
    for m in 1..=3 {
        let mut team = "home";
        for seq in 0..200 {
            if rng.gen_bool(0.25) {
                team = if team == "home" { "away" } else { "home" };
            }
            events.push(EventRecord {
                match_id: m.to_string(),
                team_id: team.to_string(),
                seq,
                category: EventCategory::ALL[rng.gen_range(0..EventCategory::ALL.len())],
                x: rng.gen_range(0.0..=105.0),
                y: rng.gen_range(0.0..=68.0),
            });
        }
    }

    let sample = ingest_events(&events, &IngestConfig::default())?;
    for net in sample.networks() {
        println!(
            "{:>8}: {} consecutive same-team pairs",
            net.label(),
            net.total_weight()
        );
    }
    let stats = summarize_sample(&sample, None)?;
    if let Some(e) = stats.edge(5, 5) {
        println!("self-loop of the central zone: {e:?}");
    }
    Ok(())
}
