mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tactinet::pitch::{area_of, build_match_network, ingest_events, IngestConfig, PitchGrid};

use common::{named_zone, random_stream, uninterrupted_pairs};

#[test]
fn every_centimetre_matches_the_named_layout() {
    let grid = PitchGrid::default();
    for x in 0..=10_500u32 {
        for y in 0..=6_800u32 {
            let got = area_of(x as f64 / 100.0, y as f64 / 100.0, &grid).unwrap();
            assert_eq!(got, named_zone(x, y), "({x} cm, {y} cm)");
        }
    }
}

#[test]
fn boundary_fixtures() {
    let grid = PitchGrid::default();
    assert_eq!(area_of(0.0, 0.0, &grid).unwrap(), 1);
    assert_eq!(area_of(104.0, 67.0, &grid).unwrap(), 9);
    assert_eq!(area_of(35.0, 0.0, &grid).unwrap(), 6);
    assert_eq!(area_of(105.0, 68.0, &grid).unwrap(), 9);
    assert!(area_of(-0.01, 10.0, &grid).is_err());
    assert!(area_of(10.0, 68.01, &grid).is_err());
}

#[test]
fn mirrored_width_swaps_the_sides() {
    let mirrored = PitchGrid {
        mirror_y: true,
        ..PitchGrid::default()
    };
    let plain = PitchGrid::default();
    for x in [10.0, 50.0, 90.0] {
        assert_eq!(
            area_of(x, 5.0, &mirrored).unwrap(),
            area_of(x, 63.0, &plain).unwrap()
        );
    }
}

#[test]
fn ingestion_conserves_pair_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut events = vec![];
    for m in 0..20 {
        events.extend(random_stream(&mut rng, &m.to_string(), 150));
    }
    for flip_away in [false, true] {
        let cfg = IngestConfig {
            flip_away,
            ..IngestConfig::default()
        };
        let sample = ingest_events(&events, &cfg).unwrap();
        let mut total = 0.0;
        for net in sample.networks() {
            let (m, team) = net.label().split_once(':').unwrap();
            let stream: Vec<_> = events.iter().filter(|e| e.match_id == m).cloned().collect();
            assert_eq!(
                net.total_weight(),
                uninterrupted_pairs(&stream, team) as f64,
                "{}",
                net.label()
            );
            total += net.total_weight();
        }
        let expected: usize = (0..20)
            .map(|m| {
                let s: Vec<_> = events
                    .iter()
                    .filter(|e| e.match_id == m.to_string())
                    .cloned()
                    .collect();
                uninterrupted_pairs(&s, "A") + uninterrupted_pairs(&s, "B")
            })
            .sum();
        assert_eq!(total, expected as f64);
    }
}

#[test]
fn opposing_event_breaks_the_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut stream = random_stream(&mut rng, "1", 3);
    for (e, team) in stream.iter_mut().zip(["A", "B", "A"]) {
        e.team_id = team.into();
    }
    let net = build_match_network(&stream, "A", &PitchGrid::default()).unwrap();
    assert_eq!(net.total_weight(), 0.0);
}

#[test]
fn away_flip_mirrors_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut stream = random_stream(&mut rng, "1", 2);
    for (e, (x, y)) in stream.iter_mut().zip([(1.0, 1.0), (1.0, 1.0)]) {
        e.team_id = "B".into();
        e.x = x;
        e.y = y;
    }
    stream.insert(
        0,
        tactinet::pitch::EventRecord {
            team_id: "A".into(),
            seq: 0,
            ..stream[0].clone()
        },
    );
    let cfg = IngestConfig {
        flip_away: true,
        ..IngestConfig::default()
    };
    let sample = ingest_events(&stream, &cfg).unwrap();
    let away = sample
        .networks()
        .iter()
        .find(|n| n.label() == "1:B")
        .unwrap();
    assert_eq!(away.weight(8, 8), 1.0);
}
