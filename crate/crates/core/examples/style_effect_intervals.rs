//! Rolling adjusted intervals for the style effect on a synthetic season.
//!
//! cargo run --release --example style_effect_intervals

use tactinet::scoremodel::{generate_season, rolling_cis, CiConfig, SeasonConfig};

fn main() -> tactinet::Result<()> {
    let cfg = SeasonConfig::reference(0.2, 0.0);
    let data = generate_season(&cfg, 2024)?;
    let (from, to) = (cfg.round_days(21).0, cfg.round_days(32).1);
    let results = rolling_cis(&data, from, to, &CiConfig::default(), 5)?;
    println!(
        "{:>5} {:>7} {:>8} {:>8} {:>6} {:>7}",
        "t", "delta", "low", "high", "adj", "matches"
    );
    for r in &results {
        println!(
            "{:>5} {:>7.3} {:>8.3} {:>8.3} {:>6.3} {:>7}",
            r.t, r.delta_hat, r.ci_low, r.ci_high, r.adjustment, r.matches
        );
    }
    Ok(())
}
