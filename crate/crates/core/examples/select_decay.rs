//! Choose the time-decay rate by one-step-ahead prediction.
//!
//! cargo run --release --example select_decay

use tactinet::scoremodel::{
    generate_season, optimize_xi, predictive_log_score, Drift, SeasonConfig, XiConfig,
};

fn main() -> tactinet::Result<()> {
    let candidates = [0.0, 0.002, 0.005, 0.01];
    for drift in [false, true] {
        let mut cfg = SeasonConfig {
            seasons: 16,
            ..SeasonConfig::with_teams(4, 0.1, 0.0)
        };
        let rounds = cfg.seasons * 6;
        if drift {
            cfg.drift = Some(Drift {
                from_round: rounds / 2,
                alpha_shift: vec![(1, 0.5), (2, 0.5)],
            });
        }
        let data = generate_season(&cfg, 9)?;
        let window = XiConfig {
            from: cfg.round_days(rounds / 2 + 6).0,
            to: cfg.round_days(rounds - 1).1,
        };
        for &xi in &candidates {
            println!(
                "drift {drift:5}: xi {xi:.3} log-score {:.2}",
                predictive_log_score(&data, xi, &window)?
            );
        }
        println!(
            "drift {drift:5}: chosen xi {}",
            optimize_xi(&data, &candidates, &window)?
        );
    }
    Ok(())
}
