//! Small-scale run of the synthetic benchmark against the naive baseline.
//!
//! cargo run --release --example benchmark_scenarios [replications]

use tactinet::simbench::{run_replications, ScenarioSpec};

fn main() -> tactinet::Result<()> {
    let reps: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20);
    for (s, sub) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let result = run_replications(
            &ScenarioSpec::reference(s, sub)?,
            &[0.3, 0.7, 0.95],
            reps,
            0,
            2,
        )?;
        println!("scenario {s}.{sub}");
        for cell in result.summaries() {
            let label = cell
                .alpha
                .map_or("naive".to_string(), |a| format!("alpha {a}"));
            println!(
                "  {label:>10}: median ARI {:6.3}  (IQR {:.3}..{:.3})",
                cell.stats.median, cell.stats.q1, cell.stats.q3
            );
        }
    }
    Ok(())
}
