use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tracing::info;

use super::fit::{fit, FitOptions};
use super::{outcome_probabilities, MatchRecord};
use crate::error::{Error, Result};

/// Matchdays in `[from, to]` are predicted from the matches before them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiConfig {
    pub from: i64,
    pub to: i64,
}

/// Sum over evaluation matchdays of the log-probability assigned to each
/// observed result (home win, draw, away win) by the fit on earlier matches.
pub fn predictive_log_score(data: &[MatchRecord], xi: f64, cfg: &XiConfig) -> Result<f64> {
    let dates: Vec<i64> = data
        .iter()
        .map(|m| m.date)
        .filter(|d| (cfg.from..=cfg.to).contains(d))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if dates.is_empty() {
        return Err(Error::EmptyRange(format!(
            "no matchdays in [{}, {}]",
            cfg.from, cfg.to
        )));
    }
    let opts = FitOptions::with_xi(xi);
    let per_day: Vec<f64> = dates
        .par_iter()
        .map(|&t| {
            let fitted = fit(data, t, &opts)?.params;
            Ok(data
                .iter()
                .filter(|m| m.date == t)
                .map(|m| {
                    let p = outcome_probabilities(&fitted, m);
                    let slot = match m.home_goals.cmp(&m.away_goals) {
                        std::cmp::Ordering::Greater => 0,
                        std::cmp::Ordering::Equal => 1,
                        std::cmp::Ordering::Less => 2,
                    };
                    p[slot].ln()
                })
                .sum())
        })
        .collect::<Result<_>>()?;
    Ok(per_day.iter().sum())
}

/// Candidate with the highest predictive log-score; the earliest wins ties.
pub fn optimize_xi(data: &[MatchRecord], candidates: &[f64], cfg: &XiConfig) -> Result<f64> {
    match candidates {
        [] => Err(Error::EmptyCandidates),
        [only] => Ok(*only),
        _ => {
            let mut best = (f64::NEG_INFINITY, candidates[0]);
            for &xi in candidates {
                let score = predictive_log_score(data, xi, cfg)?;
                info!(xi, score, "decay candidate scored");
                if score > best.0 {
                    best = (score, xi);
                }
            }
            Ok(best.1)
        }
    }
}
