use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{rates, tau, MatchRecord, ScoreParams};
use crate::error::{Error, Result};

/// Additive change to some teams' attack parameters from a given round on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    /// First affected round, counted from 0 across all seasons.
    pub from_round: usize,
    /// `(team, shift)` pairs, teams numbered from 1.
    pub alpha_shift: Vec<(usize, f64)>,
}

/// Synthetic league: double round-robin seasons with each round split over
/// two consecutive days.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonConfig {
    pub truth: ScoreParams,
    /// Probability that a team plays in the style of interest in a match.
    pub style_prob: f64,
    pub first_day: i64,
    /// Days between consecutive rounds.
    pub round_gap: i64,
    pub seasons: usize,
    pub drift: Option<Drift>,
}

impl SeasonConfig {
    /// A 20-team style league with attack strengths spread over ±0.3,
    /// defensive weaknesses over ±0.3 around 0.1, and γ = 0.25.
    pub fn reference(delta: f64, rho: f64) -> Self {
        Self::with_teams(20, delta, rho)
    }

    pub fn with_teams(teams: usize, delta: f64, rho: f64) -> Self {
        let spread = |i: usize| 0.3 * (1.0 - 2.0 * i as f64 / (teams - 1) as f64);
        let alpha: Vec<f64> = (0..teams).map(spread).collect();
        let beta: Vec<f64> = (0..teams).map(|i| 0.1 - spread(i)).collect();
        let alpha_sum: f64 = alpha.iter().sum();
        let mut alpha = alpha;
        alpha[teams - 1] -= alpha_sum;
        Self {
            truth: ScoreParams {
                gamma: 0.25,
                alpha,
                beta,
                rho,
                delta,
                xi: 0.0,
            },
            style_prob: 0.3,
            first_day: 1,
            round_gap: 7,
            seasons: 1,
            drift: None,
        }
    }

    /// Days of round `round` (0-based): the first half of its matches is
    /// played on the first day, the rest on the next.
    pub fn round_days(&self, round: usize) -> (i64, i64) {
        let d = self.first_day + round as i64 * self.round_gap;
        (d, d + 1)
    }
}

/// Double round-robin schedule by the circle method: `2(T-1)` rounds for
/// even `T` (a bye is added for odd `T`). The second half mirrors the first
/// with venues swapped.
pub fn round_robin(teams: usize) -> Vec<Vec<(usize, usize)>> {
    let n = teams + teams % 2;
    let mut ring: Vec<usize> = (1..n).collect();
    let mut first = Vec::with_capacity(n - 1);
    for r in 0..n - 1 {
        let mut round = Vec::with_capacity(n / 2);
        let pair = if r % 2 == 0 {
            (n, ring[0])
        } else {
            (ring[0], n)
        };
        round.push(pair);
        for k in 1..n / 2 {
            let (a, b) = (ring[k], ring[n - 1 - k]);
            round.push(if k % 2 == 0 { (a, b) } else { (b, a) });
        }
        round.retain(|&(h, a)| h <= teams && a <= teams);
        first.push(round);
        ring.rotate_right(1);
    }
    let second: Vec<Vec<(usize, usize)>> = first
        .iter()
        .map(|round| round.iter().map(|&(h, a)| (a, h)).collect())
        .collect();
    first.into_iter().chain(second).collect()
}

fn poisson(rate: f64, rng: &mut impl Rng) -> u32 {
    let u: f64 = rng.gen();
    let mut k = 0u32;
    let mut p = (-rate).exp();
    let mut cdf = p;
    while u > cdf && k < 200 {
        k += 1;
        p *= rate / k as f64;
        cdf += p;
    }
    k
}

/// Draws a scoreline from the corrected bivariate distribution by rejection
/// from independent Poisson margins.
pub fn sample_scoreline(lambda: f64, mu: f64, rho: f64, rng: &mut impl Rng) -> (u32, u32) {
    let bound = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .iter()
        .map(|&(x, y)| tau(x, y, lambda, mu, rho))
        .fold(1.0f64, f64::max);
    loop {
        let (x, y) = (poisson(lambda, rng), poisson(mu, rng));
        if rng.gen::<f64>() * bound <= tau(x, y, lambda, mu, rho) {
            return (x, y);
        }
    }
}

/// Generates `cfg.seasons` seasons of matches.
pub fn generate_season(cfg: &SeasonConfig, seed: u64) -> Result<Vec<MatchRecord>> {
    let teams = cfg.truth.team_count();
    if teams < 2 || cfg.truth.beta.len() != teams {
        return Err(Error::InvalidParameter(
            "league needs at least two teams".into(),
        ));
    }
    if !(0.0..=1.0).contains(&cfg.style_prob) {
        return Err(Error::InvalidProbability(format!(
            "style probability {}",
            cfg.style_prob
        )));
    }
    let schedule = round_robin(teams);
    let mut shifted = cfg.truth.clone();
    if let Some(d) = &cfg.drift {
        for &(team, s) in &d.alpha_shift {
            if team == 0 || team > teams {
                return Err(Error::IndexOutOfRange {
                    index: team,
                    node_count: teams,
                });
            }
            shifted.alpha[team - 1] += s;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(cfg.seasons * schedule.len() * teams / 2);
    for season in 0..cfg.seasons {
        for (r, round) in schedule.iter().enumerate() {
            let g = season * schedule.len() + r;
            let params = match &cfg.drift {
                Some(d) if g >= d.from_round => &shifted,
                _ => &cfg.truth,
            };
            let (day1, day2) = cfg.round_days(g);
            let split = round.len().div_ceil(2);
            for (k, &(home, away)) in round.iter().enumerate() {
                let date = if k < split { day1 } else { day2 };
                let home_style = rng.gen_bool(cfg.style_prob);
                let away_style = rng.gen_bool(cfg.style_prob);
                let mut m = MatchRecord::new(date, home, away, 0, 0, home_style, away_style)?;
                let (lambda, mu) = rates(params, &m);
                (m.home_goals, m.away_goals) = sample_scoreline(lambda, mu, params.rho, &mut rng);
                out.push(m);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn schedule_is_a_double_round_robin() {
        for teams in [4, 5, 20] {
            let rounds = round_robin(teams);
            let n = teams + teams % 2;
            assert_eq!(rounds.len(), 2 * (n - 1));
            let pairs: HashSet<(usize, usize)> = rounds.iter().flatten().copied().collect();
            assert_eq!(pairs.len(), teams * (teams - 1));
            for round in &rounds {
                let mut seen = HashSet::new();
                for &(h, a) in round {
                    assert!(seen.insert(h) && seen.insert(a));
                }
            }
        }
    }

    #[test]
    fn reference_season_shape() {
        let cfg = SeasonConfig::reference(0.2, 0.0);
        assert!(cfg.truth.alpha.iter().sum::<f64>().abs() < 1e-12);
        let data = generate_season(&cfg, 3).unwrap();
        assert_eq!(data.len(), 380);
        let days: HashSet<i64> = data.iter().map(|m| m.date).collect();
        assert_eq!(days.len(), 76);
        assert_eq!(data.iter().filter(|m| m.date == 1).count(), 5);
        assert_eq!(data, generate_season(&cfg, 3).unwrap());
    }

    #[test]
    fn corrected_sampler_matches_low_score_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (l, m, rho) = (1.2, 0.9, -0.15);
        let n = 200_000;
        let zeros = (0..n)
            .filter(|_| sample_scoreline(l, m, rho, &mut rng) == (0, 0))
            .count();
        let expected = tau(0, 0, l, m, rho) * (-(l + m) as f64).exp();
        assert!((zeros as f64 / n as f64 - expected).abs() < 0.004);
    }
}
