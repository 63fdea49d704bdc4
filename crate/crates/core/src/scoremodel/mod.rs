//! Dixon-Coles goals model extended with a playing-style effect.
//!
//! For match k with home team i and away team j the goal rates are
//! `log λ = γ + α_i + β_j + δ c_home` and `log μ = α_j + β_i + δ c_away`,
//! where `c` flags that the team played in the style of interest. Scorelines
//! follow independent Poisson margins with the Dixon-Coles low-score
//! correction τ, and each match enters the pseudolikelihood at time `t` with
//! weight `exp(-ξ (t - t_k))`.
//!
//! Attack parameters are constrained to sum to zero; the last team's α is
//! always minus the sum of the others.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

mod fit;
mod inference;
mod synth;
mod xi;

pub use fit::{
    fit, fit_window, match_derivatives, window_loglik, FitOptions, FitResult, MatchDerivatives,
};
pub use inference::{
    adjustment_from, delta_ci, exclude_last_matches, godambe_adjustment, rolling_cis,
    sandwich_matrices, CiConfig, ProfileResult, Sandwich,
};
pub use synth::{generate_season, round_robin, sample_scoreline, Drift, SeasonConfig};
pub use xi::{optimize_xi, predictive_log_score, XiConfig};

/// Scorelines 0..=MAX_GOALS per side are summed for outcome probabilities.
pub const MAX_GOALS: u32 = 10;

/// Default temporal decay, per day.
pub const DEFAULT_XI: f64 = 0.003;

/// One played match. Teams are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub date: i64,
    pub home: usize,
    pub away: usize,
    pub home_goals: u32,
    pub away_goals: u32,
    pub home_style: bool,
    pub away_style: bool,
}

impl MatchRecord {
    pub fn new(
        date: i64,
        home: usize,
        away: usize,
        home_goals: u32,
        away_goals: u32,
        home_style: bool,
        away_style: bool,
    ) -> Result<Self> {
        if home == 0 || away == 0 {
            return Err(Error::Invalid("team ids start at 1".into()));
        }
        if home == away {
            return Err(Error::Invalid(format!("team {home} cannot play itself")));
        }
        Ok(Self {
            date,
            home,
            away,
            home_goals,
            away_goals,
            home_style,
            away_style,
        })
    }
}

/// Number of teams implied by a set of matches (largest id).
pub fn team_count(data: &[MatchRecord]) -> usize {
    data.iter().map(|m| m.home.max(m.away)).max().unwrap_or(0)
}

/// Model parameters. `alpha[i]` and `beta[i]` belong to team `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreParams {
    pub gamma: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub rho: f64,
    pub delta: f64,
    pub xi: f64,
}

impl ScoreParams {
    /// Validated constructor; `alpha` must already sum to zero.
    pub fn new(
        gamma: f64,
        alpha: Vec<f64>,
        beta: Vec<f64>,
        rho: f64,
        delta: f64,
        xi: f64,
    ) -> Result<Self> {
        if alpha.len() < 2 || alpha.len() != beta.len() {
            return Err(Error::InvalidParameter(format!(
                "need matching alpha/beta for at least 2 teams, got {} and {}",
                alpha.len(),
                beta.len()
            )));
        }
        let sum: f64 = alpha.iter().sum();
        if sum.abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "attack parameters must sum to zero, sum is {sum}"
            )));
        }
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "xi must be finite and nonnegative, got {xi}"
            )));
        }
        let all = [gamma, rho, delta]
            .into_iter()
            .chain(alpha.iter().copied())
            .chain(beta.iter().copied());
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite parameter".into()));
        }
        Ok(Self {
            gamma,
            alpha,
            beta,
            rho,
            delta,
            xi,
        })
    }

    /// All effects zero.
    pub fn neutral(teams: usize, xi: f64) -> Self {
        Self {
            gamma: 0.0,
            alpha: vec![0.0; teams],
            beta: vec![0.0; teams],
            rho: 0.0,
            delta: 0.0,
            xi,
        }
    }

    pub fn team_count(&self) -> usize {
        self.alpha.len()
    }

    /// Length of the free-parameter vector for `teams` teams.
    pub fn free_len(teams: usize) -> usize {
        2 * teams + 2
    }

    /// Position of γ in the free vector.
    pub fn gamma_index(teams: usize) -> usize {
        2 * teams - 1
    }

    pub fn rho_index(teams: usize) -> usize {
        2 * teams
    }

    pub fn delta_index(teams: usize) -> usize {
        2 * teams + 1
    }

    /// Free vector `[α_1..α_{T-1}, β_1..β_T, γ, ρ, δ]`.
    pub fn to_free(&self) -> Vec<f64> {
        let t = self.team_count();
        let mut v = Vec::with_capacity(Self::free_len(t));
        v.extend_from_slice(&self.alpha[..t - 1]);
        v.extend_from_slice(&self.beta);
        v.extend([self.gamma, self.rho, self.delta]);
        v
    }

    /// Inverse of [`to_free`](Self::to_free); the last α is set so the
    /// attack parameters sum to zero.
    pub fn from_free(free: &[f64], teams: usize, xi: f64) -> Self {
        assert_eq!(free.len(), Self::free_len(teams), "free vector length");
        let mut alpha = free[..teams - 1].to_vec();
        alpha.push(-alpha.iter().sum::<f64>());
        Self {
            gamma: free[Self::gamma_index(teams)],
            alpha,
            beta: free[teams - 1..2 * teams - 1].to_vec(),
            rho: free[Self::rho_index(teams)],
            delta: free[Self::delta_index(teams)],
            xi,
        }
    }
}

/// Home and away goal rates `(λ, μ)` for a match.
pub fn rates(params: &ScoreParams, m: &MatchRecord) -> (f64, f64) {
    let (i, j) = (m.home - 1, m.away - 1);
    let ch = if m.home_style { 1.0 } else { 0.0 };
    let ca = if m.away_style { 1.0 } else { 0.0 };
    let lambda = (params.gamma + params.alpha[i] + params.beta[j] + params.delta * ch).exp();
    let mu = (params.alpha[j] + params.beta[i] + params.delta * ca).exp();
    (lambda, mu)
}

/// Dixon-Coles low-score correction.
pub fn tau(x: u32, y: u32, lambda: f64, mu: f64, rho: f64) -> f64 {
    match (x, y) {
        (0, 0) => 1.0 - lambda * mu * rho,
        (0, 1) => 1.0 + lambda * rho,
        (1, 0) => 1.0 + mu * rho,
        (1, 1) => 1.0 - rho,
        _ => 1.0,
    }
}

pub(crate) fn log_poisson(k: u32, rate: f64) -> f64 {
    k as f64 * rate.ln() - rate - ln_factorial(k as u64)
}

/// Decay weight of a match played on `date` as seen from time `t`.
pub fn decay_weight(xi: f64, t: i64, date: i64) -> f64 {
    (-xi * (t - date) as f64).exp()
}

/// Weighted log-likelihood contribution of one match at time `t`.
pub fn match_logterm(m: &MatchRecord, params: &ScoreParams, t: i64) -> Result<f64> {
    if m.date > t {
        return Err(Error::Invalid(format!(
            "match on day {} lies after t = {t}",
            m.date
        )));
    }
    let (lambda, mu) = rates(params, m);
    let tv = tau(m.home_goals, m.away_goals, lambda, mu, params.rho);
    if !(tv > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "low-score correction is {tv} for rho = {} (lambda = {lambda}, mu = {mu})",
            params.rho
        )));
    }
    let ll = tv.ln() + log_poisson(m.home_goals, lambda) + log_poisson(m.away_goals, mu);
    Ok(decay_weight(params.xi, t, m.date) * ll)
}

/// Probabilities of home win, draw and away win, summing the corrected
/// scoreline mass over 0..=[`MAX_GOALS`] per side.
pub fn outcome_probabilities(params: &ScoreParams, m: &MatchRecord) -> [f64; 3] {
    let (lambda, mu) = rates(params, m);
    let mut p = [0.0; 3];
    for x in 0..=MAX_GOALS {
        for y in 0..=MAX_GOALS {
            let mass = tau(x, y, lambda, mu, params.rho).max(0.0)
                * (log_poisson(x, lambda) + log_poisson(y, mu)).exp();
            let slot = match x.cmp(&y) {
                std::cmp::Ordering::Greater => 0,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 2,
            };
            p[slot] += mass;
        }
    }
    p
}

/// How a date column was written, so output can mirror the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum DateFormat {
    /// Plain integer day number.
    #[default]
    Day,
    /// `YYYY-MM-DD`, stored as days since 1970-01-01.
    Iso,
}

fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid epoch")
}

/// Parses an integer day or an ISO date.
pub fn parse_day(s: &str) -> Result<(i64, DateFormat)> {
    let s = s.trim();
    if let Ok(d) = s.parse::<i64>() {
        return Ok((d, DateFormat::Day));
    }
    let date = NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|_| Error::Invalid(format!("unparseable date `{s}`")))?;
    Ok(((date - epoch()).num_days(), DateFormat::Iso))
}

pub fn format_day(day: i64, format: DateFormat) -> String {
    match format {
        DateFormat::Day => day.to_string(),
        DateFormat::Iso => (epoch() + chrono::Duration::days(day))
            .format("%Y-%m-%d")
            .to_string(),
    }
}
