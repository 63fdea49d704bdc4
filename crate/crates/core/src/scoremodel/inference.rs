use std::collections::{BTreeSet, HashMap};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use tracing::debug;

use super::fit::{check_window, fit_window, match_derivatives, window_before, FitOptions};
use super::{team_count, MatchRecord, ScoreParams};
use crate::error::{Error, Result};

/// Sensitivity `H` and variability `J`, both averaged over the window.
#[derive(Debug, Clone, PartialEq)]
pub struct Sandwich {
    pub h: DMatrix<f64>,
    pub j: DMatrix<f64>,
    pub matches: usize,
}

/// `H = -(1/n) Σ ∇u_k` and `J = (1/n) Σ u_k u_kᵀ` at `params`, over the
/// matches in `window`.
pub fn sandwich_matrices(window: &[MatchRecord], params: &ScoreParams, t: i64) -> Result<Sandwich> {
    let p = ScoreParams::free_len(params.team_count());
    let mut h = DMatrix::zeros(p, p);
    let mut j = DMatrix::zeros(p, p);
    for m in window {
        let d = match_derivatives(m, params, t)?;
        h -= &d.hessian;
        j.ger(1.0, &d.score, &d.score, 1.0);
    }
    let n = window.len().max(1) as f64;
    Ok(Sandwich {
        h: h / n,
        j: j / n,
        matches: window.len(),
    })
}

const MAX_CONDITION: f64 = 1e12;

fn checked_inverse(m: &DMatrix<f64>, which: &'static str) -> Result<DMatrix<f64>> {
    let sv = m.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !(condition < MAX_CONDITION) {
        return Err(Error::SingularMatrix { which, condition });
    }
    m.clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix { which, condition })
}

/// `(H⁻¹ J H⁻¹)_δδ / (H⁻¹)_δδ`: the factor dividing the composite
/// likelihood-ratio statistic for δ.
pub fn adjustment_from(s: &Sandwich) -> Result<f64> {
    checked_inverse(&s.j, "variability")?;
    let hinv = checked_inverse(&s.h, "sensitivity")?;
    let k = s.h.nrows() - 1;
    let row = hinv.row(k);
    let g_inv_dd = (row * &s.j * row.transpose())[(0, 0)];
    Ok(g_inv_dd / hinv[(k, k)])
}

/// Adjustment factor at the unrestricted maximizer for time `t`.
pub fn godambe_adjustment(data: &[MatchRecord], t: i64, psi_hat: &ScoreParams) -> Result<f64> {
    let window = window_before(data, t);
    adjustment_from(&sandwich_matrices(&window, psi_hat, t)?)
}

/// Settings for the adjusted profile-likelihood interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiConfig {
    pub level: f64,
    pub xi: f64,
    /// Search covers δ̂ ± half_width.
    pub half_width: f64,
    pub step: f64,
    /// Endpoint bisection tolerance.
    pub tolerance: f64,
}

impl Default for CiConfig {
    fn default() -> Self {
        Self {
            level: 0.95,
            xi: super::DEFAULT_XI,
            half_width: 2.0,
            step: 0.01,
            tolerance: 1e-4,
        }
    }
}

/// Profile interval for δ at one time point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileResult {
    pub t: i64,
    pub level: f64,
    pub delta_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub adjustment: f64,
    pub matches: usize,
    /// Evaluated δ values, ascending, with their profile log-likelihoods.
    pub grid: Vec<f64>,
    pub profile: Vec<f64>,
}

impl ProfileResult {
    pub fn width(&self) -> f64 {
        self.ci_high - self.ci_low
    }

    pub fn contains(&self, delta: f64) -> bool {
        self.ci_low <= delta && delta <= self.ci_high
    }
}

struct Profiler<'a> {
    window: &'a [MatchRecord],
    teams: usize,
    t: i64,
    xi: f64,
    peak: f64,
    adjustment: f64,
    points: Vec<(f64, f64)>,
}

impl Profiler<'_> {
    fn eval(&mut self, delta: f64, start: &ScoreParams) -> Result<(f64, ScoreParams)> {
        let opts = FitOptions {
            xi: self.xi,
            fixed_delta: Some(delta),
            ..FitOptions::default()
        };
        let r = fit_window(self.window, self.teams, self.t, &opts, Some(start))?;
        self.points.push((delta, r.loglik));
        let stat = 2.0 * (self.peak - r.loglik) / self.adjustment;
        Ok((stat, r.params))
    }

    fn endpoint(&mut self, hat: &ScoreParams, dir: f64, cfg: &CiConfig, q: f64) -> Result<f64> {
        let steps = (cfg.half_width / cfg.step).round() as usize;
        let mut inside = (hat.delta, hat.clone());
        for k in 1..=steps {
            let delta = hat.delta + dir * k as f64 * cfg.step;
            let (stat, params) = self.eval(delta, &inside.1)?;
            if stat >= q {
                let (mut a, mut b) = (inside.0, delta);
                let mut warm = inside.1;
                while (b - a).abs() > cfg.tolerance {
                    let mid = 0.5 * (a + b);
                    let (s, p) = self.eval(mid, &warm)?;
                    if s < q {
                        a = mid;
                        warm = p;
                    } else {
                        b = mid;
                    }
                }
                return Ok(0.5 * (a + b));
            }
            inside = (delta, params);
        }
        Err(Error::GridTooNarrow {
            low: hat.delta - cfg.half_width,
            high: hat.delta + cfg.half_width,
        })
    }
}

fn delta_ci_window(
    window: &[MatchRecord],
    teams: usize,
    t: i64,
    cfg: &CiConfig,
) -> Result<ProfileResult> {
    if !(cfg.level > 0.0 && cfg.level < 1.0) {
        return Err(Error::Invalid(format!(
            "confidence level must lie in (0, 1), got {}",
            cfg.level
        )));
    }
    if !(cfg.step > 0.0 && cfg.half_width >= cfg.step && cfg.tolerance > 0.0) {
        return Err(Error::Invalid(
            "profile grid needs positive step, half-width and tolerance".into(),
        ));
    }
    let opts = FitOptions::with_xi(cfg.xi);
    check_window(window, teams, &opts)?;
    let full = fit_window(window, teams, t, &opts, None)?;
    let adjustment = adjustment_from(&sandwich_matrices(window, &full.params, t)?)?;
    let q = ChiSquared::new(1.0)
        .expect("one degree of freedom")
        .inverse_cdf(cfg.level);
    let mut prof = Profiler {
        window,
        teams,
        t,
        xi: cfg.xi,
        peak: full.loglik,
        adjustment,
        points: vec![],
    };
    prof.points.push((full.params.delta, full.loglik));
    let high = prof.endpoint(&full.params, 1.0, cfg, q)?;
    let low = prof.endpoint(&full.params, -1.0, cfg, q)?;
    let mut points = prof.points;
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    debug!(
        t,
        delta_hat = full.params.delta,
        low,
        high,
        adjustment,
        "profile interval"
    );
    Ok(ProfileResult {
        t,
        level: cfg.level,
        delta_hat: full.params.delta,
        ci_low: low,
        ci_high: high,
        adjustment,
        matches: window.len(),
        grid: points.iter().map(|p| p.0).collect(),
        profile: points.iter().map(|p| p.1).collect(),
    })
}

/// Adjusted composite profile-likelihood interval for δ from the matches
/// played before `t`.
pub fn delta_ci(data: &[MatchRecord], t: i64, cfg: &CiConfig) -> Result<ProfileResult> {
    delta_ci_window(&window_before(data, t), team_count(data), t, cfg)
}

/// Drops every match that is among the last `k` matches of either team.
pub fn exclude_last_matches(data: &[MatchRecord], k: usize) -> Vec<MatchRecord> {
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by_key(|&i| data[i].date);
    let mut per_team: HashMap<usize, Vec<usize>> = HashMap::new();
    for &i in &order {
        per_team.entry(data[i].home).or_default().push(i);
        per_team.entry(data[i].away).or_default().push(i);
    }
    let mut dropped = vec![false; data.len()];
    for list in per_team.values() {
        for &i in list.iter().rev().take(k) {
            dropped[i] = true;
        }
    }
    data.iter()
        .zip(&dropped)
        .filter(|(_, &d)| !d)
        .map(|(m, _)| *m)
        .collect()
}

/// One interval per distinct match date in `[from, to]`, after removing each
/// team's last `exclude_last` matches from the data.
pub fn rolling_cis(
    data: &[MatchRecord],
    from: i64,
    to: i64,
    cfg: &CiConfig,
    exclude_last: usize,
) -> Result<Vec<ProfileResult>> {
    if from > to {
        return Err(Error::EmptyRange(format!("from {from} is after to {to}")));
    }
    let teams = team_count(data);
    let kept = exclude_last_matches(data, exclude_last);
    let dates: Vec<i64> = kept
        .iter()
        .map(|m| m.date)
        .filter(|d| (from..=to).contains(d))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if dates.is_empty() {
        return Err(Error::EmptyRange(format!("no matchdays in [{from}, {to}]")));
    }
    dates
        .par_iter()
        .map(|&t| delta_ci_window(&window_before(&kept, t), teams, t, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exclusion_drops_each_teams_tail() {
        let mut data = vec![];
        for d in 0..8 {
            data.push(MatchRecord::new(d, 1, 2, 0, 0, false, false).unwrap());
            data.push(MatchRecord::new(d, 3, 4, 0, 0, false, false).unwrap());
        }
        data.push(MatchRecord::new(20, 1, 3, 0, 0, false, false).unwrap());
        let kept = exclude_last_matches(&data, 2);
        // teams 1 and 3 lose day 20 and day 7; teams 2 and 4 lose days 6 and 7
        assert!(kept.iter().all(|m| m.date <= 5));
        assert_eq!(kept.len(), 12);
    }

    #[test]
    fn degenerate_style_column_makes_sensitivity_singular() {
        let data: Vec<_> = (0..12)
            .map(|k| {
                let h = 1 + (k as usize % 3);
                let a = 1 + ((k as usize + 1) % 3);
                MatchRecord::new(k, h, a, (k % 3) as u32, (k % 2) as u32, false, false).unwrap()
            })
            .collect();
        let params = ScoreParams::neutral(3, 0.0);
        assert!(matches!(
            godambe_adjustment(&data, 100, &params),
            Err(Error::SingularMatrix { .. })
        ));
    }
}
