use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{
    decay_weight, log_poisson, match_logterm, rates, team_count, MatchRecord, ScoreParams,
};
use crate::error::{Error, Result};

/// Options for a single pseudolikelihood fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub xi: f64,
    /// Hold δ at this value and maximize over the rest (profile evaluation).
    pub fixed_delta: Option<f64>,
    /// Hold ρ at this value.
    pub fixed_rho: Option<f64>,
    pub max_iterations: usize,
    /// Convergence threshold on the max-norm of the gradient divided by the
    /// total match weight.
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            xi: 0.0,
            fixed_delta: None,
            fixed_rho: None,
            max_iterations: 500,
            tolerance: 1e-8,
        }
    }
}

impl FitOptions {
    pub fn with_xi(xi: f64) -> Self {
        Self {
            xi,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: ScoreParams,
    /// Maximized weighted log pseudolikelihood.
    pub loglik: f64,
    pub iterations: usize,
    /// Matches in the fitting window.
    pub matches: usize,
}

/// Value, score and Hessian of one match's weighted term, in free
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchDerivatives {
    pub value: f64,
    pub score: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

/// Derivatives with respect to the local coordinates (log λ, log μ, ρ).
struct Local {
    value: f64,
    g: [f64; 3],
    h: [[f64; 3]; 3],
}

fn local(m: &MatchRecord, params: &ScoreParams) -> Result<Local> {
    let (l, mu) = rates(params, m);
    let rho = params.rho;
    let (x, y) = (m.home_goals, m.away_goals);
    let mut tg = [0.0; 3];
    let mut th = [[0.0; 3]; 3];
    let tv = match (x, y) {
        (0, 0) => {
            let p = l * mu;
            tg = [-p * rho, -p * rho, -p];
            th = [
                [-p * rho, -p * rho, -p],
                [-p * rho, -p * rho, -p],
                [-p, -p, 0.0],
            ];
            1.0 - p * rho
        }
        (0, 1) => {
            tg = [l * rho, 0.0, l];
            th[0][0] = l * rho;
            th[0][2] = l;
            th[2][0] = l;
            1.0 + l * rho
        }
        (1, 0) => {
            tg = [0.0, mu * rho, mu];
            th[1][1] = mu * rho;
            th[1][2] = mu;
            th[2][1] = mu;
            1.0 + mu * rho
        }
        (1, 1) => {
            tg[2] = -1.0;
            1.0 - rho
        }
        _ => 1.0,
    };
    if !(tv > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "low-score correction is {tv} for rho = {rho}"
        )));
    }
    let mut g = [0.0; 3];
    let mut h = [[0.0; 3]; 3];
    for a in 0..3 {
        g[a] = tg[a] / tv;
    }
    for a in 0..3 {
        for b in 0..3 {
            h[a][b] = th[a][b] / tv - g[a] * g[b];
        }
    }
    g[0] += x as f64 - l;
    g[1] += y as f64 - mu;
    h[0][0] -= l;
    h[1][1] -= mu;
    let value = tv.ln() + log_poisson(x, l) + log_poisson(y, mu);
    Ok(Local { value, g, h })
}

type Design = [Vec<(usize, f64)>; 3];

fn push_alpha(v: &mut Vec<(usize, f64)>, team: usize, teams: usize) {
    if team < teams {
        v.push((team - 1, 1.0));
    } else {
        v.extend((0..teams - 1).map(|k| (k, -1.0)));
    }
}

/// Sparse gradients of (log λ, log μ, ρ) with respect to the free vector.
fn design(m: &MatchRecord, teams: usize) -> Design {
    let beta = |team: usize| teams - 1 + team - 1;
    let delta = ScoreParams::delta_index(teams);
    let mut d1 = Vec::with_capacity(teams + 3);
    push_alpha(&mut d1, m.home, teams);
    d1.push((beta(m.away), 1.0));
    d1.push((ScoreParams::gamma_index(teams), 1.0));
    if m.home_style {
        d1.push((delta, 1.0));
    }
    let mut d2 = Vec::with_capacity(teams + 2);
    push_alpha(&mut d2, m.away, teams);
    d2.push((beta(m.home), 1.0));
    if m.away_style {
        d2.push((delta, 1.0));
    }
    [d1, d2, vec![(ScoreParams::rho_index(teams), 1.0)]]
}

fn add_match(loc: &Local, d: &Design, w: f64, grad: &mut [f64], hess: Option<&mut DMatrix<f64>>) {
    for a in 0..3 {
        for &(i, c) in &d[a] {
            grad[i] += w * loc.g[a] * c;
        }
    }
    if let Some(hess) = hess {
        for a in 0..3 {
            for b in 0..3 {
                let hab = w * loc.h[a][b];
                if hab == 0.0 {
                    continue;
                }
                for &(i, ci) in &d[a] {
                    for &(j, cj) in &d[b] {
                        hess[(i, j)] += hab * ci * cj;
                    }
                }
            }
        }
    }
}

/// Derivatives of a single match term at time `t`.
pub fn match_derivatives(
    m: &MatchRecord,
    params: &ScoreParams,
    t: i64,
) -> Result<MatchDerivatives> {
    let teams = params.team_count();
    let p = ScoreParams::free_len(teams);
    let w = decay_weight(params.xi, t, m.date);
    let loc = local(m, params)?;
    let mut grad = vec![0.0; p];
    let mut hess = DMatrix::zeros(p, p);
    add_match(&loc, &design(m, teams), w, &mut grad, Some(&mut hess));
    Ok(MatchDerivatives {
        value: w * loc.value,
        score: DVector::from_vec(grad),
        hessian: hess,
    })
}

/// Weighted log pseudolikelihood of a window at time `t`.
pub fn window_loglik(window: &[MatchRecord], params: &ScoreParams, t: i64) -> Result<f64> {
    window.iter().map(|m| match_logterm(m, params, t)).sum()
}

fn evaluate(
    window: &[MatchRecord],
    designs: &[Design],
    weights: &[f64],
    params: &ScoreParams,
) -> Result<(f64, Vec<f64>, DMatrix<f64>)> {
    let p = ScoreParams::free_len(params.team_count());
    let mut value = 0.0;
    let mut grad = vec![0.0; p];
    let mut hess = DMatrix::zeros(p, p);
    for ((m, d), &w) in window.iter().zip(designs).zip(weights) {
        let loc = local(m, params)?;
        value += w * loc.value;
        add_match(&loc, d, w, &mut grad, Some(&mut hess));
    }
    Ok((value, grad, hess))
}

fn value_only(window: &[MatchRecord], weights: &[f64], params: &ScoreParams) -> Option<f64> {
    let mut value = 0.0;
    for (m, &w) in window.iter().zip(weights) {
        value += w * local(m, params).ok()?.value;
    }
    Some(value)
}

fn initial_params(window: &[MatchRecord], teams: usize, xi: f64) -> ScoreParams {
    let n = window.len().max(1) as f64;
    let home = (window.iter().map(|m| m.home_goals as f64).sum::<f64>() / n).max(0.1);
    let away = (window.iter().map(|m| m.away_goals as f64).sum::<f64>() / n).max(0.1);
    let mut p = ScoreParams::neutral(teams, xi);
    p.beta = vec![away.ln(); teams];
    p.gamma = (home / away).ln();
    p
}

/// Solves `A s = b` for symmetric `A` that should be positive definite,
/// adding diagonal damping when it is not.
fn damped_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    if let Some(ch) = a.clone().cholesky() {
        return ch.solve(b);
    }
    let scale = a
        .diagonal()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let mut lam = 1e-10 * scale;
    loop {
        let mut damped = a.clone();
        for i in 0..damped.nrows() {
            damped[(i, i)] += lam;
        }
        if let Some(ch) = damped.cholesky() {
            return ch.solve(b);
        }
        lam *= 10.0;
    }
}

/// Newton ascent on the free parameters over an already selected window.
///
/// `teams` is the league size; every team should appear in `window`.
pub fn fit_window(
    window: &[MatchRecord],
    teams: usize,
    t: i64,
    opts: &FitOptions,
    start: Option<&ScoreParams>,
) -> Result<FitResult> {
    if window.is_empty() {
        return Err(Error::EmptyRange(format!("no matches before t = {t}")));
    }
    let mut params = match start {
        Some(s) => ScoreParams {
            xi: opts.xi,
            ..s.clone()
        },
        None => initial_params(window, teams, opts.xi),
    };
    if let Some(d) = opts.fixed_delta {
        params.delta = d;
    }
    if let Some(r) = opts.fixed_rho {
        params.rho = r;
    }
    let mut active: Vec<usize> = (0..ScoreParams::free_len(teams)).collect();
    active.retain(|&i| {
        !(opts.fixed_delta.is_some() && i == ScoreParams::delta_index(teams)
            || opts.fixed_rho.is_some() && i == ScoreParams::rho_index(teams))
    });
    let designs: Vec<Design> = window.iter().map(|m| design(m, teams)).collect();
    let weights: Vec<f64> = window
        .iter()
        .map(|m| decay_weight(opts.xi, t, m.date))
        .collect();
    let total_weight: f64 = weights.iter().sum();
    let mut x = params.to_free();
    let n = active.len();
    let mut grad_norm = f64::INFINITY;
    for iteration in 0..opts.max_iterations {
        let (value, grad, hess) = evaluate(window, &designs, &weights, &params)?;
        grad_norm = active.iter().map(|&i| grad[i].abs()).fold(0.0, f64::max) / total_weight;
        if grad_norm < opts.tolerance {
            return Ok(FitResult {
                params,
                loglik: value,
                iterations: iteration,
                matches: window.len(),
            });
        }
        let a = DMatrix::from_fn(n, n, |r, c| -hess[(active[r], active[c])]);
        let b = DVector::from_fn(n, |r, _| grad[active[r]]);
        let step = damped_solve(&a, &b);
        let slope = step.dot(&b);
        let mut size = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial = x.clone();
            for (r, &i) in active.iter().enumerate() {
                trial[i] += size * step[r];
            }
            let tp = ScoreParams::from_free(&trial, teams, opts.xi);
            if let Some(v) = value_only(window, &weights, &tp) {
                let armijo = v >= value + 1e-4 * size * slope;
                let flat = size == 1.0 && v >= value - 1e-12 * (1.0 + value.abs());
                if armijo || flat {
                    accepted = Some((trial, tp));
                    break;
                }
            }
            size *= 0.5;
        }
        match accepted {
            Some((trial, tp)) => {
                x = trial;
                params = tp;
            }
            None => break,
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iterations,
        grad_norm,
    })
}

/// Matches strictly before `t`.
pub(crate) fn window_before(data: &[MatchRecord], t: i64) -> Vec<MatchRecord> {
    data.iter().filter(|m| m.date < t).copied().collect()
}

pub(crate) fn check_window(window: &[MatchRecord], teams: usize, opts: &FitOptions) -> Result<()> {
    let mut seen = vec![false; teams];
    for m in window {
        seen[m.home - 1] = true;
        seen[m.away - 1] = true;
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::TeamNotObserved(missing + 1));
    }
    if opts.fixed_delta.is_none() {
        let first = window.first().map(|m| m.home_style);
        let varies = window
            .iter()
            .any(|m| Some(m.home_style) != first || Some(m.away_style) != first);
        if !varies {
            return Err(Error::RankDeficient(
                "style indicator is constant in the fitting window; delta is not identifiable"
                    .into(),
            ));
        }
    }
    Ok(())
}

/// Maximizes the pseudolikelihood over the matches played before `t`.
///
/// The league size is the largest team id in `data`.
pub fn fit(data: &[MatchRecord], t: i64, opts: &FitOptions) -> Result<FitResult> {
    let teams = team_count(data);
    if teams < 2 {
        return Err(Error::Invalid("need at least two teams".into()));
    }
    let window = window_before(data, t);
    if window.is_empty() {
        return Err(Error::EmptyRange(format!("no matches before t = {t}")));
    }
    check_window(&window, teams, opts)?;
    fit_window(&window, teams, t, opts, None)
}
