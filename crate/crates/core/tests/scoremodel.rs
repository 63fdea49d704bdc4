mod common;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use tactinet::scoremodel::{
    delta_ci, fit, generate_season, godambe_adjustment, match_logterm, optimize_xi, rolling_cis,
    CiConfig, Drift, FitOptions, MatchRecord, ScoreParams, SeasonConfig, XiConfig, DEFAULT_XI,
};
use tactinet::seed::derive_seed;

fn maher_options() -> FitOptions {
    FitOptions {
        fixed_delta: Some(0.0),
        fixed_rho: Some(0.0),
        ..FitOptions::with_xi(0.0)
    }
}

fn after(data: &[MatchRecord]) -> i64 {
    data.iter().map(|m| m.date).max().unwrap() + 1
}

fn m(date: i64, home: usize, away: usize, x: u32, y: u32) -> MatchRecord {
    MatchRecord::new(date, home, away, x, y, false, false).unwrap()
}

#[test]
fn two_team_fit_satisfies_the_normal_equations() {
    let data = vec![
        m(1, 1, 2, 2, 1),
        m(2, 2, 1, 1, 1),
        m(3, 1, 2, 3, 0),
        m(4, 2, 1, 2, 2),
        m(5, 1, 2, 0, 1),
        m(6, 2, 1, 1, 3),
    ];
    let p = fit(&data, 7, &maher_options()).unwrap().params;
    let (mut home, mut scored, mut conceded) = (0.0, [0.0; 2], [0.0; 2]);
    for r in &data {
        let lambda = (p.gamma + p.alpha[r.home - 1] + p.beta[r.away - 1]).exp();
        let mu = (p.alpha[r.away - 1] + p.beta[r.home - 1]).exp();
        let (rx, ry) = (r.home_goals as f64 - lambda, r.away_goals as f64 - mu);
        home += rx;
        scored[r.home - 1] += rx;
        scored[r.away - 1] += ry;
        conceded[r.away - 1] += rx;
        conceded[r.home - 1] += ry;
    }
    for residual in [home, scored[0], scored[1], conceded[0], conceded[1]] {
        assert!(residual.abs() < 1e-7, "{residual}");
    }
}

/// Poisson GLM by iteratively reweighted least squares, coded independently
/// of the model's own parametrization: returns `(γ, α, β)`.
fn irls_poisson(data: &[MatchRecord], teams: usize) -> (f64, Vec<f64>, Vec<f64>) {
    let p = 2 * teams;
    let row = |attack: usize, defend: usize, home: bool| {
        let mut x = vec![0.0; p];
        x[0] = if home { 1.0 } else { 0.0 };
        if attack < teams {
            x[attack] += 1.0;
        } else {
            for v in &mut x[1..teams] {
                *v -= 1.0;
            }
        }
        x[teams + defend - 1] += 1.0;
        x
    };
    let mut rows = vec![];
    let mut y = vec![];
    for r in data {
        rows.push(row(r.home, r.away, true));
        y.push(r.home_goals as f64);
        rows.push(row(r.away, r.home, false));
        y.push(r.away_goals as f64);
    }
    let x = DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]);
    let y = DVector::from_vec(y);
    let mut mu = y.map(|v| v + 0.5);
    let mut theta = DVector::zeros(p);
    for _ in 0..100 {
        let eta = mu.map(f64::ln);
        let z = DVector::from_fn(y.len(), |i, _| eta[i] + (y[i] - mu[i]) / mu[i]);
        let w = DMatrix::from_diagonal(&mu);
        let xtw = x.transpose() * &w;
        theta = (&xtw * &x).lu().solve(&(&xtw * z)).unwrap();
        mu = (&x * &theta).map(f64::exp);
    }
    let mut alpha: Vec<f64> = theta.as_slice()[1..teams].to_vec();
    alpha.push(-alpha.iter().sum::<f64>());
    (theta[0], alpha, theta.as_slice()[teams..].to_vec())
}

#[test]
fn maher_fit_matches_an_independent_glm() {
    let cfg = SeasonConfig {
        seasons: 2,
        ..SeasonConfig::with_teams(6, 0.0, 0.0)
    };
    let data = generate_season(&cfg, 41).unwrap();
    let p = fit(&data, after(&data), &maher_options()).unwrap().params;
    let (gamma, alpha, beta) = irls_poisson(&data, 6);
    assert!((p.gamma - gamma).abs() < 1e-6, "{} vs {gamma}", p.gamma);
    for (a, b) in p.alpha.iter().zip(&alpha).chain(p.beta.iter().zip(&beta)) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn relabelling_teams_permutes_the_estimates() {
    let data = generate_season(&SeasonConfig::with_teams(8, 0.2, -0.05), 5).unwrap();
    let perm = [3, 7, 1, 8, 2, 6, 4, 5];
    let relabelled: Vec<MatchRecord> = data
        .iter()
        .map(|r| MatchRecord {
            home: perm[r.home - 1],
            away: perm[r.away - 1],
            ..*r
        })
        .collect();
    let t = after(&data);
    let opts = FitOptions::default();
    let a = fit(&data, t, &opts).unwrap().params;
    let b = fit(&relabelled, t, &opts).unwrap().params;
    assert!(a.alpha.iter().sum::<f64>().abs() < 1e-12);
    assert!(b.alpha.iter().sum::<f64>().abs() < 1e-12);
    for i in 0..8 {
        assert!((a.alpha[i] - b.alpha[perm[i] - 1]).abs() < 1e-6);
        assert!((a.beta[i] - b.beta[perm[i] - 1]).abs() < 1e-6);
    }
    for (x, y) in [(a.gamma, b.gamma), (a.rho, b.rho), (a.delta, b.delta)] {
        assert!((x - y).abs() < 1e-6);
    }
}

#[test]
fn style_effect_is_recovered() {
    let cfg = SeasonConfig::reference(0.2, 0.0);
    let hits = (0..100u64)
        .into_par_iter()
        .filter(|&s| {
            let data = generate_season(&cfg, derive_seed(77, &[s])).unwrap();
            let delta = fit(&data, after(&data), &FitOptions::with_xi(0.0))
                .unwrap()
                .params
                .delta;
            (delta - 0.2).abs() <= 0.15
        })
        .count();
    assert!(hits >= 90, "{hits}/100 within 0.15");
}

#[test]
fn adjustment_is_near_one_under_a_correct_model() {
    let cfg = SeasonConfig {
        seasons: 14,
        ..SeasonConfig::reference(0.1, 0.0)
    };
    let data = generate_season(&cfg, 8).unwrap();
    assert!(data.len() >= 5000);
    let t = after(&data);
    let psi = fit(&data, t, &FitOptions::with_xi(0.0)).unwrap().params;
    let adj = godambe_adjustment(&data, t, &psi).unwrap();
    assert!((adj - 1.0).abs() <= 0.15, "adjustment {adj}");
}

#[test]
fn adjustment_matches_finite_differences() {
    let cfg = SeasonConfig {
        seasons: 2,
        ..SeasonConfig::with_teams(4, 0.3, 0.0)
    };
    let data: Vec<MatchRecord> = generate_season(&cfg, 19)
        .unwrap()
        .into_iter()
        .take(20)
        .collect();
    let t = after(&data);
    let psi = fit(&data, t, &FitOptions::with_xi(DEFAULT_XI))
        .unwrap()
        .params;
    let adj = godambe_adjustment(&data, t, &psi).unwrap();

    let teams = 4;
    let theta = psi.to_free();
    let n = theta.len();
    let at = |v: &[f64], r: &MatchRecord| {
        match_logterm(r, &ScoreParams::from_free(v, teams, psi.xi), t).unwrap()
    };
    let shifted = |k: usize, h: f64| {
        let mut v = theta.clone();
        v[k] += h;
        v
    };
    let h1 = 1e-5;
    let mut j = DMatrix::zeros(n, n);
    for r in &data {
        let u = DVector::from_fn(n, |k, _| {
            (at(&shifted(k, h1), r) - at(&shifted(k, -h1), r)) / (2.0 * h1)
        });
        j += &u * u.transpose();
    }
    let total = |v: &[f64]| data.iter().map(|r| at(v, r)).sum::<f64>();
    let h2 = 1e-4;
    let hess = DMatrix::from_fn(n, n, |a, b| {
        let f = |sa: f64, sb: f64| {
            let mut v = theta.clone();
            v[a] += sa;
            v[b] += sb;
            total(&v)
        };
        (f(h2, h2) - f(h2, -h2) - f(-h2, h2) + f(-h2, -h2)) / (4.0 * h2 * h2)
    });
    let hinv = (-hess).try_inverse().unwrap();
    let d = ScoreParams::delta_index(teams);
    let oracle = (&hinv * &j * &hinv)[(d, d)] / hinv[(d, d)];
    assert!(((adj - oracle) / oracle).abs() < 1e-4, "{adj} vs {oracle}");
}

#[test]
fn strong_effect_interval_excludes_zero() {
    let data = generate_season(&SeasonConfig::reference(0.5, 0.0), 3).unwrap();
    let r = delta_ci(
        &data,
        after(&data),
        &CiConfig {
            xi: 0.0,
            ..CiConfig::default()
        },
    )
    .unwrap();
    assert!(r.ci_low > 0.0, "[{}, {}]", r.ci_low, r.ci_high);
    assert!(r.contains(r.delta_hat));
    assert!(r.adjustment > 0.0);
}

#[test]
fn single_day_range_gives_one_interval() {
    let cfg = SeasonConfig::reference(0.2, 0.0);
    let data = generate_season(&cfg, 4).unwrap();
    let (day, _) = cfg.round_days(25);
    let r = rolling_cis(&data, day, day, &CiConfig::default(), 5).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].t, day);
}

fn drift_league(drift: bool) -> (SeasonConfig, XiConfig) {
    let mut cfg = SeasonConfig {
        seasons: 16,
        ..SeasonConfig::with_teams(4, 0.1, 0.0)
    };
    let rounds = 16 * 6;
    if drift {
        cfg.drift = Some(Drift {
            from_round: rounds / 2,
            alpha_shift: vec![(1, 0.5), (2, 0.5)],
        });
    }
    let xi = XiConfig {
        from: cfg.round_days(rounds / 2 + 6).0,
        to: cfg.round_days(rounds - 1).1,
    };
    (cfg, xi)
}

fn xi_choices(drift: bool) -> usize {
    let (cfg, xi) = drift_league(drift);
    (0..50u64)
        .into_par_iter()
        .filter(|&s| {
            let data = generate_season(&cfg, derive_seed(13, &[drift as u64, s])).unwrap();
            optimize_xi(&data, &[0.0, 0.01], &xi).unwrap() == 0.01
        })
        .count()
}

#[test]
fn singleton_candidate_is_returned() {
    let (cfg, xi) = drift_league(false);
    let data = generate_season(&cfg, 1).unwrap();
    assert_eq!(optimize_xi(&data, &[0.42], &xi).unwrap(), 0.42);
    assert!(optimize_xi(&data, &[], &xi).is_err());
}

#[test]
fn stationary_league_prefers_no_decay() {
    let decayed = xi_choices(false);
    assert!(decayed < 25, "{decayed}/50 picked the decaying weight");
}

#[test]
fn drifting_league_prefers_decay() {
    let decayed = xi_choices(true);
    assert!(decayed > 25, "{decayed}/50 picked the decaying weight");
}
