//! The chain log-RN against the exact likelihood ratio of the discretely
//! observed Markov path, computed from transition densities.

mod common;

use common::table_pairs;
use funcgauss_core::parametric::chain_bayes_evaluator;
use funcgauss_core::simulate::{GaussianModel, OuStart, RngSeed};
use funcgauss_core::{Curve, Grid};

fn log_normal(x: f64, mean: f64, var: f64) -> f64 {
    -0.5 * ((x - mean) * (x - mean) / var + (2.0 * std::f64::consts::PI * var).ln())
}

/// Log density of the observed nodes; a constant start contributes nothing.
fn markov_log_density(model: &GaussianModel, x: &Curve) -> f64 {
    let dt = x.grid().delta();
    let v = x.values();
    match *model {
        GaussianModel::Brownian { model: b, with_drift } => {
            let c = if with_drift { b.c } else { 0.0 };
            let start = if b.theta > 0.0 { log_normal(v[0], 0.0, b.theta * b.theta) } else { 0.0 };
            start + v.windows(2).map(|w| log_normal(w[1], w[0] + c * dt, b.sigma * b.sigma * dt)).sum::<f64>()
        }
        GaussianModel::Ou(o) => {
            let a = (-o.beta * dt).exp();
            let s2 = o.sigma * o.sigma;
            let start = match o.start {
                OuStart::Stationary => log_normal(v[0], o.eta, s2),
                OuStart::Deterministic(_) => 0.0,
            };
            start + v.windows(2).map(|w| log_normal(w[1], o.eta + a * (w[0] - o.eta), s2 * (1.0 - a * a))).sum::<f64>()
        }
    }
}

#[test]
fn chain_matches_discrete_likelihood_ratio() {
    let grid = Grid::uniform(4000).unwrap();
    for (name, m0, m1) in table_pairs() {
        let chain = chain_bayes_evaluator(&m0, &m1, grid).unwrap();
        for (k, model) in [&m0, &m1].into_iter().enumerate() {
            for r in 0..3u64 {
                let x = model.sample(grid, &mut RngSeed::new(11).with_stream(10 * k as u64 + r).rng());
                let discrete = markov_log_density(&m0, &x) - markov_log_density(&m1, &x);
                let continuous = chain.log_rn(&x).unwrap();
                assert!(
                    (discrete - continuous).abs() < 0.01 * (1.0 + continuous.abs()),
                    "{name}: discrete {discrete} vs chain {continuous}"
                );
            }
        }
    }
}
