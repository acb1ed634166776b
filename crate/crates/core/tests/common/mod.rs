#![allow(dead_code)]

use funcgauss_core::simulate::{BrownianModel, GaussianModel, OuModel, OuStart};

pub fn brownian(c: f64, sigma: f64, theta: f64, with_drift: bool) -> GaussianModel {
    GaussianModel::Brownian { model: BrownianModel { c, sigma, theta }, with_drift }
}

pub fn ou(beta: f64, eta: f64, sigma: f64, start: OuStart) -> GaussianModel {
    GaussianModel::Ou(OuModel { beta, eta, sigma, start })
}

/// Class 1 of an OU pair with `β₀σ₀² = β₁σ₁²`.
pub fn ou_pair(start: OuStart, (b0, e0, s0): (f64, f64, f64), (b1, e1): (f64, f64)) -> (GaussianModel, GaussianModel) {
    let s1 = (b0 * s0 * s0 / b1).sqrt();
    (ou(b0, e0, s0, start), ou(b1, e1, s1, start))
}

/// The nine model pairs of the simulation study, in table order.
pub fn table_pairs() -> Vec<(&'static str, GaussianModel, GaussianModel)> {
    let b = |name, c, sigma, theta| (name, brownian(c, sigma, theta, true), brownian(c, sigma, theta, false));
    let o = |name, start, p0, p1| {
        let (m0, m1) = ou_pair(start, p0, p1);
        (name, m0, m1)
    };
    let det = OuStart::Deterministic(0.0);
    vec![
        b("brownian-det-1", 1.5, 1.0, 0.0),
        b("brownian-det-2", 3.0, 1.0, 0.0),
        b("brownian-det-3", 2.0, 2.0, 0.0),
        b("brownian-random-1", 1.5, 1.0, 1.0),
        b("brownian-random-2", 1.5, 1.0, 0.5),
        o("ou-det-1", det, (1.0, 0.0, 1.0), (1.0, 1.0)),
        o("ou-det-2", det, (0.4, 0.0, 0.4), (1.0, 1.0)),
        o("ou-random-1", OuStart::Stationary, (0.5, 0.0, 1.0), (1.0, 0.5)),
        o("ou-random-2", OuStart::Stationary, (0.5, 0.0, 2.0), (1.0, 2.0)),
    ]
}
