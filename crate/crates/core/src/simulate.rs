//! Exact discrete-time simulation of the two Gaussian families: Brownian
//! motion with linear drift and the Ornstein–Uhlenbeck process.
//!
//! Both are Markov, so sampling node by node from the true transition law
//! reproduces the finite-dimensional distributions on the grid without any
//! discretization error.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::grid::{Curve, Grid, Label, LabeledSample, Prior};

/// Seed of a ChaCha8 stream. Distinct `stream` values under one `seed` give
/// independent sequences, which is how Monte Carlo replications are split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        Self::new(seed)
    }
}

/// `X(t) = X(0) + c·t·[drift] + σ W(t)` with `X(0) ~ N(0, θ²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BrownianModel {
    /// Drift slope of the class carrying the drift.
    pub c: f64,
    pub sigma: f64,
    /// Standard deviation of the start; 0 means `X(0) = 0`.
    pub theta: f64,
}

impl BrownianModel {
    pub fn validate(&self) -> Result<()> {
        if !self.c.is_finite() {
            return Err(Error::InvalidModel(format!("drift c = {} is not finite", self.c)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidModel(format!("sigma = {} must be positive", self.sigma)));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::InvalidModel(format!("theta = {} must be nonnegative", self.theta)));
        }
        Ok(())
    }
}

/// Start of an Ornstein–Uhlenbeck path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OuStart {
    /// `X(0) = c₀`.
    Deterministic(f64),
    /// `X(0) ~ N(η, σ²)`, the stationary law.
    Stationary,
}

/// `dX = −β(X − η) dt + √(2β) σ dW`: stationary variance `σ²`, correlation
/// `e^{−β|s−t|}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OuModel {
    pub beta: f64,
    pub eta: f64,
    pub sigma: f64,
    pub start: OuStart,
}

impl OuModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidModel(format!("beta = {} must be positive", self.beta)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidModel(format!("sigma = {} must be positive", self.sigma)));
        }
        if !self.eta.is_finite() {
            return Err(Error::InvalidModel(format!("eta = {} is not finite", self.eta)));
        }
        if let OuStart::Deterministic(c0) = self.start {
            if !c0.is_finite() {
                return Err(Error::InvalidModel(format!("start c0 = {c0} is not finite")));
            }
        }
        Ok(())
    }

    /// `β σ²`; two OU laws are equivalent only if this agrees.
    pub fn diffusion_product(&self) -> f64 {
        self.beta * self.sigma * self.sigma
    }
}

/// One class distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GaussianModel {
    Brownian { model: BrownianModel, with_drift: bool },
    Ou(OuModel),
}

impl GaussianModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            GaussianModel::Brownian { model, .. } => model.validate(),
            GaussianModel::Ou(model) => model.validate(),
        }
    }

    /// Draws one path from the caller's generator.
    pub fn sample<R: Rng + ?Sized>(&self, grid: Grid, rng: &mut R) -> Curve {
        let values = match self {
            GaussianModel::Brownian { model, with_drift } => brownian_values(model, *with_drift, grid, rng),
            GaussianModel::Ou(model) => ou_values(model, grid, rng),
        };
        Curve::new(grid, values).expect("simulated values are finite and match the grid")
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn brownian_values<R: Rng + ?Sized>(model: &BrownianModel, with_drift: bool, grid: Grid, rng: &mut R) -> Vec<f64> {
    let delta = grid.delta();
    let step_mean = if with_drift { model.c * delta } else { 0.0 };
    let step_sd = model.sigma * libm::sqrt(delta);
    let mut values = Vec::with_capacity(grid.len());
    let mut x = if model.theta > 0.0 { model.theta * normal(rng) } else { 0.0 };
    values.push(x);
    for _ in 0..grid.intervals() {
        x += step_mean + step_sd * normal(rng);
        values.push(x);
    }
    values
}

fn ou_values<R: Rng + ?Sized>(model: &OuModel, grid: Grid, rng: &mut R) -> Vec<f64> {
    let decay = libm::exp(-model.beta * grid.delta());
    let shift = model.eta * (1.0 - decay);
    let noise_sd = model.sigma * libm::sqrt(1.0 - decay * decay);
    let mut values = Vec::with_capacity(grid.len());
    let mut x = match model.start {
        OuStart::Deterministic(c0) => c0,
        OuStart::Stationary => model.eta + model.sigma * normal(rng),
    };
    values.push(x);
    for _ in 0..grid.intervals() {
        x = x * decay + shift + noise_sd * normal(rng);
        values.push(x);
    }
    values
}

/// One Brownian path; without drift the mean is identically zero.
pub fn simulate_brownian(model: &BrownianModel, with_drift: bool, grid: Grid, seed: RngSeed) -> Result<Curve> {
    model.validate()?;
    let values = brownian_values(model, with_drift, grid, &mut seed.rng());
    Curve::new(grid, values)
}

/// One OU path through the exact autoregressive transition.
pub fn simulate_ou(model: &OuModel, grid: Grid, seed: RngSeed) -> Result<Curve> {
    model.validate()?;
    let values = ou_values(model, grid, &mut seed.rng());
    Curve::new(grid, values)
}

/// `n0` curves from `model0` labeled 0 followed by `n1` curves from `model1`
/// labeled 1, all drawn from the single stream `seed`.
pub fn sample_labeled(
    model0: &GaussianModel,
    model1: &GaussianModel,
    n0: usize,
    n1: usize,
    prior: Prior,
    grid: Grid,
    seed: RngSeed,
) -> Result<LabeledSample> {
    if n0 == 0 || n1 == 0 {
        return Err(Error::InsufficientData(format!("class sizes must be positive, got {n0} and {n1}")));
    }
    model0.validate()?;
    model1.validate()?;
    let mut rng = seed.rng();
    let mut curves = Vec::with_capacity(n0 + n1);
    let mut labels = Vec::with_capacity(n0 + n1);
    for _ in 0..n0 {
        curves.push(model0.sample(grid, &mut rng));
        labels.push(Label::Zero);
    }
    for _ in 0..n1 {
        curves.push(model1.sample(grid, &mut rng));
        labels.push(Label::One);
    }
    LabeledSample::new(curves, labels, prior)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::uniform(50).unwrap()
    }

    fn mean_var(xs: impl Iterator<Item = f64>) -> (f64, f64) {
        let v: Vec<f64> = xs.collect();
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, var)
    }

    #[test]
    fn brownian_deterministic_start_is_zero() {
        let m = BrownianModel { c: 1.5, sigma: 1.0, theta: 0.0 };
        for s in 0..20 {
            assert_eq!(simulate_brownian(&m, true, grid(), RngSeed::new(s)).unwrap().start(), 0.0);
        }
    }

    #[test]
    fn brownian_endpoint_mean_and_increment_variance() {
        let drift = BrownianModel { c: 1.5, sigma: 1.0, theta: 0.0 };
        let mut rng = RngSeed::new(7).rng();
        let model = GaussianModel::Brownian { model: drift, with_drift: true };
        let (m, _) = mean_var((0..10_000).map(|_| model.sample(grid(), &mut rng).end()));
        assert!((m - 1.5).abs() < 0.03, "mean X(1) = {m}");

        let plain =
            GaussianModel::Brownian { model: BrownianModel { c: 0.0, sigma: 1.0, theta: 0.7 }, with_drift: false };
        let (_, v) = mean_var((0..10_000).map(|_| {
            let x = plain.sample(grid(), &mut rng);
            x.end() - x.start()
        }));
        assert!((v - 1.0).abs() < 0.05, "var = {v}");
    }

    #[test]
    fn ou_deterministic_start() {
        let m = OuModel { beta: 1.0, eta: 0.0, sigma: 1.0, start: OuStart::Deterministic(0.0) };
        assert_eq!(simulate_ou(&m, grid(), RngSeed::new(3)).unwrap().start(), 0.0);
    }

    #[test]
    fn ou_stationary_variance_at_every_node() {
        let model = GaussianModel::Ou(OuModel { beta: 1.0, eta: 0.0, sigma: 1.0, start: OuStart::Stationary });
        let mut rng = RngSeed::new(11).rng();
        let paths: Vec<Curve> = (0..10_000).map(|_| model.sample(grid(), &mut rng)).collect();
        for j in 0..=50 {
            let (_, v) = mean_var(paths.iter().map(|p| p.at(j)));
            assert!((v - 1.0).abs() < 0.05, "node {j}: var {v}");
        }
    }

    #[test]
    fn ou_vanishing_noise_follows_the_mean_ode() {
        let m = OuModel { beta: 1.0, eta: 1.0, sigma: 1e-12, start: OuStart::Deterministic(0.0) };
        let x = simulate_ou(&m, grid(), RngSeed::new(5)).unwrap();
        for (j, t) in grid().points().enumerate() {
            assert!((x.at(j) - (1.0 - libm::exp(-t))).abs() < 1e-6);
        }
    }

    #[test]
    fn sample_labeled_counts_and_determinism() {
        let m0 = GaussianModel::Brownian { model: BrownianModel { c: 1.5, sigma: 1.0, theta: 0.0 }, with_drift: true };
        let m1 = GaussianModel::Brownian { model: BrownianModel { c: 1.5, sigma: 1.0, theta: 0.0 }, with_drift: false };
        let one = sample_labeled(&m0, &m1, 1, 1, Prior::Known(0.5), grid(), RngSeed::new(1)).unwrap();
        assert_eq!(one.labels(), &[Label::Zero, Label::One]);
        let a = sample_labeled(&m0, &m1, 100, 100, Prior::Known(0.5), grid(), RngSeed::new(9)).unwrap();
        let b = sample_labeled(&m0, &m1, 100, 100, Prior::Known(0.5), grid(), RngSeed::new(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.count(Label::Zero), 100);
        assert_eq!(a.count(Label::One), 100);
        let c = sample_labeled(&m0, &m1, 100, 100, Prior::Known(0.5), grid(), RngSeed::new(9).with_stream(1)).unwrap();
        assert_ne!(a, c);
        assert!(sample_labeled(&m0, &m1, 0, 1, Prior::Known(0.5), grid(), RngSeed::new(1)).is_err());
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(BrownianModel { c: 1.0, sigma: 0.0, theta: 0.0 }.validate().is_err());
        assert!(BrownianModel { c: 1.0, sigma: 1.0, theta: -1.0 }.validate().is_err());
        assert!(OuModel { beta: 0.0, eta: 0.0, sigma: 1.0, start: OuStart::Stationary }.validate().is_err());
        assert!(OuModel { beta: 1.0, eta: 0.0, sigma: -1.0, start: OuStart::Stationary }.validate().is_err());
    }
}
