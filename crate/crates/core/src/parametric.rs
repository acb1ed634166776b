//! Closed-form Bayes rules for pairs of Brownian motions and pairs of
//! Ornstein–Uhlenbeck processes, the least-squares parameter estimators and
//! the parametric plug-in classifier built from them.
//!
//! The log-likelihood ratios below come from the general triangular chain in
//! [`crate::rn`] specialised to each family; `tests/closed_form_vs_chain.rs`
//! checks that both routes agree.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{trapezoid_from, Curve, Grid, Label, LabeledSample};
use crate::rn::{self, Jet, TriangularSpec};
use crate::simulate::{BrownianModel, GaussianModel, OuModel, OuStart};
use crate::Classifier;

/// Tolerance on `β₀σ₀² = β₁σ₁²` for the OU Bayes rules.
pub const OU_EQUIVALENCE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartKind {
    /// `X(0)` is a constant (0 for Brownian motion).
    Deterministic,
    /// `X(0)` is Gaussian.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Brownian,
    OrnsteinUhlenbeck,
}

/// OU parameters entering the Bayes rules; `sigma` is the stationary SD.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OuParams {
    pub beta: f64,
    pub eta: f64,
    pub sigma: f64,
}

impl OuParams {
    fn kappa(&self) -> f64 {
        self.beta * self.sigma * self.sigma
    }
}

impl From<&OuModel> for OuParams {
    fn from(m: &OuModel) -> Self {
        Self { beta: m.beta, eta: m.eta, sigma: m.sigma }
    }
}

/// `∫₀¹ x dt` and `∫₀¹ x² dt` by the trapezoidal rule.
fn path_integrals(x: &Curve) -> (f64, f64) {
    let delta = x.grid().delta();
    let vals = x.values();
    let squares: Vec<f64> = vals.iter().map(|v| v * v).collect();
    (trapezoid_from(vals, delta, 0), trapezoid_from(&squares, delta, 0))
}

/// `4κ · log dμ₀/dμ₁` for two OU processes started at 0 (κ = βσ²).
/// Class 1 iff negative when `p = 1/2`.
pub fn ou_deterministic_statistic(x: &Curve, p0: &OuParams, p1: &OuParams) -> f64 {
    let (b0, e0, s0) = (p0.beta, p0.eta, p0.sigma);
    let (b1, e1, s1) = (p1.beta, p1.eta, p1.sigma);
    let (int_x, int_x2) = path_integrals(x);
    let (x0, x1) = (x.start(), x.end());
    2.0 * (b0 * b0 * s0 * s0 - b1 * b1 * s1 * s1)
        + (b1 - b0) * (x1 * x1 - x0 * x0)
        + 2.0 * (b0 * e0 - b1 * e1) * (x1 - x0)
        + (b1 * b1 - b0 * b0) * int_x2
        + 2.0 * (b0 * b0 * e0 - b1 * b1 * e1) * int_x
        - b0 * b0 * e0 * e0
        + b1 * b1 * e1 * e1
}

/// `4κ · log dμ₀/dμ₁` for two stationary OU processes.
pub fn ou_random_statistic(x: &Curve, p0: &OuParams, p1: &OuParams) -> f64 {
    let (b0, e0, s0) = (p0.beta, p0.eta, p0.sigma);
    let (b1, e1, s1) = (p1.beta, p1.eta, p1.sigma);
    let (int_x, int_x2) = path_integrals(x);
    let (x0, x1) = (x.start(), x.end());
    2.0 * b1 * s1 * s1 * (libm::log(b0) - libm::log(b1))
        + 2.0 * (b0 * b0 * s0 * s0 - b1 * b1 * s1 * s1)
        + (b1 - b0) * (x0 * x0 + x1 * x1)
        + 2.0 * (b0 * e0 - b1 * e1) * (x0 + x1)
        + (b1 * b1 - b0 * b0) * int_x2
        + 2.0 * (b0 * b0 * e0 - b1 * b1 * e1) * int_x
        - b0 * b0 * e0 * e0
        + b1 * b1 * e1 * e1
        - 2.0 * b0 * e0 * e0
        + 2.0 * b1 * e1 * e1
}

/// A Bayes rule in closed form. Class 0 carries the drift in the Brownian
/// pair; class 1 has mean zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedFormRule {
    BrownianDeterministic { c: f64, sigma: f64 },
    BrownianRandom { c: f64, sigma: f64, theta0: f64, theta1: f64 },
    OuDeterministic { params0: OuParams, params1: OuParams },
    OuRandom { params0: OuParams, params1: OuParams },
}

impl ClosedFormRule {
    /// The Bayes rule for a pair of class models, rejecting pairs that are
    /// mutually singular or outside the two families.
    pub fn for_models(model0: &GaussianModel, model1: &GaussianModel) -> Result<Self> {
        check_equivalence(model0, model1)?;
        match (model0, model1) {
            (
                GaussianModel::Brownian { model: b0, with_drift: d0 },
                GaussianModel::Brownian { model: b1, with_drift: d1 },
            ) => {
                if !*d0 || *d1 {
                    return Err(Error::InvalidModel("the Brownian rule needs drift in class 0 only".into()));
                }
                if b0.theta > 0.0 {
                    Ok(Self::BrownianRandom { c: b0.c, sigma: b0.sigma, theta0: b0.theta, theta1: b1.theta })
                } else {
                    Ok(Self::BrownianDeterministic { c: b0.c, sigma: b0.sigma })
                }
            }
            (GaussianModel::Ou(o0), GaussianModel::Ou(o1)) => {
                let (params0, params1) = (OuParams::from(o0), OuParams::from(o1));
                match (o0.start, o1.start) {
                    (OuStart::Deterministic(c0), OuStart::Deterministic(c1)) => {
                        if c0 != 0.0 || c1 != 0.0 {
                            return Err(Error::InvalidModel(format!(
                                "the OU rule needs both starts at 0, got {c0} and {c1}"
                            )));
                        }
                        Ok(Self::OuDeterministic { params0, params1 })
                    }
                    _ => Ok(Self::OuRandom { params0, params1 }),
                }
            }
            _ => unreachable!("check_equivalence rejects mixed families"),
        }
    }

    /// `log dμ₀/dμ₁(x)`. For OU pairs whose `βσ²` differ (plug-in
    /// estimates) the average of the two products sets the scale.
    pub fn log_rn(&self, x: &Curve) -> f64 {
        match *self {
            Self::BrownianDeterministic { c, sigma } => c / (2.0 * sigma * sigma) * (2.0 * x.end() - c),
            Self::BrownianRandom { c, sigma, theta0, theta1 } => {
                let x0 = x.start();
                libm::log(theta1 / theta0)
                    + 0.5 * (1.0 / (theta1 * theta1) - 1.0 / (theta0 * theta0)) * x0 * x0
                    + c / (2.0 * sigma * sigma) * (2.0 * (x.end() - x0) - c)
            }
            Self::OuDeterministic { params0, params1 } => {
                ou_deterministic_statistic(x, &params0, &params1) / (2.0 * (params0.kappa() + params1.kappa()))
            }
            Self::OuRandom { params0, params1 } => {
                ou_random_statistic(x, &params0, &params1) / (2.0 * (params0.kappa() + params1.kappa()))
            }
        }
    }

    /// Decision for `p = 1/2`, written as the inequality of each family.
    pub fn decide(&self, x: &Curve) -> Label {
        match *self {
            Self::BrownianDeterministic { c, .. } => Label::from(x.end() < c / 2.0),
            Self::BrownianRandom { c, sigma, theta0, theta1 } => {
                let x0 = x.start();
                let lhs = c / (2.0 * sigma * sigma) * (2.0 * (x.end() - x0) - c)
                    + 0.5 * (1.0 / (theta1 * theta1) - 1.0 / (theta0 * theta0)) * x0 * x0;
                Label::from(lhs < libm::log(theta0 / theta1))
            }
            Self::OuDeterministic { params0, params1 } => {
                Label::from(0.0 > ou_deterministic_statistic(x, &params0, &params1))
            }
            Self::OuRandom { params0, params1 } => Label::from(0.0 > ou_random_statistic(x, &params0, &params1)),
        }
    }
}

/// Errors unless the two class distributions are mutually absolutely
/// continuous: equal diffusion coefficients, and starts that are either both
/// constant or both Gaussian.
pub fn check_equivalence(model0: &GaussianModel, model1: &GaussianModel) -> Result<()> {
    model0.validate()?;
    model1.validate()?;
    match (model0, model1) {
        (GaussianModel::Brownian { model: b0, .. }, GaussianModel::Brownian { model: b1, .. }) => {
            if b0.sigma != b1.sigma {
                return Err(Error::MutuallySingular(format!(
                    "Brownian motions with sigma {} and {}",
                    b0.sigma, b1.sigma
                )));
            }
            if (b0.theta > 0.0) != (b1.theta > 0.0) {
                return Err(Error::MutuallySingular("one class starts at 0 and the other does not".into()));
            }
            Ok(())
        }
        (GaussianModel::Ou(o0), GaussianModel::Ou(o1)) => {
            check_ou_equivalence(&OuParams::from(o0), &OuParams::from(o1))?;
            match (o0.start, o1.start) {
                (OuStart::Deterministic(c0), OuStart::Deterministic(c1)) if c0 != c1 => {
                    Err(Error::MutuallySingular(format!("OU processes started at different constants {c0} and {c1}")))
                }
                (OuStart::Deterministic(_), OuStart::Deterministic(_)) | (OuStart::Stationary, OuStart::Stationary) => {
                    Ok(())
                }
                _ => Err(Error::MutuallySingular("one class starts at a constant and the other does not".into())),
            }
        }
        _ => Err(Error::InvalidModel("class models must belong to the same family".into())),
    }
}

fn check_ou_equivalence(p0: &OuParams, p1: &OuParams) -> Result<()> {
    let gap = p0.kappa() - p1.kappa();
    if gap.abs() > OU_EQUIVALENCE_TOL {
        return Err(Error::MutuallySingular(format!(
            "beta0*sigma0^2 = {} differs from beta1*sigma1^2 = {}",
            p0.kappa(),
            p1.kappa()
        )));
    }
    Ok(())
}

fn check_brownian(c: f64, sigma: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidModel(format!("drift c = {c} must be positive")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidModel(format!("sigma = {sigma} must be positive")));
    }
    Ok(())
}

/// Bayes rule for the Brownian pair started at 0: class 1 iff `x(1) < c/2`.
/// `sigma` does not enter the rule.
pub fn bayes_brownian_det(x: &Curve, c: f64, sigma: f64) -> Result<Label> {
    check_brownian(c, sigma)?;
    Ok(ClosedFormRule::BrownianDeterministic { c, sigma }.decide(x))
}

/// Bayes rule for the Brownian pair with `X(0;i) ~ N(0, θᵢ²)`.
pub fn bayes_brownian_random(x: &Curve, c: f64, sigma: f64, theta0: f64, theta1: f64) -> Result<Label> {
    check_brownian(c, sigma)?;
    if !(theta0 > 0.0 && theta1 > 0.0) {
        return Err(Error::InvalidModel(format!("random starts need theta0, theta1 > 0, got {theta0}, {theta1}")));
    }
    Ok(ClosedFormRule::BrownianRandom { c, sigma, theta0, theta1 }.decide(x))
}

/// Bayes rule for two OU processes started at 0.
pub fn bayes_ou_det(x: &Curve, params0: &OuParams, params1: &OuParams) -> Result<Label> {
    check_ou_equivalence(params0, params1)?;
    Ok(ClosedFormRule::OuDeterministic { params0: *params0, params1: *params1 }.decide(x))
}

/// Bayes rule for two stationary OU processes.
pub fn bayes_ou_random(x: &Curve, params0: &OuParams, params1: &OuParams) -> Label {
    ClosedFormRule::OuRandom { params0: *params0, params1: *params1 }.decide(x)
}

/// Mean, `u` and `v` of a model in closed form, `v(1) = 1`.
pub fn closed_form_spec(model: &GaussianModel, grid: Grid) -> Result<TriangularSpec> {
    model.validate()?;
    let n = grid.len();
    match *model {
        GaussianModel::Brownian { model: BrownianModel { c, sigma, theta }, with_drift } => {
            let c = if with_drift { c } else { 0.0 };
            let (s2, th2) = (sigma * sigma, theta * theta);
            let mean = if c == 0.0 { Jet::zeros(n) } else { Jet::from_fns(grid, |t| c * t, |_| c, |_| 0.0) };
            let u = Jet::from_fns(grid, |t| th2 + s2 * t, |_| s2, |_| 0.0);
            TriangularSpec::new(grid, mean, u, Jet::constant(n, 1.0))
        }
        GaussianModel::Ou(OuModel { beta, eta, sigma, start }) => {
            let s2 = sigma * sigma;
            let v = Jet::from_fns(
                grid,
                |t| libm::exp(beta * (1.0 - t)),
                |t| -beta * libm::exp(beta * (1.0 - t)),
                |t| beta * beta * libm::exp(beta * (1.0 - t)),
            );
            match start {
                OuStart::Deterministic(c0) => {
                    let k = c0 - eta;
                    let mean = if c0 == 0.0 && eta == 0.0 {
                        Jet::zeros(n)
                    } else {
                        Jet::from_fns(
                            grid,
                            |t| eta + k * libm::exp(-beta * t),
                            |t| -beta * k * libm::exp(-beta * t),
                            |t| beta * beta * k * libm::exp(-beta * t),
                        )
                    };
                    let scale = s2 * libm::exp(-beta);
                    let u = Jet::from_fns(
                        grid,
                        |t| scale * (libm::exp(beta * t) - libm::exp(-beta * t)),
                        |t| scale * beta * (libm::exp(beta * t) + libm::exp(-beta * t)),
                        |t| scale * beta * beta * (libm::exp(beta * t) - libm::exp(-beta * t)),
                    );
                    TriangularSpec::new(grid, mean, u, v)
                }
                OuStart::Stationary => {
                    let mean = if eta == 0.0 { Jet::zeros(n) } else { Jet::constant(n, eta) };
                    let u = Jet::from_fns(
                        grid,
                        |t| s2 * libm::exp(-beta * (1.0 - t)),
                        |t| beta * s2 * libm::exp(-beta * (1.0 - t)),
                        |t| beta * beta * s2 * libm::exp(-beta * (1.0 - t)),
                    );
                    TriangularSpec::new(grid, mean, u, v)
                }
            }
        }
    }
}

/// The Bayes rule of a model pair through the general triangular chain.
pub fn chain_bayes_evaluator(model0: &GaussianModel, model1: &GaussianModel, grid: Grid) -> Result<rn::LogRnEvaluator> {
    rn::compose_chain(&closed_form_spec(model0, grid)?, &closed_form_spec(model1, grid)?)
}

/// Least-squares estimates for the Brownian pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BrownianFit {
    pub c_hat: f64,
    pub sigma2_hat: f64,
    /// Start variances `θ̂ᵢ²` per class.
    pub theta2_hat: [f64; 2],
}

fn class_mean(curves: &[&Curve]) -> Vec<f64> {
    let len = curves[0].values().len();
    let mut mean = alloc::vec![0.0; len];
    for c in curves {
        for (m, v) in mean.iter_mut().zip(c.values()) {
            *m += v;
        }
    }
    let n = curves.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    mean
}

/// `ĉ` regresses the class-0 mean on `t` through the origin, `θ̂ᵢ²` is the
/// sample variance of `X(0)` in class `i`, and `σ̂²` pools the centred
/// increments `X(1) − X(0)` of both classes with divisor `n₀ + n₁ − 1`.
pub fn fit_brownian(train: &LabeledSample) -> Result<BrownianFit> {
    let classes: [Vec<&Curve>; 2] = [train.class(Label::Zero).collect(), train.class(Label::One).collect()];
    for (i, class) in classes.iter().enumerate() {
        if class.len() < 2 {
            return Err(Error::InsufficientData(format!("class {i} has {} curves, need 2", class.len())));
        }
    }
    let grid = train.grid();
    let means = [class_mean(&classes[0]), class_mean(&classes[1])];
    let last = grid.intervals();

    let (mut num, mut den) = (0.0, 0.0);
    for j in 1..=last {
        let t = grid.t(j);
        num += means[0][j] * t;
        den += t * t;
    }
    let c_hat = num / den;

    let mut theta2_hat = [0.0; 2];
    let mut increments = 0.0;
    for i in 0..2 {
        let m = &means[i];
        let mut ss0 = 0.0;
        for x in &classes[i] {
            let d0 = x.start() - m[0];
            ss0 += d0 * d0;
            let d = x.end() - m[last] - x.start() + m[0];
            increments += d * d;
        }
        theta2_hat[i] = ss0 / (classes[i].len() as f64 - 1.0);
    }
    let sigma2_hat = increments / (train.len() as f64 - 1.0);
    if !(sigma2_hat > 0.0) {
        return Err(Error::FitFailure(format!("sigma^2 estimate {sigma2_hat} is not positive")));
    }
    Ok(BrownianFit { c_hat, sigma2_hat, theta2_hat })
}

/// Per-class OU estimates from the autoregression `X(t_{j+1}) = a X(t_j) + b + ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OuFit {
    pub a_hat: f64,
    pub b_hat: f64,
    pub beta_hat: f64,
    pub eta_hat: f64,
    pub sigma2_hat: f64,
    pub start: StartKind,
}

impl OuFit {
    pub fn params(&self) -> OuParams {
        OuParams { beta: self.beta_hat, eta: self.eta_hat, sigma: libm::sqrt(self.sigma2_hat) }
    }
}

/// Grand mean of every node value: the long-run mean estimate for a
/// stationary start.
pub fn stationary_mean_estimate(curves: &[Curve]) -> f64 {
    let (sum, count) = curves.iter().flat_map(|c| c.values()).fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Pooled least squares over all consecutive pairs of one class.
pub fn fit_ou(curves: &[Curve], start: StartKind) -> Result<OuFit> {
    let Some(first) = curves.first() else {
        return Err(Error::InsufficientData("no curves to fit".into()));
    };
    let grid = first.grid();
    let steps = grid.intervals();
    let pairs = curves.len() * steps;
    if pairs < 3 {
        return Err(Error::InsufficientData(format!("{pairs} transitions, need 3")));
    }
    let (mut sx, mut sy) = (0.0, 0.0);
    for c in curves {
        let v = c.values();
        sx += v[..steps].iter().sum::<f64>();
        sy += v[1..].iter().sum::<f64>();
    }
    let (mx, my) = (sx / pairs as f64, sy / pairs as f64);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for c in curves {
        for w in c.values().windows(2) {
            let dx = w[0] - mx;
            sxx += dx * dx;
            sxy += dx * (w[1] - my);
        }
    }
    if !(sxx > 0.0) {
        return Err(Error::FitFailure("no variation in X(t_j); the autoregression is undetermined".into()));
    }
    let a_hat = sxy / sxx;
    if !(a_hat > 0.0 && a_hat < 1.0) {
        return Err(Error::FitFailure(format!("autoregression slope {a_hat} is outside (0,1)")));
    }
    let b_hat = my - a_hat * mx;
    let mut rss = 0.0;
    for c in curves {
        for w in c.values().windows(2) {
            let r = w[1] - (a_hat * w[0] + b_hat);
            rss += r * r;
        }
    }
    let beta_hat = -libm::log(a_hat) / grid.delta();
    let eta_hat = match start {
        StartKind::Deterministic => b_hat / (1.0 - a_hat),
        StartKind::Random => stationary_mean_estimate(curves),
    };
    let sigma2_hat = rss / ((1.0 - a_hat * a_hat) * (pairs as f64 - 2.0));
    if !(sigma2_hat > 0.0) {
        return Err(Error::FitFailure(format!("sigma^2 estimate {sigma2_hat} is not positive")));
    }
    Ok(OuFit { a_hat, b_hat, beta_hat, eta_hat, sigma2_hat, start })
}

/// A closed-form rule with estimated parameters and a class prior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParametricPlugin {
    pub rule: ClosedFormRule,
    pub p: f64,
}

impl Classifier for ParametricPlugin {
    fn classify(&self, x: &Curve) -> Label {
        if self.p == 0.5 {
            self.rule.decide(x)
        } else {
            rn::classify(self.rule.log_rn(x), self.p)
        }
    }
}

/// Fits the family's parameters and substitutes them into its Bayes rule.
/// Fitted OU parameters are used as they are, without forcing
/// `β̂₀σ̂₀² = β̂₁σ̂₁²`.
pub fn parametric_plugin_classifier(
    train: &LabeledSample,
    family: Family,
    start: StartKind,
) -> Result<ParametricPlugin> {
    train.require_both_classes()?;
    let rule = match family {
        Family::Brownian => {
            let fit = fit_brownian(train)?;
            let sigma = libm::sqrt(fit.sigma2_hat);
            match start {
                StartKind::Deterministic => ClosedFormRule::BrownianDeterministic { c: fit.c_hat, sigma },
                StartKind::Random => {
                    if let Some(i) = fit.theta2_hat.iter().position(|&t| !(t > 0.0)) {
                        return Err(Error::FitFailure(format!("start variance of class {i} is estimated as 0")));
                    }
                    ClosedFormRule::BrownianRandom {
                        c: fit.c_hat,
                        sigma,
                        theta0: libm::sqrt(fit.theta2_hat[0]),
                        theta1: libm::sqrt(fit.theta2_hat[1]),
                    }
                }
            }
        }
        Family::OrnsteinUhlenbeck => {
            let class0: Vec<Curve> = train.class(Label::Zero).cloned().collect();
            let class1: Vec<Curve> = train.class(Label::One).cloned().collect();
            let params0 = fit_ou(&class0, start)?.params();
            let params1 = fit_ou(&class1, start)?.params();
            match start {
                StartKind::Deterministic => ClosedFormRule::OuDeterministic { params0, params1 },
                StartKind::Random => ClosedFormRule::OuRandom { params0, params1 },
            }
        }
    };
    Ok(ParametricPlugin { rule, p: train.prior_p() })
}
