//! Nonparametric estimation of the mean and of the triangular factors `u`,
//! `v` from a sample of curves, and the plug-in rule built on them.
//!
//! Derivatives are finite differences with bandwidth `h = kΔ`. Near the ends
//! of `[0,1]`, where `t ± h` leaves the interval, one-sided quotients anchored
//! at the end point replace the central ones.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{structural, Error, Result};
use crate::grid::{Curve, Grid, Label, LabeledSample, Prior};
use crate::rn::{self, Jet, LogRnEvaluator, TriangularSpec};
use crate::Classifier;

/// `σ̂²(0) < REGIME_RATIO · max σ̂²` declares the `u(0) = 0` regime.
pub const REGIME_RATIO: f64 = 1e-3;

/// Bandwidth in grid steps; errors unless `h = kΔ` with `1 ≤ k` and `h < 1/2`.
fn bandwidth_steps(grid: Grid, h: f64) -> Result<usize> {
    let k = grid.steps_of(h).ok_or_else(|| structural!("bandwidth h = {h} is not a multiple of the grid step"))?;
    if k == 0 || 2 * k >= grid.intervals() {
        return Err(structural!("bandwidth h = {h} must satisfy Δ ≤ h < 1/2"));
    }
    Ok(k)
}

fn check_len(f: &[f64], grid: Grid) -> Result<()> {
    if f.len() != grid.len() {
        return Err(structural!("{} values for a grid of {} nodes", f.len(), grid.len()));
    }
    Ok(())
}

/// Pointwise sample mean.
pub fn mean_hat(curves: &[Curve]) -> Result<Vec<f64>> {
    let first = curves.first().ok_or_else(|| structural!("mean of an empty set of curves"))?;
    let grid = first.grid();
    let mut mean = vec![0.0; grid.len()];
    for c in curves {
        if c.grid() != grid {
            return Err(structural!("curves live on different grids"));
        }
        for (m, v) in mean.iter_mut().zip(c.values()) {
            *m += v;
        }
    }
    let n = curves.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    Ok(mean)
}

fn fd_first_steps(f: &[f64], delta: f64, k: usize) -> Vec<f64> {
    let last = f.len() - 1;
    (0..=last)
        .map(|j| {
            if j < k {
                (f[j + k] - f[0]) / ((k + j) as f64 * delta)
            } else if j + k > last {
                (f[last] - f[j - k]) / ((k + last - j) as f64 * delta)
            } else {
                (f[j + k] - f[j - k]) / (2.0 * k as f64 * delta)
            }
        })
        .collect()
}

/// Value at half-integer node position `twice / 2` by linear interpolation.
fn at_half(f: &[f64], twice: usize) -> f64 {
    if twice % 2 == 0 {
        f[twice / 2]
    } else {
        0.5 * (f[twice / 2] + f[twice / 2 + 1])
    }
}

fn fd_second_steps(f: &[f64], delta: f64, k: usize) -> Vec<f64> {
    let last = f.len() - 1;
    let h = k as f64 * delta;
    (0..=last)
        .map(|j| {
            if j < k {
                let twice = j + k;
                let gamma = twice as f64 * delta / 2.0;
                (f[j + k] + f[0] - 2.0 * at_half(f, twice)) / (gamma * gamma)
            } else if j + k > last {
                let twice = last + j - k;
                let gamma = (last + k - j) as f64 * delta / 2.0;
                (f[j - k] + f[last] - 2.0 * at_half(f, twice)) / (gamma * gamma)
            } else {
                (f[j + k] + f[j - k] - 2.0 * f[j]) / (h * h)
            }
        })
        .collect()
}

/// First-derivative estimate at every node.
pub fn fd_first(f: &[f64], grid: Grid, h: f64) -> Result<Vec<f64>> {
    check_len(f, grid)?;
    let k = bandwidth_steps(grid, h)?;
    Ok(fd_first_steps(f, grid.delta(), k))
}

/// Second-derivative estimate at every node. Boundary nodes use the three
/// points `0, γ, 2γ` with `γ = (t+h)/2` (mirrored on the right); an off-grid
/// `γ` is read by linear interpolation.
pub fn fd_second(f: &[f64], grid: Grid, h: f64) -> Result<Vec<f64>> {
    check_len(f, grid)?;
    let k = bandwidth_steps(grid, h)?;
    Ok(fd_second_steps(f, grid.delta(), k))
}

fn jet_of(values: Vec<f64>, delta: f64, k: usize) -> Jet {
    let first = fd_first_steps(&values, delta, k);
    let second = fd_second_steps(&values, delta, k);
    Jet::new(values, first, second)
}

/// Empirical covariance `Γ̂(s,t)` with divisor `n`, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceTable {
    nodes: usize,
    values: Vec<f64>,
}

impl CovarianceTable {
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.nodes + j]
    }

    /// `Γ̂(t_i, ·)`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.nodes..(i + 1) * self.nodes]
    }

    /// `Γ̂(·, 1)`.
    pub fn last_column(&self) -> Vec<f64> {
        (0..self.nodes).map(|i| self.get(i, self.nodes - 1)).collect()
    }

    /// `σ̂²(t) = Γ̂(t,t)`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nodes).map(|i| self.get(i, i)).collect()
    }
}

pub fn cov_hat(curves: &[Curve]) -> Result<CovarianceTable> {
    if curves.len() < 2 {
        return Err(Error::InsufficientData(format!("covariance needs 2 curves, got {}", curves.len())));
    }
    let mean = mean_hat(curves)?;
    let nodes = mean.len();
    let mut values = vec![0.0; nodes * nodes];
    let mut centred = vec![0.0; nodes];
    for c in curves {
        for ((d, x), m) in centred.iter_mut().zip(c.values()).zip(&mean) {
            *d = x - m;
        }
        for i in 0..nodes {
            let di = centred[i];
            for j in i..nodes {
                values[i * nodes + j] += di * centred[j];
            }
        }
    }
    let n = curves.len() as f64;
    for i in 0..nodes {
        for j in i..nodes {
            let v = values[i * nodes + j] / n;
            values[i * nodes + j] = v;
            values[j * nodes + i] = v;
        }
    }
    Ok(CovarianceTable { nodes, values })
}

/// `v̂ = Γ̂(0,·)/û(0)` with `û(0) = Γ̂(0,1)`, so `v̂(1) = 1`.
pub fn estimate_v_positive(gamma_0: &[f64], grid: Grid, h: f64) -> Result<Jet> {
    check_len(gamma_0, grid)?;
    let k = bandwidth_steps(grid, h)?;
    let u0 = gamma_0[grid.intervals()];
    let scale = gamma_0.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if !(u0 > REGIME_RATIO * scale) {
        return Err(Error::WrongRegime(format!("u(0) estimate {u0} is not positive; use the u(0) = 0 estimator")));
    }
    let v: Vec<f64> = gamma_0.iter().map(|g| g / u0).collect();
    Ok(jet_of(v, grid.delta(), k))
}

/// `v̂ = σ̂²/û` with quotient-rule derivatives on `[δ,1]`, continued below the
/// first node `t_a ≥ δ` by the second-order Taylor polynomial at `t_a`.
pub fn estimate_v_zero(u: &Jet, sigma2: &Jet, grid: Grid, delta_n: f64) -> Result<Jet> {
    if u.len() != grid.len() || sigma2.len() != grid.len() {
        return Err(structural!("jets do not match the grid"));
    }
    if !(delta_n > 0.0 && delta_n < 1.0) {
        return Err(structural!("delta_n = {delta_n} must lie in (0,1)"));
    }
    let anchor = (0..grid.len()).find(|&j| grid.t(j) >= delta_n - 1e-9).expect("delta_n < 1 = t_N");
    let n = grid.len();
    let (mut v, mut v1, mut v2) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let scale = u.value.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    for j in anchor..n {
        let (uu, du, ddu) = (u.value[j], u.first[j], u.second[j]);
        if !(uu > REGIME_RATIO * scale) {
            return Err(Error::Singular { what: "u estimate on [delta_n, 1]", t: grid.t(j), value: uu });
        }
        let (s, ds, dds) = (sigma2.value[j], sigma2.first[j], sigma2.second[j]);
        let num1 = ds * uu - s * du;
        v[j] = s / uu;
        v1[j] = num1 / (uu * uu);
        v2[j] = (dds * uu - s * ddu) / (uu * uu) - 2.0 * du * num1 / (uu * uu * uu);
    }
    let ta = grid.t(anchor);
    for j in 0..anchor {
        let d = grid.t(j) - ta;
        v[j] = v[anchor] + v1[anchor] * d + 0.5 * v2[anchor] * d * d;
        v1[j] = v1[anchor] + v2[anchor] * d;
        v2[j] = v2[anchor];
    }
    Ok(Jet::new(v, v1, v2))
}

/// Bandwidth `h` and the cutoff `δ_n` of the `u(0) = 0` estimator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothingParams {
    pub h: f64,
    /// `None` picks `max(2h, n^(-1/25))` from the class size.
    pub delta_n: Option<f64>,
}

impl SmoothingParams {
    pub fn new(h: f64) -> Self {
        Self { h, delta_n: None }
    }

    pub fn with_delta(h: f64, delta_n: f64) -> Self {
        Self { h, delta_n: Some(delta_n) }
    }

    /// The cutoff used for a class of `n` curves.
    pub fn delta_for(&self, n: usize) -> f64 {
        self.delta_n.unwrap_or_else(|| (2.0 * self.h).max(libm::pow(n as f64, -1.0 / 25.0)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    U0Positive,
    U0Zero,
}

/// Estimated triangular specification of one class.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularCovEstimate {
    pub spec: TriangularSpec,
    pub regime: Regime,
    pub params: SmoothingParams,
}

/// Running sums of one class from which `m̂` and the three sections of `Γ̂`
/// are available in `O(N)`, with removal of single curves.
#[derive(Clone, Debug)]
struct ClassMoments {
    n: usize,
    sum: Vec<f64>,
    cross_end: Vec<f64>,
    cross_start: Vec<f64>,
    squares: Vec<f64>,
}

impl ClassMoments {
    fn new<'a>(nodes: usize, curves: impl Iterator<Item = &'a Curve>) -> Self {
        let mut m = Self {
            n: 0,
            sum: vec![0.0; nodes],
            cross_end: vec![0.0; nodes],
            cross_start: vec![0.0; nodes],
            squares: vec![0.0; nodes],
        };
        for c in curves {
            m.add(c.values(), 1.0);
        }
        m
    }

    fn add(&mut self, x: &[f64], sign: f64) {
        let (x0, x1) = (x[0], x[x.len() - 1]);
        for j in 0..x.len() {
            self.sum[j] += sign * x[j];
            self.cross_end[j] += sign * x[j] * x1;
            self.cross_start[j] += sign * x0 * x[j];
            self.squares[j] += sign * x[j] * x[j];
        }
        if sign > 0.0 {
            self.n += 1;
        } else {
            self.n -= 1;
        }
    }

    fn estimate(&self, grid: Grid, params: SmoothingParams) -> Result<TriangularCovEstimate> {
        if self.n < 2 {
            return Err(Error::InsufficientData(format!("a class has {} curves, need 2", self.n)));
        }
        let k = bandwidth_steps(grid, params.h)?;
        let delta = grid.delta();
        let n = self.n as f64;
        let last = grid.intervals();
        let mean: Vec<f64> = self.sum.iter().map(|s| s / n).collect();
        let (m0, m1) = (mean[0], mean[last]);
        let gamma_end: Vec<f64> = (0..=last).map(|j| self.cross_end[j] / n - mean[j] * m1).collect();
        let gamma_start: Vec<f64> = (0..=last).map(|j| self.cross_start[j] / n - m0 * mean[j]).collect();
        let sigma2: Vec<f64> = (0..=last).map(|j| (self.squares[j] / n - mean[j] * mean[j]).max(0.0)).collect();

        let max_s2 = sigma2.iter().fold(0.0f64, |a, &b| a.max(b));
        if !(max_s2 > 0.0) {
            return Err(Error::Degenerate("a class has no variance at any node".into()));
        }
        let regime = if sigma2[0] < REGIME_RATIO * max_s2 { Regime::U0Zero } else { Regime::U0Positive };
        let u = jet_of(gamma_end, delta, k);
        let v = match regime {
            Regime::U0Positive => estimate_v_positive(&gamma_start, grid, params.h)?,
            Regime::U0Zero => estimate_v_zero(&u, &jet_of(sigma2, delta, k), grid, params.delta_for(self.n))?,
        };
        let spec = TriangularSpec::new(grid, jet_of(mean, delta, k), u, v)?;
        Ok(TriangularCovEstimate { spec, regime, params })
    }
}

/// Estimates `m`, `u`, `v` and their first two derivatives from one class.
pub fn estimate_class(curves: &[Curve], params: SmoothingParams) -> Result<TriangularCovEstimate> {
    let first = curves.first().ok_or_else(|| Error::InsufficientData("no curves to estimate from".into()))?;
    let grid = first.grid();
    if curves.iter().any(|c| c.grid() != grid) {
        return Err(structural!("curves live on different grids"));
    }
    ClassMoments::new(grid.len(), curves.iter()).estimate(grid, params)
}

/// The chain log-RN with estimated specifications, evaluated on `[left_cut, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonparamPlugin {
    estimates: [TriangularCovEstimate; 2],
    evaluator: LogRnEvaluator,
    p: f64,
}

impl NonparamPlugin {
    fn from_estimates(estimates: [TriangularCovEstimate; 2], cut: usize, p: f64) -> Result<Self> {
        let evaluator = rn::compose_chain_from(&estimates[0].spec, &estimates[1].spec, cut)?;
        Ok(Self { estimates, evaluator, p })
    }

    pub fn estimates(&self) -> &[TriangularCovEstimate; 2] {
        &self.estimates
    }

    pub fn evaluator(&self) -> &LogRnEvaluator {
        &self.evaluator
    }

    pub fn log_rn(&self, x: &Curve) -> Result<f64> {
        self.evaluator.log_rn(x)
    }
}

impl Classifier for NonparamPlugin {
    fn classify(&self, x: &Curve) -> Label {
        rn::classify(self.evaluator.log_rn_unchecked(x), self.p)
    }
}

fn cut_steps(grid: Grid, left_cut: f64) -> Result<usize> {
    grid.steps_of(left_cut).ok_or_else(|| structural!("left cut {left_cut} is not a grid node"))
}

/// Fits the plug-in rule. `left_cut` defaults to `h`.
pub fn nonparam_plugin_classifier(
    train: &LabeledSample,
    params: SmoothingParams,
    left_cut: Option<f64>,
) -> Result<NonparamPlugin> {
    train.require_both_classes()?;
    let grid = train.grid();
    let cut = cut_steps(grid, left_cut.unwrap_or(params.h))?;
    let estimate = |label| ClassMoments::new(grid.len(), train.class(label)).estimate(grid, params);
    NonparamPlugin::from_estimates([estimate(Label::Zero)?, estimate(Label::One)?], cut, train.prior_p())
}

fn reduced_prior(train: &LabeledSample, left_out: Label) -> f64 {
    match train.prior() {
        Prior::Known(p) => p,
        Prior::FromCounts => {
            let zeros = train.count(Label::Zero) - usize::from(left_out == Label::Zero);
            zeros as f64 / (train.len() - 1) as f64
        }
    }
}

/// Leave-one-out outcome per observation: `Ok(correct)` or the fit error.
pub fn loo_outcomes(train: &LabeledSample, params: SmoothingParams) -> Result<Vec<Result<bool>>> {
    train.require_both_classes()?;
    let grid = train.grid();
    let cut = cut_steps(grid, params.h)?;
    let full = [
        ClassMoments::new(grid.len(), train.class(Label::Zero)),
        ClassMoments::new(grid.len(), train.class(Label::One)),
    ];
    // the class that keeps all of its curves is shared by every fold
    let whole: [Result<TriangularCovEstimate>; 2] = [full[0].estimate(grid, params), full[1].estimate(grid, params)];
    Ok(train
        .iter()
        .map(|(x, label)| {
            let i = label.index();
            let mut reduced = full[i].clone();
            reduced.add(x.values(), -1.0);
            let own = reduced.estimate(grid, params)?;
            let other = whole[1 - i].clone()?;
            let estimates = if i == 0 { [own, other] } else { [other, own] };
            let rule = NonparamPlugin::from_estimates(estimates, cut, reduced_prior(train, label))?;
            Ok(rule.classify(x) == label)
        })
        .collect())
}

/// Leave-one-out misclassification rate; a fold whose fit fails counts as
/// an error. `None` when every fold fails.
pub fn loo_error(train: &LabeledSample, params: SmoothingParams) -> Result<Option<f64>> {
    let outcomes = loo_outcomes(train, params)?;
    if outcomes.iter().all(|o| o.is_err()) {
        return Ok(None);
    }
    let wrong = outcomes.iter().filter(|o| !matches!(o, Ok(true))).count();
    Ok(Some(wrong as f64 / outcomes.len() as f64))
}

/// Result of bandwidth selection.
#[derive(Clone, Debug, PartialEq)]
pub struct HSelection {
    pub h: f64,
    /// LOO error per candidate; `None` if every fold failed.
    pub loo_errors: Vec<Option<f64>>,
}

/// `{2Δ, 4Δ, …, 20Δ}` restricted to `h < 1/2`.
pub fn default_h_candidates(grid: Grid) -> Vec<f64> {
    (1..=10).map(|i| 2 * i).filter(|&k| 2 * k < grid.intervals()).map(|k| k as f64 * grid.delta()).collect()
}

/// Bandwidth minimising the LOO error; ties go to the smallest `h`.
/// A single candidate is returned without evaluation.
pub fn select_h_cv(train: &LabeledSample, candidates: &[f64], delta_n: Option<f64>) -> Result<HSelection> {
    match candidates {
        [] => Err(Error::Selection("no bandwidth candidates".into())),
        [h] => Ok(HSelection { h: *h, loo_errors: vec![None] }),
        _ => {
            let loo_errors = candidates
                .iter()
                .map(|&h| loo_error(train, SmoothingParams { h, delta_n }))
                .collect::<Result<Vec<_>>>()?;
            let best = select_min(candidates, &loo_errors)
                .ok_or_else(|| Error::Selection("every bandwidth candidate failed".into()))?;
            Ok(HSelection { h: best, loo_errors })
        }
    }
}

fn select_min(candidates: &[f64], errors: &[Option<f64>]) -> Option<f64> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| candidates[a].total_cmp(&candidates[b]));
    let mut best: Option<(f64, f64)> = None;
    for i in order {
        if let Some(e) = errors[i] {
            if best.map_or(true, |(be, _)| e < be) {
                best = Some((e, candidates[i]));
            }
        }
    }
    best.map(|(_, h)| h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{sample_labeled, BrownianModel, GaussianModel, RngSeed};

    fn grid() -> Grid {
        Grid::uniform(50).unwrap()
    }

    fn tab(g: Grid, f: impl Fn(f64) -> f64) -> Vec<f64> {
        g.points().map(f).collect()
    }

    #[test]
    fn fd_on_quadratics() {
        let g = grid();
        let f = tab(g, |t| t * t);
        let d1 = fd_first(&f, g, 0.1).unwrap();
        let d2 = fd_second(&f, g, 0.1).unwrap();
        assert!((d1[25] - 1.0).abs() < 1e-12);
        for j in 5..=45 {
            assert!((d1[j] - 2.0 * g.t(j)).abs() < 1e-12);
            assert!((d2[j] - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fd_constant_and_linear() {
        let g = grid();
        for (a, b) in [(3.0, 0.0), (-1.0, 2.5)] {
            let f = tab(g, |t| a + b * t);
            let d1 = fd_first(&f, g, 0.12).unwrap();
            let d2 = fd_second(&f, g, 0.12).unwrap();
            for j in 0..g.len() {
                assert!((d1[j] - b).abs() < 1e-12, "j={j}");
                assert!(d2[j].abs() < 1e-9, "j={j}");
            }
        }
    }

    #[test]
    fn fd_cubic_interior_error_is_h_squared() {
        let g = grid();
        let f = tab(g, |t| t * t * t);
        let d1 = fd_first(&f, g, 0.04).unwrap();
        for j in 2..=48 {
            let t = g.t(j);
            assert!(((d1[j] - 3.0 * t * t) - 0.0016).abs() < 1e-12);
        }
    }

    #[test]
    fn fd_sine_second_derivative_bound() {
        let g = grid();
        let tau = 2.0 * core::f64::consts::PI;
        let f = tab(g, |t| libm::sin(tau * t));
        let d2 = fd_second(&f, g, 0.02).unwrap();
        let bound = libm::pow(tau, 4.0) * 0.02 * 0.02 / 12.0;
        for j in 1..50 {
            let exact = -tau * tau * libm::sin(tau * g.t(j));
            assert!((d2[j] - exact).abs() <= bound);
        }
    }

    #[test]
    fn bandwidth_must_be_on_grid() {
        let g = grid();
        let f = tab(g, |t| t);
        assert!(fd_first(&f, g, 0.03).is_err());
        assert!(fd_first(&f, g, 0.5).is_err());
        assert!(fd_second(&f, g, 0.0).is_err());
        assert!(fd_first(&f[1..], g, 0.04).is_err());
    }

    #[test]
    fn mean_examples() {
        let g = grid();
        let x = Curve::from_fn(g, |t| libm::sin(5.0 * t)).unwrap();
        assert_eq!(mean_hat(core::slice::from_ref(&x)).unwrap(), x.values());
        let m = mean_hat(&[x.clone(), x.map(|v| -v).unwrap()]).unwrap();
        assert!(m.iter().all(|&v| v == 0.0));
        assert!(mean_hat(&[]).is_err());
    }

    #[test]
    fn covariance_examples() {
        let g = grid();
        let x = Curve::from_fn(g, |t| 1.0 + t).unwrap();
        assert!(cov_hat(&[x.clone(), x.clone()]).unwrap().values.iter().all(|&v| v == 0.0));
        let gg = Curve::from_fn(g, |t| libm::cos(3.0 * t)).unwrap();
        let table = cov_hat(&[gg.clone(), gg.map(|v| -v).unwrap()]).unwrap();
        for i in 0..g.len() {
            for j in 0..g.len() {
                assert!((table.get(i, j) - gg.at(i) * gg.at(j)).abs() < 1e-15);
            }
        }
        assert!(matches!(cov_hat(&[x]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn moments_agree_with_table() {
        let g = grid();
        let m0 = GaussianModel::Brownian { model: BrownianModel { c: 1.0, sigma: 1.0, theta: 0.7 }, with_drift: true };
        let s = sample_labeled(&m0, &m0, 30, 1, Prior::Known(0.5), g, RngSeed::new(3)).unwrap();
        let curves = &s.curves()[..30];
        let table = cov_hat(curves).unwrap();
        let mom = ClassMoments::new(g.len(), curves.iter());
        let n = 30.0;
        let mean = mean_hat(curves).unwrap();
        for j in 0..g.len() {
            let end = mom.cross_end[j] / n - mean[j] * mean[50];
            assert!((end - table.get(j, 50)).abs() < 1e-12);
            let start = mom.cross_start[j] / n - mean[0] * mean[j];
            assert!((start - table.get(0, j)).abs() < 1e-12);
        }
    }

    #[test]
    fn v_positive_examples() {
        let g = grid();
        let flat = vec![0.8; g.len()];
        let v = estimate_v_positive(&flat, g, 0.1).unwrap();
        assert!(v.value.iter().all(|&x| x == 1.0));
        assert!(v.first.iter().all(|&x| x == 0.0));
        let beta: f64 = 0.7;
        let section = tab(g, |t| 1.3 * libm::exp(-beta * t));
        let v = estimate_v_positive(&section, g, 0.04).unwrap();
        for j in 0..g.len() {
            assert!((v.value[j] - libm::exp(beta * (1.0 - g.t(j)))).abs() < 1e-12);
            assert!((v.first[j] + beta * v.value[j]).abs() < 0.02);
        }
        assert!(matches!(estimate_v_positive(&vec![0.0; g.len()], g, 0.1), Err(Error::WrongRegime(_))));
    }

    #[test]
    fn v_zero_examples() {
        let g = grid();
        let u = Jet::from_fns(g, |t| 2.0 * t, |_| 2.0, |_| 0.0);
        let s2 = Jet::from_fns(g, |t| 2.0 * t, |_| 2.0, |_| 0.0);
        let v = estimate_v_zero(&u, &s2, g, 0.3).unwrap();
        for j in 0..g.len() {
            assert!((v.value[j] - 1.0).abs() < 1e-12);
            assert!(v.first[j].abs() < 1e-12 && v.second[j].abs() < 1e-12);
        }
        let beta: f64 = 1.0;
        let vals = tab(g, |t| libm::exp(-beta) * (libm::exp(beta * t) - libm::exp(-beta * t)));
        let uj = jet_of(vals.clone(), g.delta(), 2);
        let sj =
            jet_of(vals.iter().zip(g.points()).map(|(u, t)| u * libm::exp(beta * (1.0 - t))).collect(), g.delta(), 2);
        let v = estimate_v_zero(&uj, &sj, g, 0.2).unwrap();
        for j in 10..g.len() {
            assert!((v.value[j] - libm::exp(beta * (1.0 - g.t(j)))).abs() < 1e-12);
        }
        // Taylor extension meets the anchor value
        assert_eq!(v.value[10], sj.value[10] / uj.value[10]);
        let zero_u = Jet::zeros(g.len());
        assert!(matches!(estimate_v_zero(&zero_u, &s2, g, 0.3), Err(Error::Singular { .. })));
    }

    #[test]
    fn regime_detection() {
        let g = grid();
        let det = GaussianModel::Brownian { model: BrownianModel { c: 1.5, sigma: 1.0, theta: 0.0 }, with_drift: true };
        let rnd = GaussianModel::Brownian { model: BrownianModel { c: 1.5, sigma: 1.0, theta: 1.0 }, with_drift: true };
        let a = sample_labeled(&det, &det, 50, 1, Prior::Known(0.5), g, RngSeed::new(1)).unwrap();
        let b = sample_labeled(&rnd, &rnd, 50, 1, Prior::Known(0.5), g, RngSeed::new(1)).unwrap();
        assert_eq!(estimate_class(&a.curves()[..50], SmoothingParams::new(0.1)).unwrap().regime, Regime::U0Zero);
        assert_eq!(estimate_class(&b.curves()[..50], SmoothingParams::new(0.1)).unwrap().regime, Regime::U0Positive);
    }

    #[test]
    fn loo_downdating_matches_refit() {
        let g = Grid::uniform(20).unwrap();
        let m0 = GaussianModel::Brownian { model: BrownianModel { c: 1.5, sigma: 1.0, theta: 1.0 }, with_drift: true };
        let m1 = GaussianModel::Brownian { model: BrownianModel { c: 1.5, sigma: 1.0, theta: 1.0 }, with_drift: false };
        let train = sample_labeled(&m0, &m1, 6, 6, Prior::Known(0.5), g, RngSeed::new(8)).unwrap();
        let params = SmoothingParams::new(0.1);
        let fast = loo_outcomes(&train, params).unwrap();
        for (i, outcome) in fast.iter().enumerate() {
            let rest = train.without(i).unwrap();
            let slow = nonparam_plugin_classifier(&rest, params, None)
                .map(|rule| rule.classify(&train.curves()[i]) == train.labels()[i]);
            assert_eq!(outcome.as_ref().ok(), slow.as_ref().ok(), "fold {i}");
        }
    }

    #[test]
    fn h_selection_rules() {
        assert_eq!(select_min(&[0.1, 0.2], &[Some(0.30), Some(0.25)]), Some(0.2));
        assert_eq!(select_min(&[0.2, 0.1], &[Some(0.25), Some(0.25)]), Some(0.1));
        assert_eq!(select_min(&[0.1, 0.2], &[None, None]), None);
        let g = grid();
        let m = GaussianModel::Brownian { model: BrownianModel { c: 1.5, sigma: 1.0, theta: 0.0 }, with_drift: true };
        let train = sample_labeled(&m, &m, 3, 3, Prior::Known(0.5), g, RngSeed::new(2)).unwrap();
        assert_eq!(select_h_cv(&train, &[0.3], None).unwrap().h, 0.3);
        assert_eq!(default_h_candidates(g).len(), 10);
    }
}
