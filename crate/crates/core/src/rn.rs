//! Log Radon–Nikodym derivatives `log dμ₀/dμ₁` between Gaussian measures on
//! `C[0,1]` whose covariances are triangular, `Γ(s,t) = u(min(s,t))·v(max(s,t))`.
//!
//! Two elementary factors are available:
//!
//! - [`log_rn_zero_mean`]: two centred measures with different covariances
//!   (Varberg's formula, integrated by parts),
//! - [`log_rn_mean_shift`]: mean `m` against mean 0 under one shared
//!   covariance (Jørsboe's formula, integrated by parts),
//!
//! and [`compose_chain`] multiplies them into the general case
//! `dP_{m₀,Γ₀}/dP_{m₁,Γ₁} = dP_{m₀,Γ₀}/dP_{0,Γ₀} · dP_{0,Γ₀}/dP_{0,Γ₁} · dP_{0,Γ₁}/dP_{m₁,Γ₁}`.
//!
//! Every factor is a quadratic functional of the path,
//!
//! ```text
//! c + α·x(a) + β·x(1) + κ_a·x(a)² + κ_1·x(1)² + ∫_a^1 w₁ x dt + ∫_a^1 w₂ x² dt,
//! ```
//!
//! whose coefficients depend only on the tabulated `m, u, v` and their first
//! two derivatives. The Stieltjes integrals `∫ … dF`, `∫ … dG` become Riemann
//! integrals against `F′`, `G′` (quotient rule on the tabulated derivatives)
//! and are evaluated by the trapezoidal rule. Everything stays in log space.
//!
//! Evaluation may be restricted to a window `[t_a, 1]`; the formulas are then
//! those of the restricted processes, with `t_a` playing the role of 0.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{structural, Error, Result};
use crate::grid::{Curve, Grid, Label};

/// Factor denominators must exceed this in absolute value at every node.
pub const SINGULARITY_TOL: f64 = 1e-10;
/// `v` must stay above this at every node.
pub const V_FLOOR: f64 = 1e-10;

/// A function tabulated on the grid together with its first two derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub value: Vec<f64>,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

impl Jet {
    pub fn new(value: Vec<f64>, first: Vec<f64>, second: Vec<f64>) -> Self {
        Self { value, first, second }
    }

    pub fn constant(len: usize, c: f64) -> Self {
        Self::new(vec![c; len], vec![0.0; len], vec![0.0; len])
    }

    pub fn zeros(len: usize) -> Self {
        Self::constant(len, 0.0)
    }

    /// Tabulates closed-form `f`, `f′`, `f″`.
    pub fn from_fns(grid: Grid, f: impl Fn(f64) -> f64, f1: impl Fn(f64) -> f64, f2: impl Fn(f64) -> f64) -> Self {
        Self::new(grid.points().map(f).collect(), grid.points().map(f1).collect(), grid.points().map(f2).collect())
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    /// Multiplies the function (and so its derivatives) by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let scale = |xs: &[f64]| xs.iter().map(|x| x * s).collect();
        Self::new(scale(&self.value), scale(&self.first), scale(&self.second))
    }

    fn is_identically_zero(&self) -> bool {
        self.value.iter().chain(&self.first).chain(&self.second).all(|&x| x == 0.0)
    }

    fn check(&self, name: &str, len: usize) -> Result<()> {
        for (part, xs) in [("value", &self.value), ("first", &self.first), ("second", &self.second)] {
            if xs.len() != len {
                return Err(structural!("{name}.{part} has {} entries for {len} grid points", xs.len()));
            }
            if let Some(j) = xs.iter().position(|x| !x.is_finite()) {
                return Err(structural!("{name}.{part} is not finite at node {j}"));
            }
        }
        Ok(())
    }
}

/// Mean `m` and covariance factors `u`, `v` (normalized so `v(1) = 1`) of one
/// Gaussian class, each with two derivatives, on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularSpec {
    grid: Grid,
    mean: Jet,
    u: Jet,
    v: Jet,
}

impl TriangularSpec {
    pub fn new(grid: Grid, mean: Jet, u: Jet, v: Jet) -> Result<Self> {
        let len = grid.len();
        mean.check("m", len)?;
        u.check("u", len)?;
        v.check("v", len)?;
        if let Some((j, &vj)) = v.value.iter().enumerate().find(|(_, &vj)| vj <= V_FLOOR) {
            return Err(Error::Singular { what: "v", t: grid.t(j), value: vj });
        }
        let v_end = v.value[len - 1];
        if (v_end - 1.0).abs() > 1e-9 {
            return Err(Error::Admissibility(format!("v(1) = {v_end}, expected the normalization v(1) = 1")));
        }
        let spec = Self { grid, mean, u, v };
        if spec.u_vanishes_at(0) {
            let m0 = spec.mean.value[0];
            if m0.abs() > zero_tol(&spec.mean.value) {
                return Err(Error::Admissibility(format!("u(0) = 0 forces m(0) = 0, got m(0) = {m0}")));
            }
        }
        Ok(spec)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn mean(&self) -> &Jet {
        &self.mean
    }

    pub fn u(&self) -> &Jet {
        &self.u
    }

    pub fn v(&self) -> &Jet {
        &self.v
    }

    /// The same covariance with the mean replaced by 0.
    pub fn centred(&self) -> Self {
        Self { mean: Jet::zeros(self.grid.len()), ..self.clone() }
    }

    pub fn has_zero_mean(&self) -> bool {
        self.mean.is_identically_zero()
    }

    /// Whether `u(t_j)` is zero up to rounding relative to the scale of `u`.
    pub fn u_vanishes_at(&self, j: usize) -> bool {
        self.u.value[j].abs() <= zero_tol(&self.u.value)
    }

    /// `Γ(s,t)` at grid nodes `i`, `j`.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.u.value[lo] * self.v.value[hi]
    }
}

fn zero_tol(xs: &[f64]) -> f64 {
    1e-12 * xs.iter().fold(1.0f64, |acc, x| acc.max(x.abs()))
}

/// Coefficients of one factor; see the module docs.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    pub constant: f64,
    pub start_linear: f64,
    pub end_linear: f64,
    pub start_square: f64,
    pub end_square: f64,
    /// `w₁(t_j)` for the whole grid; nodes before the window are zero.
    pub linear_weight: Vec<f64>,
    /// `w₂(t_j)`, same layout.
    pub square_weight: Vec<f64>,
}

impl QuadraticForm {
    fn zero(len: usize) -> Self {
        Self {
            constant: 0.0,
            start_linear: 0.0,
            end_linear: 0.0,
            start_square: 0.0,
            end_square: 0.0,
            linear_weight: vec![0.0; len],
            square_weight: vec![0.0; len],
        }
    }

    fn add_scaled(&mut self, other: &Self, s: f64) {
        self.constant += s * other.constant;
        self.start_linear += s * other.start_linear;
        self.end_linear += s * other.end_linear;
        self.start_square += s * other.start_square;
        self.end_square += s * other.end_square;
        for (w, o) in self.linear_weight.iter_mut().zip(&other.linear_weight) {
            *w += s * o;
        }
        for (w, o) in self.square_weight.iter_mut().zip(&other.square_weight) {
            *w += s * o;
        }
    }

    fn evaluate(&self, x: &[f64], start: usize, delta: f64) -> f64 {
        let last = x.len() - 1;
        let (xa, x1) = (x[start], x[last]);
        let mut integral = 0.0;
        for j in start..=last {
            let xj = x[j];
            let term = xj * (self.linear_weight[j] + xj * self.square_weight[j]);
            integral += if j == start || j == last { 0.5 * term } else { term };
        }
        self.constant
            + self.start_linear * xa
            + self.end_linear * x1
            + self.start_square * xa * xa
            + self.end_square * x1 * x1
            + delta * integral
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// `dP_{m,Γ}/dP_{0,Γ}`.
    MeanShift,
    /// `dP_{0,Γ₀}/dP_{0,Γ₁}`.
    ZeroMean,
}

/// One elementary factor, entering the chain with exponent `sign` (±1).
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub kind: FactorKind,
    pub sign: f64,
    pub form: QuadraticForm,
}

/// A compiled log-RN derivative: an ordered product of elementary factors.
#[derive(Clone, Debug, PartialEq)]
pub struct LogRnEvaluator {
    grid: Grid,
    start: usize,
    factors: Vec<Factor>,
    combined: QuadraticForm,
}

impl LogRnEvaluator {
    fn new(grid: Grid, start: usize, factors: Vec<Factor>) -> Self {
        let mut combined = QuadraticForm::zero(grid.len());
        for factor in &factors {
            combined.add_scaled(&factor.form, factor.sign);
        }
        Self { grid, start, factors, combined }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Index of the first node of the evaluation window.
    pub fn window_start(&self) -> usize {
        self.start
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// `log dμ₀/dμ₁(x)`. The curve must live on the evaluator's grid.
    pub fn log_rn(&self, x: &Curve) -> Result<f64> {
        if x.grid() != self.grid {
            return Err(structural!("curve grid does not match the evaluator grid"));
        }
        Ok(self.log_rn_unchecked(x))
    }

    pub(crate) fn log_rn_unchecked(&self, x: &Curve) -> f64 {
        self.combined.evaluate(x.values(), self.start, self.grid.delta())
    }

    /// Signed log contribution of each factor, in chain order.
    pub fn factor_values(&self, x: &Curve) -> Vec<f64> {
        self.factors.iter().map(|f| f.sign * f.form.evaluate(x.values(), self.start, self.grid.delta())).collect()
    }
}

fn check_window(grid: Grid, start: usize) -> Result<()> {
    if start + 1 >= grid.len() {
        return Err(structural!("window start {start} leaves fewer than two nodes"));
    }
    Ok(())
}

fn checked_denominator(what: &'static str, grid: Grid, j: usize, value: f64) -> Result<f64> {
    if value.abs() <= SINGULARITY_TOL {
        return Err(Error::Singular { what, t: grid.t(j), value });
    }
    Ok(value)
}

/// Compiles `log dP_{0,Γ₀}/dP_{0,Γ₁}` over `[t_start, 1]`. Means are ignored.
pub fn zero_mean_form(spec0: &TriangularSpec, spec1: &TriangularSpec, start: usize) -> Result<QuadraticForm> {
    let grid = spec0.grid;
    if spec1.grid != grid {
        return Err(structural!("specs live on different grids"));
    }
    check_window(grid, start)?;
    let (u0, v0, u1, v1) = (&spec0.u, &spec0.v, &spec1.u, &spec1.v);
    let last = grid.len() - 1;
    let a = start;

    let zero0 = spec0.u_vanishes_at(a);
    let zero1 = spec1.u_vanishes_at(a);
    if zero0 != zero1 {
        return Err(Error::Admissibility(format!(
            "u0(t_a) = {} and u1(t_a) = {} must vanish together",
            u0.value[a], u1.value[a]
        )));
    }

    let mut form = QuadraticForm::zero(grid.len());
    let mut f_start = 0.0;
    let mut f_end = 0.0;
    for j in a..=last {
        let num = v1.value[j] * v0.first[j] - v0.value[j] * v1.first[j];
        let num_d = v1.value[j] * v0.second[j] - v0.value[j] * v1.second[j];
        let den =
            checked_denominator("v1·u1' − u1·v1'", grid, j, v1.value[j] * u1.first[j] - u1.value[j] * v1.first[j])?;
        let den_d = v1.value[j] * u1.second[j] - u1.value[j] * v1.second[j];
        let f = num / den;
        let f_d = (num_d * den - num * den_d) / (den * den);
        form.square_weight[j] = -0.5 * f_d / (v0.value[j] * v1.value[j]);
        if j == a {
            f_start = f;
        }
        if j == last {
            f_end = f;
        }
    }

    let (log_c1, c4) = if zero0 {
        let log_c1 = 0.5
            * (libm::log(v0.value[a]) + libm::log(v1.value[last]) - libm::log(v0.value[last]) - libm::log(v1.value[a]));
        (log_c1, 0.0)
    } else {
        if u0.value[a] <= 0.0 || u1.value[a] <= 0.0 {
            return Err(Error::Admissibility(format!(
                "u0(t_a) = {} and u1(t_a) = {} must be positive",
                u0.value[a], u1.value[a]
            )));
        }
        let log_c1 = 0.5
            * (libm::log(u1.value[a]) + libm::log(v1.value[last]) - libm::log(v0.value[last]) - libm::log(u0.value[a]));
        let (uu0, vv0, uu1, vv1) = (u0.value[a], v0.value[a], u1.value[a], v1.value[a]);
        let c4 = (vv0 * uu0 - uu1 * vv1) / (vv1 * vv0 * uu0 * uu1);
        (log_c1, c4)
    };
    let c3 = c4 - f_start / (v0.value[a] * v1.value[a]);
    let c2 = f_end / (v0.value[last] * v1.value[last]);
    form.constant = log_c1;
    form.start_square = 0.5 * c3;
    form.end_square = 0.5 * c2;
    Ok(form)
}

/// Compiles `log dP_{m,Γ}/dP_{0,Γ}` over `[t_start, 1]` for the mean and
/// covariance of `spec`.
pub fn mean_shift_form(spec: &TriangularSpec, start: usize) -> Result<QuadraticForm> {
    let grid = spec.grid;
    check_window(grid, start)?;
    let mut form = QuadraticForm::zero(grid.len());
    if spec.has_zero_mean() {
        return Ok(form);
    }
    let (m, u, v) = (&spec.mean, &spec.u, &spec.v);
    let last = grid.len() - 1;
    let a = start;

    let mut g_start = 0.0;
    let mut g_end = 0.0;
    let mut stieltjes = Vec::with_capacity(last - a + 1);
    for j in a..=last {
        let num = v.value[j] * m.first[j] - m.value[j] * v.first[j];
        let num_d = v.value[j] * m.second[j] - m.value[j] * v.second[j];
        let den = checked_denominator("v·u' − u·v'", grid, j, v.value[j] * u.first[j] - u.value[j] * v.first[j])?;
        let den_d = v.value[j] * u.second[j] - u.value[j] * v.second[j];
        let g = num / den;
        let g_d = (num_d * den - num * den_d) / (den * den);
        form.linear_weight[j] = -g_d / v.value[j];
        // G · (m/v)′
        stieltjes.push(g * num / (v.value[j] * v.value[j]));
        if j == a {
            g_start = g;
        }
        if j == last {
            g_end = g;
        }
    }

    let (d2, d3) = if spec.u_vanishes_at(a) {
        let ma = m.value[a];
        if ma.abs() > zero_tol(&m.value) {
            return Err(Error::Admissibility(format!("u(t_a) = 0 requires m(t_a) = 0, got {ma}")));
        }
        (0.0, 0.0)
    } else {
        let var_a = u.value[a] * v.value[a];
        (m.value[a] / var_a, -m.value[a] * m.value[a] / (2.0 * var_a))
    };
    let d1 = d3 - 0.5 * crate::grid::trapezoid_from(&stieltjes, grid.delta(), 0);
    form.constant = d1;
    form.start_linear = d2 - g_start / v.value[a];
    form.end_linear = g_end / v.value[last];
    Ok(form)
}

/// `log dμ₀/dμ₁(x)` for two centred measures.
pub fn log_rn_zero_mean(spec0: &TriangularSpec, spec1: &TriangularSpec, x: &Curve) -> Result<f64> {
    if !spec0.has_zero_mean() || !spec1.has_zero_mean() {
        return Err(Error::Admissibility("both means must vanish identically".into()));
    }
    let form = zero_mean_form(spec0, spec1, 0)?;
    LogRnEvaluator::new(spec0.grid, 0, vec![Factor { kind: FactorKind::ZeroMean, sign: 1.0, form }]).log_rn(x)
}

/// `log dP_{m,Γ}/dP_{0,Γ}(x)` where `m`, `Γ` come from `spec`.
pub fn log_rn_mean_shift(spec: &TriangularSpec, x: &Curve) -> Result<f64> {
    let form = mean_shift_form(spec, 0)?;
    LogRnEvaluator::new(spec.grid, 0, vec![Factor { kind: FactorKind::MeanShift, sign: 1.0, form }]).log_rn(x)
}

/// The full chain `dP_{m₀,Γ₀}/dP_{m₁,Γ₁}` on the whole interval.
pub fn compose_chain(spec0: &TriangularSpec, spec1: &TriangularSpec) -> Result<LogRnEvaluator> {
    compose_chain_from(spec0, spec1, 0)
}

/// The full chain restricted to `[t_start, 1]`.
pub fn compose_chain_from(spec0: &TriangularSpec, spec1: &TriangularSpec, start: usize) -> Result<LogRnEvaluator> {
    if spec0.grid != spec1.grid {
        return Err(structural!("specs live on different grids"));
    }
    let factors = vec![
        Factor { kind: FactorKind::MeanShift, sign: 1.0, form: mean_shift_form(spec0, start)? },
        Factor { kind: FactorKind::ZeroMean, sign: 1.0, form: zero_mean_form(spec0, spec1, start)? },
        Factor { kind: FactorKind::MeanShift, sign: -1.0, form: mean_shift_form(spec1, start)? },
    ];
    Ok(LogRnEvaluator::new(spec0.grid, start, factors))
}

/// `η = (1−p) / (p·e^{log_rn} + 1 − p)`, the posterior probability of class 1.
pub fn eta(log_rn: f64, p: f64) -> f64 {
    // η = 1 / (1 + e^z) with z = log_rn + log(p/(1−p))
    let z = log_rn + libm::log(p) - libm::log1p(-p);
    if z > 0.0 {
        let e = libm::exp(-z);
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + libm::exp(z))
    }
}

/// The Bayes decision `1{η > 1/2}`, i.e. class 1 iff `e^{log_rn} < (1−p)/p`.
/// A tie goes to class 0.
pub fn classify(log_rn: f64, p: f64) -> Label {
    Label::from(log_rn < libm::log1p(-p) - libm::log(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::uniform(50).unwrap()
    }

    fn brownian(grid: Grid, c: f64, sigma: f64, theta: f64) -> TriangularSpec {
        let s2 = sigma * sigma;
        let th2 = theta * theta;
        TriangularSpec::new(
            grid,
            Jet::from_fns(grid, |t| c * t, |_| c, |_| 0.0),
            Jet::from_fns(grid, |t| th2 + s2 * t, |_| s2, |_| 0.0),
            Jet::constant(grid.len(), 1.0),
        )
        .unwrap()
    }

    #[test]
    fn identical_specs_give_zero() {
        let spec = brownian(grid(), 0.0, 1.3, 0.7);
        let x = Curve::from_fn(grid(), |t| 0.3 + libm::sin(5.0 * t)).unwrap();
        assert_eq!(log_rn_zero_mean(&spec, &spec, &x).unwrap(), 0.0);
        let with_mean = brownian(grid(), 2.0, 1.3, 0.7);
        assert_eq!(compose_chain(&with_mean, &with_mean).unwrap().log_rn(&x).unwrap(), 0.0);
    }

    #[test]
    fn brownian_start_variance_ratio() {
        // X(0) ~ N(0, θ²); the rest of the path has the same law.
        let (t0, t1) = (1.0, 0.5);
        let s0 = brownian(grid(), 0.0, 1.0, t0);
        let s1 = brownian(grid(), 0.0, 1.0, t1);
        for x0 in [-1.2, 0.0, 0.4, 2.0] {
            let x = Curve::from_fn(grid(), |t| x0 + libm::cos(3.0 * t) - 1.0).unwrap();
            let got = log_rn_zero_mean(&s0, &s1, &x).unwrap();
            // ratio of N(0,θ₀²) and N(0,θ₁²) densities at x(0)
            let expected = libm::log(t1 / t0) - 0.5 * (1.0 / (t0 * t0) - 1.0 / (t1 * t1)) * x0 * x0;
            assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        }
    }

    #[test]
    fn zero_mean_requires_centred_specs() {
        let s = brownian(grid(), 1.0, 1.0, 1.0);
        let x = Curve::from_fn(grid(), |t| t).unwrap();
        assert!(matches!(log_rn_zero_mean(&s, &s, &x), Err(Error::Admissibility(_))));
    }

    #[test]
    fn zero_mean_rejects_mismatched_start_regimes() {
        let s0 = brownian(grid(), 0.0, 1.0, 0.0);
        let s1 = brownian(grid(), 0.0, 1.0, 1.0);
        let x = Curve::from_fn(grid(), |t| t).unwrap();
        assert!(matches!(log_rn_zero_mean(&s0, &s1, &x), Err(Error::Admissibility(_))));
    }

    #[test]
    fn singular_denominator_is_reported() {
        // u ≡ 1, v ≡ 1 gives v·u' − u·v' ≡ 0
        let g = grid();
        let flat =
            TriangularSpec::new(g, Jet::zeros(g.len()), Jet::constant(g.len(), 1.0), Jet::constant(g.len(), 1.0))
                .unwrap();
        let x = Curve::from_fn(g, |t| t).unwrap();
        assert!(matches!(log_rn_zero_mean(&flat, &flat, &x), Err(Error::Singular { .. })));
        let shifted = TriangularSpec::new(
            g,
            Jet::from_fns(g, |t| t, |_| 1.0, |_| 0.0),
            Jet::constant(g.len(), 1.0),
            Jet::constant(g.len(), 1.0),
        )
        .unwrap();
        assert!(matches!(log_rn_mean_shift(&shifted, &x), Err(Error::Singular { .. })));
    }

    #[test]
    fn mean_shift_zero_mean_is_zero() {
        let s = brownian(grid(), 0.0, 1.0, 0.0);
        let x = Curve::from_fn(grid(), libm::sin).unwrap();
        assert_eq!(log_rn_mean_shift(&s, &x).unwrap(), 0.0);
    }

    #[test]
    fn mean_shift_brownian_drift() {
        // Girsanov: log dP/dP₀ = (c/σ²)·x(1) − c²/(2σ²) = (c/(2σ²))(2x(1) − c)
        for (c, sigma) in [(1.5, 1.0), (3.0, 1.0), (2.0, 2.0)] {
            let s = brownian(grid(), c, sigma, 0.0);
            for x1 in [-1.0, 0.0, 0.3, 2.2] {
                let x = Curve::from_fn(grid(), |t| x1 * t + libm::sin(7.0 * t) * (1.0 - t)).unwrap();
                let got = log_rn_mean_shift(&s, &x).unwrap();
                let expected = c / (2.0 * sigma * sigma) * (2.0 * x.end() - c);
                assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
            }
        }
        let s = brownian(grid(), 1.5, 1.0, 0.0);
        let boundary = Curve::from_fn(grid(), |t| 0.75 * t * t).unwrap();
        assert!(log_rn_mean_shift(&s, &boundary).unwrap().abs() < 1e-14);
    }

    #[test]
    fn mean_shift_admissibility() {
        let g = grid();
        let bad = TriangularSpec::new(
            g,
            Jet::constant(g.len(), 1.0),
            Jet::from_fns(g, |t| t, |_| 1.0, |_| 0.0),
            Jet::constant(g.len(), 1.0),
        );
        assert!(matches!(bad, Err(Error::Admissibility(_))));
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(0.0, 0.5), 0.5);
        let big = eta(1e6, 0.5);
        assert!((0.0..=1e-300).contains(&big));
        assert!((eta(-1e6, 0.5) - 1.0).abs() < 1e-15);
        assert!((eta(libm::log(3.0), 0.25) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(0.0, 0.5), Label::Zero);
        assert_eq!(classify(-1.0, 0.5), Label::One);
        assert_eq!(classify(libm::log(0.2), 0.9), Label::Zero);
        assert_eq!(classify(libm::log(0.1), 0.9), Label::One);
    }

    #[test]
    fn window_must_hold_two_nodes() {
        let s = brownian(grid(), 1.0, 1.0, 0.0);
        assert!(compose_chain_from(&s, &s, 50).is_err());
        assert!(compose_chain_from(&s, &s, 49).is_ok());
    }
}
