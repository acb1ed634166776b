//! Uniform grids on `[0,1]`, curves observed on them, labeled samples and
//! the two scalar functionals every other module leans on: the trapezoidal
//! rule and the sup distance.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{structural, Error, Result};

/// Relative tolerance for accepting user-supplied grid points as uniform.
const UNIFORM_TOL: f64 = 1e-9;

/// Equidistant nodes `t_j = j/N`, `j = 0..=N`, with `N ≥ 2`.
///
/// Only the number of intervals is stored; nodes are recomputed on demand so
/// the grid is `Copy` and every curve can carry it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    intervals: usize,
}

impl Grid {
    pub fn uniform(intervals: usize) -> Result<Self> {
        if intervals < 2 {
            return Err(structural!("a grid needs N >= 2 intervals, got {intervals}"));
        }
        Ok(Self { intervals })
    }

    /// Validates arbitrary node positions: they must start at 0, end at 1 and
    /// be equally spaced.
    pub fn from_points(points: &[f64]) -> Result<Self> {
        if points.len() < 3 {
            return Err(structural!("a grid needs at least 3 points, got {}", points.len()));
        }
        let grid = Self::uniform(points.len() - 1)?;
        for (j, &t) in points.iter().enumerate() {
            if !t.is_finite() || (t - grid.t(j)).abs() > UNIFORM_TOL {
                return Err(structural!(
                    "grid point {j} is {t}, expected {} on the uniform grid over [0,1]",
                    grid.t(j)
                ));
            }
        }
        Ok(grid)
    }

    /// Number of intervals `N`.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// Number of nodes `N + 1`.
    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Internodal spacing `Δ = 1/N`.
    pub fn delta(&self) -> f64 {
        1.0 / self.intervals as f64
    }

    /// The `j`-th node.
    pub fn t(&self, j: usize) -> f64 {
        j as f64 / self.intervals as f64
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len()).map(move |j| self.t(j))
    }

    /// Index of the node at `t = steps·Δ` when `value` is (within tolerance) a
    /// whole number of steps.
    pub fn steps_of(&self, value: f64) -> Option<usize> {
        let steps = value * self.intervals as f64;
        let rounded = libm::round(steps);
        if rounded >= 0.0 && (steps - rounded).abs() <= 1e-7 {
            Some(rounded as usize)
        } else {
            None
        }
    }
}

/// Class label: `Zero` is population `P_0`, `One` is `P_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn index(self) -> usize {
        match self {
            Label::Zero => 0,
            Label::One => 1,
        }
    }

    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            0 => Ok(Label::Zero),
            1 => Ok(Label::One),
            other => Err(structural!("labels are 0 or 1, got {other}")),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::Zero => Label::One,
            Label::One => Label::Zero,
        }
    }
}

impl From<bool> for Label {
    /// `true` maps to class 1.
    fn from(one: bool) -> Self {
        if one {
            Label::One
        } else {
            Label::Zero
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A function observed at every node of a [`Grid`]. Immutable.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    grid: Grid,
    values: Vec<f64>,
}

impl Curve {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(structural!("curve has {} values for a grid of {} points", values.len(), grid.len()));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(structural!("curve value at node {j} is not finite"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, j: usize) -> f64 {
        self.values[j]
    }

    /// `x(0)`.
    pub fn start(&self) -> f64 {
        self.values[0]
    }

    /// `x(1)`.
    pub fn end(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Class prior `p = P(Y = 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Prior {
    Known(f64),
    /// Proportion of class-0 curves in the sample.
    FromCounts,
}

/// Curves with their labels, all on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledSample {
    grid: Grid,
    curves: Vec<Curve>,
    labels: Vec<Label>,
    prior: Prior,
}

impl LabeledSample {
    pub fn new(curves: Vec<Curve>, labels: Vec<Label>, prior: Prior) -> Result<Self> {
        if curves.is_empty() {
            return Err(structural!("a labeled sample needs at least one curve"));
        }
        if curves.len() != labels.len() {
            return Err(structural!("{} curves but {} labels", curves.len(), labels.len()));
        }
        let grid = curves[0].grid();
        if let Some(i) = curves.iter().position(|c| c.grid() != grid) {
            return Err(structural!("curve {i} is on a different grid"));
        }
        if let Prior::Known(p) = prior {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidModel(alloc::format!("prior p = {p} is not in (0,1)")));
            }
        }
        Ok(Self { grid, curves, labels, prior })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn prior(&self) -> Prior {
        self.prior
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&Curve, Label)> + '_ {
        self.curves.iter().zip(self.labels.iter().copied())
    }

    pub fn class(&self, label: Label) -> impl Iterator<Item = &Curve> + '_ {
        self.iter().filter(move |(_, l)| *l == label).map(|(c, _)| c)
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Resolved `p = P(Y = 0)`.
    pub fn prior_p(&self) -> f64 {
        match self.prior {
            Prior::Known(p) => p,
            Prior::FromCounts => self.count(Label::Zero) as f64 / self.len() as f64,
        }
    }

    /// Errors unless both labels occur; training needs both.
    pub fn require_both_classes(&self) -> Result<()> {
        for label in [Label::Zero, Label::One] {
            if self.count(label) == 0 {
                return Err(Error::InsufficientData(alloc::format!("training sample has no curve of class {label}")));
            }
        }
        Ok(())
    }

    /// The sample with observation `i` removed (leave-one-out).
    pub fn without(&self, i: usize) -> Result<Self> {
        let mut curves = self.curves.clone();
        let mut labels = self.labels.clone();
        curves.remove(i);
        labels.remove(i);
        Self::new(curves, labels, self.prior)
    }

    /// Same curves with new labels.
    pub fn relabel(&self, labels: Vec<Label>) -> Result<Self> {
        Self::new(self.curves.clone(), labels, self.prior)
    }

    /// Concatenates two samples on one grid, keeping the prior of `self`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut curves = self.curves.clone();
        curves.extend_from_slice(&other.curves);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Self::new(curves, labels, self.prior)
    }
}

/// Trapezoidal approximation of `∫₀¹ f(t) dt` from values on the grid.
pub fn trapezoid(values: &[f64], grid: Grid) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(structural!("{} values for a grid of {} points", values.len(), grid.len()));
    }
    Ok(trapezoid_from(values, grid.delta(), 0))
}

/// Trapezoidal rule over `[t_start, 1]`.
pub(crate) fn trapezoid_from(values: &[f64], delta: f64, start: usize) -> f64 {
    let tail = &values[start..];
    match tail.len() {
        0 | 1 => 0.0,
        len => {
            let inner: f64 = tail[1..len - 1].iter().sum();
            delta * (inner + 0.5 * (tail[0] + tail[len - 1]))
        }
    }
}

/// `max_j |a(t_j) − b(t_j)|`.
pub fn sup_distance(a: &Curve, b: &Curve) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(structural!("sup distance between curves on different grids"));
    }
    Ok(sup_distance_slices(a.values(), b.values()))
}

pub(crate) fn sup_distance_slices(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}
