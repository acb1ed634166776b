//! Classification of functional data drawn from Gaussian processes with
//! triangular covariance functions `Γ(s,t) = u(min(s,t))·v(max(s,t))`.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerical
//! core:
//!
//! - [`grid`]: uniform grids on `[0,1]`, curves, labeled samples, quadrature.
//! - [`simulate`]: exact-in-distribution sampling of Brownian motions with
//!   drift and Ornstein–Uhlenbeck processes.
//! - [`rn`]: log Radon–Nikodym derivatives between triangular Gaussian
//!   measures, the regression function `η` and the Bayes decision.
//! - [`parametric`]: closed-form Bayes rules for the Brownian and OU pairs and
//!   their parametric plug-in versions.
//! - [`nonparam`]: finite-difference mean/covariance estimators and the
//!   nonparametric plug-in rule.
//! - [`knn`]: k-nearest-neighbour rules under the sup norm and a PLS
//!   semimetric.
//!
//! IO, configuration and the Monte Carlo harness live in the `funcgauss`
//! crate.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod grid;
pub mod knn;
pub mod nonparam;
pub mod parametric;
pub mod rn;
pub mod simulate;

pub use error::{Error, Result};
pub use grid::{sup_distance, trapezoid, Curve, Grid, Label, LabeledSample, Prior};

/// A trained binary classifier on curves.
pub trait Classifier {
    fn classify(&self, x: &Curve) -> Label;

    /// Proportion of correctly classified curves of `sample`.
    fn accuracy(&self, sample: &LabeledSample) -> f64 {
        let hits = sample.iter().filter(|(curve, label)| self.classify(curve) == *label).count();
        hits as f64 / sample.len() as f64
    }
}

impl<C: Classifier + ?Sized> Classifier for &C {
    fn classify(&self, x: &Curve) -> Label {
        (**self).classify(x)
    }
}

impl<C: Classifier + ?Sized> Classifier for alloc::boxed::Box<C> {
    fn classify(&self, x: &Curve) -> Label {
        (**self).classify(x)
    }
}
