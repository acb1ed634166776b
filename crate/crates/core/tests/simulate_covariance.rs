mod common;

use common::{brownian, ou};
use funcgauss_core::simulate::{sample_labeled, GaussianModel, OuStart, RngSeed};
use funcgauss_core::{Grid, Prior};
use rand::{Rng, SeedableRng};

const PATHS: usize = 10_000;

/// Empirical covariance at `(s, t)` and its standard error.
fn cov_with_se(paths: &[Vec<f64>], s: usize, t: usize) -> (f64, f64) {
    let n = paths.len() as f64;
    let ms = paths.iter().map(|p| p[s]).sum::<f64>() / n;
    let mt = paths.iter().map(|p| p[t]).sum::<f64>() / n;
    let prods: Vec<f64> = paths.iter().map(|p| (p[s] - ms) * (p[t] - mt)).collect();
    let mean = prods.iter().sum::<f64>() / n;
    let var = prods.iter().map(|q| (q - mean) * (q - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn check(model: &GaussianModel, truth: impl Fn(f64, f64) -> f64, seed: u64) {
    let grid = Grid::uniform(50).unwrap();
    let mut rng = RngSeed::new(seed).rng();
    let paths: Vec<Vec<f64>> = (0..PATHS).map(|_| model.sample(grid, &mut rng).into_values()).collect();
    let mut pick = rand_chacha::ChaCha8Rng::seed_from_u64(seed + 1);
    for _ in 0..10 {
        let (i, j) = (pick.random_range(0..=50usize), pick.random_range(0..=50usize));
        let (c, se) = cov_with_se(&paths, i, j);
        let expected = truth(grid.t(i), grid.t(j));
        assert!((c - expected).abs() <= 5.0 * se.max(1e-12), "{model:?} at ({i},{j}): {c} vs {expected} (se {se})");
    }
}

#[test]
fn brownian_covariance() {
    let (sigma, theta) = (1.3f64, 0.7f64);
    check(&brownian(1.5, sigma, theta, true), |s, t| theta * theta + sigma * sigma * s.min(t), 1);
}

#[test]
fn ou_stationary_covariance() {
    let (beta, sigma) = (0.8f64, 1.4f64);
    check(&ou(beta, 0.5, sigma, OuStart::Stationary), |s, t| sigma * sigma * (-beta * (s - t).abs()).exp(), 2);
}

#[test]
fn ou_deterministic_covariance() {
    let (beta, sigma) = (1.0f64, 1.0f64);
    check(
        &ou(beta, 1.0, sigma, OuStart::Deterministic(0.0)),
        |s, t| sigma * sigma * ((-beta * (s - t).abs()).exp() - (-beta * (s + t)).exp()),
        3,
    );
}

#[test]
fn fixed_seed_is_bitwise_reproducible() {
    let grid = Grid::uniform(50).unwrap();
    let m0 = ou(0.5, 0.0, 2.0, OuStart::Stationary);
    let m1 = ou(1.0, 2.0, 2f64.sqrt(), OuStart::Stationary);
    let a = sample_labeled(&m0, &m1, 20, 20, Prior::Known(0.5), grid, RngSeed::new(9).with_stream(4)).unwrap();
    let b = sample_labeled(&m0, &m1, 20, 20, Prior::Known(0.5), grid, RngSeed::new(9).with_stream(4)).unwrap();
    let bits = |s: &funcgauss_core::LabeledSample| -> Vec<u64> {
        s.curves().iter().flat_map(|c| c.values().iter().map(|v| v.to_bits())).collect()
    };
    assert_eq!(bits(&a), bits(&b));
    let c = sample_labeled(&m0, &m1, 20, 20, Prior::Known(0.5), grid, RngSeed::new(9).with_stream(5)).unwrap();
    assert_ne!(bits(&a), bits(&c));
}
