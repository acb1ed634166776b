//! k-nearest-neighbour rules on curves, under the sup norm or the Euclidean
//! distance between PLS scores, with leave-one-out selection of `k` and of
//! the number of PLS directions.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{structural, Error, Result};
use crate::grid::{sup_distance_slices, Curve, Label, LabeledSample};
use crate::Classifier;

/// PLS1 directions fitted by NIPALS on centred curves and 0/1 labels.
#[derive(Clone, Debug, PartialEq)]
pub struct PlsProjection {
    mean: Vec<f64>,
    weights: Vec<Vec<f64>>,
    loadings: Vec<Vec<f64>>,
}

impl PlsProjection {
    pub fn directions(&self) -> usize {
        self.weights.len()
    }

    /// Unit weight vector of direction `a`.
    pub fn weight(&self, a: usize) -> &[f64] {
        &self.weights[a]
    }

    /// Scores of `x` on the fitted directions, by the same deflation that
    /// produced them.
    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        self.weights
            .iter()
            .zip(&self.loadings)
            .map(|(w, p)| {
                let t = dot(&r, w);
                r.iter_mut().zip(p).for_each(|(ri, pi)| *ri -= t * pi);
                t
            })
            .collect()
    }

    /// The projection keeping only the first `d` directions.
    pub fn truncated(&self, d: usize) -> Self {
        let d = d.min(self.directions());
        Self { mean: self.mean.clone(), weights: self.weights[..d].to_vec(), loadings: self.loadings[..d].to_vec() }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Semimetric {
    SupNorm,
    Pls(PlsProjection),
}

impl Semimetric {
    pub fn distance(&self, a: &Curve, b: &Curve) -> f64 {
        match self {
            Self::SupNorm => sup_distance_slices(a.values(), b.values()),
            Self::Pls(pls) => euclidean(&pls.scores(a.values()), &pls.scores(b.values())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KnnConfig {
    pub k: usize,
    pub semimetric: Semimetric,
}

/// Outcome of a PLS fit; `fitted < requested` when deflation degenerated.
#[derive(Clone, Debug, PartialEq)]
pub struct PlsFit {
    pub projection: PlsProjection,
    pub requested: usize,
}

impl PlsFit {
    pub fn fitted(&self) -> usize {
        self.projection.directions()
    }

    pub fn semimetric(&self) -> Semimetric {
        Semimetric::Pls(self.projection.clone())
    }
}

fn nipals<'a>(rows: impl Iterator<Item = (&'a [f64], f64)>, directions: usize) -> Result<PlsProjection> {
    let (mut x, mut y): (Vec<Vec<f64>>, Vec<f64>) = rows.map(|(r, l)| (r.to_vec(), l)).unzip();
    let n = x.len();
    let p = x[0].len();
    let mut mean = vec![0.0; p];
    for row in &x {
        mean.iter_mut().zip(row).for_each(|(m, v)| *m += v);
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let ybar = y.iter().sum::<f64>() / n as f64;
    for row in x.iter_mut() {
        row.iter_mut().zip(&mean).for_each(|(v, m)| *v -= m);
    }
    y.iter_mut().for_each(|v| *v -= ybar);

    let x_norm = libm::sqrt(x.iter().map(|r| dot(r, r)).sum());
    let tol = 1e-12 * x_norm * libm::sqrt(dot(&y, &y));

    let mut weights = Vec::new();
    let mut loadings = Vec::new();
    for _ in 0..directions {
        let mut w = vec![0.0; p];
        for (row, yi) in x.iter().zip(&y) {
            w.iter_mut().zip(row).for_each(|(wj, xj)| *wj += yi * xj);
        }
        let w_norm = libm::sqrt(dot(&w, &w));
        if w_norm <= tol {
            break;
        }
        w.iter_mut().for_each(|v| *v /= w_norm);
        let t: Vec<f64> = x.iter().map(|row| dot(row, &w)).collect();
        let tt = dot(&t, &t);
        if tt <= 1e-24 * x_norm * x_norm || tt == 0.0 {
            break;
        }
        let mut load = vec![0.0; p];
        for (row, ti) in x.iter().zip(&t) {
            load.iter_mut().zip(row).for_each(|(lj, xj)| *lj += ti * xj);
        }
        load.iter_mut().for_each(|v| *v /= tt);
        let q = dot(&y, &t) / tt;
        for (row, ti) in x.iter_mut().zip(&t) {
            row.iter_mut().zip(&load).for_each(|(v, l)| *v -= ti * l);
        }
        y.iter_mut().zip(&t).for_each(|(v, ti)| *v -= q * ti);
        weights.push(w);
        loadings.push(load);
    }
    if weights.is_empty() {
        return Err(Error::Degenerate("no PLS direction: labels or curves carry no covariance".into()));
    }
    Ok(PlsProjection { mean, weights, loadings })
}

/// Fits `directions` PLS1 directions with label values 0 and 1 as response.
pub fn fit_pls_semimetric(train: &LabeledSample, directions: usize) -> Result<PlsFit> {
    let limit = (train.len() - 1).min(train.grid().len());
    if directions == 0 || directions > limit {
        return Err(structural!("{directions} PLS directions requested, allowed 1..={limit}"));
    }
    let rows = train.iter().map(|(c, l)| (c.values(), l.index() as f64));
    Ok(PlsFit { projection: nipals(rows, directions)?, requested: directions })
}

/// Majority vote of the first `k` labels of `ranked`; a tie goes to 0.
fn vote(ranked: impl Iterator<Item = Label>, k: usize) -> Label {
    let ones = ranked.take(k).filter(|&l| l == Label::One).count();
    Label::from(2 * ones > k)
}

/// Training indices sorted by distance, ties by index.
fn rank(distances: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..distances.len()).collect();
    order.sort_by(|&a, &b| distances[a].total_cmp(&distances[b]));
    order
}

fn validate_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(structural!("k = {k} must lie in 1..={n}"));
    }
    Ok(())
}

/// A fitted k-NN rule; PLS scores of the training curves are cached.
#[derive(Clone, Debug, PartialEq)]
pub struct KnnClassifier {
    train: LabeledSample,
    config: KnnConfig,
    train_scores: Vec<Vec<f64>>,
}

impl KnnClassifier {
    pub fn new(train: LabeledSample, config: KnnConfig) -> Result<Self> {
        validate_k(config.k, train.len())?;
        let train_scores = match &config.semimetric {
            Semimetric::SupNorm => Vec::new(),
            Semimetric::Pls(pls) => train.curves().iter().map(|c| pls.scores(c.values())).collect(),
        };
        Ok(Self { train, config, train_scores })
    }

    pub fn config(&self) -> &KnnConfig {
        &self.config
    }

    fn distances(&self, x: &Curve) -> Vec<f64> {
        match &self.config.semimetric {
            Semimetric::SupNorm => {
                self.train.curves().iter().map(|c| sup_distance_slices(c.values(), x.values())).collect()
            }
            Semimetric::Pls(pls) => {
                let s = pls.scores(x.values());
                self.train_scores.iter().map(|t| euclidean(t, &s)).collect()
            }
        }
    }
}

impl Classifier for KnnClassifier {
    fn classify(&self, x: &Curve) -> Label {
        let labels = self.train.labels();
        vote(rank(&self.distances(x)).into_iter().map(|i| labels[i]), self.config.k)
    }
}

/// One k-NN decision; prefer [`KnnClassifier`] for repeated queries.
pub fn knn_classify(train: &LabeledSample, config: &KnnConfig, x: &Curve) -> Result<Label> {
    validate_k(config.k, train.len())?;
    let distances: Vec<f64> = train.curves().iter().map(|c| config.semimetric.distance(c, x)).collect();
    let labels = train.labels();
    Ok(vote(rank(&distances).into_iter().map(|i| labels[i]), config.k))
}

/// Result of k-NN model selection.
#[derive(Clone, Debug, PartialEq)]
pub struct KnnSelection {
    pub k: usize,
    /// Selected PLS directions; `None` for the sup norm.
    pub directions: Option<usize>,
    pub loo_error: f64,
    /// `(k, directions, error)` for every candidate.
    pub table: Vec<(usize, Option<usize>, f64)>,
}

/// LOO errors of every `k` given, for each left-out `i`, the ranked labels
/// of the other observations.
fn loo_errors_for_ks(rankings: &[Vec<Label>], truth: &[Label], ks: &[usize]) -> Vec<f64> {
    ks.iter()
        .map(|&k| {
            let wrong = rankings.iter().zip(truth).filter(|(ranked, &y)| vote(ranked.iter().copied(), k) != y).count();
            wrong as f64 / truth.len() as f64
        })
        .collect()
}

/// Leave-one-out rankings under the sup norm.
fn sup_rankings(train: &LabeledSample) -> Vec<Vec<Label>> {
    let curves = train.curves();
    let labels = train.labels();
    let n = curves.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = sup_distance_slices(curves[i].values(), curves[j].values());
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    (0..n)
        .map(|i| {
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let row: Vec<f64> = others.iter().map(|&j| dist[i * n + j]).collect();
            rank(&row).into_iter().map(|r| labels[others[r]]).collect()
        })
        .collect()
}

/// Leave-one-out rankings under PLS with `d` directions, for every `d` in
/// `ds`. PLS is refitted without the left-out curve; a fold whose fit
/// degenerates ranks nobody and so votes 0.
fn pls_rankings(train: &LabeledSample, ds: &[usize]) -> Vec<Vec<Vec<Label>>> {
    let curves = train.curves();
    let labels = train.labels();
    let n = curves.len();
    let d_max = ds.iter().copied().max().unwrap_or(1);
    let mut per_d: Vec<Vec<Vec<Label>>> = vec![Vec::with_capacity(n); ds.len()];
    for i in 0..n {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let rows = others.iter().map(|&j| (curves[j].values(), labels[j].index() as f64));
        let Ok(pls) = nipals(rows, d_max) else {
            per_d.iter_mut().for_each(|v| v.push(Vec::new()));
            continue;
        };
        let scores: Vec<Vec<f64>> = others.iter().map(|&j| pls.scores(curves[j].values())).collect();
        let query = pls.scores(curves[i].values());
        for (slot, &d) in per_d.iter_mut().zip(ds) {
            let d = d.min(pls.directions());
            let row: Vec<f64> = scores.iter().map(|s| euclidean(&s[..d], &query[..d])).collect();
            slot.push(rank(&row).into_iter().map(|r| labels[others[r]]).collect());
        }
    }
    per_d
}

/// Selects `k` (and the PLS dimension when `pls_directions` is given) by
/// leave-one-out error; ties go to the smaller `k`, then the smaller `d`.
pub fn select_knn_cv(train: &LabeledSample, ks: &[usize], pls_directions: Option<&[usize]>) -> Result<KnnSelection> {
    if ks.is_empty() || pls_directions.is_some_and(|d| d.is_empty()) {
        return Err(Error::Selection("empty candidate set".into()));
    }
    for &k in ks {
        validate_k(k, train.len() - 1)?;
    }
    let truth = train.labels();
    let mut table = Vec::new();
    match pls_directions {
        None => {
            let errors = loo_errors_for_ks(&sup_rankings(train), truth, ks);
            table.extend(ks.iter().zip(errors).map(|(&k, e)| (k, None, e)));
        }
        Some(ds) => {
            let limit = (train.len() - 2).min(train.grid().len());
            if let Some(&d) = ds.iter().find(|&&d| d == 0 || d > limit) {
                return Err(structural!("{d} PLS directions requested, allowed 1..={limit}"));
            }
            for (rankings, &d) in pls_rankings(train, ds).iter().zip(ds) {
                let errors = loo_errors_for_ks(rankings, truth, ks);
                table.extend(ks.iter().zip(errors).map(|(&k, e)| (k, Some(d), e)));
            }
        }
    }
    let &(k, directions, loo_error) = table
        .iter()
        .min_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)))
        .expect("nonempty table");
    Ok(KnnSelection { k, directions, loo_error, table })
}

/// Runs the selection and fits the chosen rule on the whole sample.
pub fn fit_knn_cv(
    train: &LabeledSample,
    ks: &[usize],
    pls_directions: Option<&[usize]>,
) -> Result<(KnnClassifier, KnnSelection)> {
    let selection = select_knn_cv(train, ks, pls_directions)?;
    let semimetric = match selection.directions {
        None => Semimetric::SupNorm,
        Some(d) => fit_pls_semimetric(train, d)?.semimetric(),
    };
    let rule = KnnClassifier::new(train.clone(), KnnConfig { k: selection.k, semimetric })?;
    Ok((rule, selection))
}
