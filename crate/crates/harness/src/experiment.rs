//! Monte Carlo runs: fresh train/test samples per run, hyperparameters chosen
//! on the training sample, accuracy measured on the test sample.

use funcgauss_core::knn::fit_knn_cv;
use funcgauss_core::nonparam::{nonparam_plugin_classifier, select_h_cv, SmoothingParams};
use funcgauss_core::parametric::{parametric_plugin_classifier, ClosedFormRule, ParametricPlugin};
use funcgauss_core::rn::{self, LogRnEvaluator};
use funcgauss_core::simulate::{sample_labeled, RngSeed};
use funcgauss_core::{parametric, Classifier, Curve, LabeledSample, Prior};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::{ClassifierKind, ExperimentConfig};
use crate::Result;

/// Bayes rule through the general chain, for pairs without a closed form.
struct ChainRule {
    evaluator: LogRnEvaluator,
    p: f64,
}

impl Classifier for ChainRule {
    fn classify(&self, x: &Curve) -> funcgauss_core::Label {
        let log_rn = self.evaluator.log_rn(x).expect("test curves share the evaluator grid");
        rn::classify(log_rn, self.p)
    }
}

type Rule = Box<dyn Classifier + Send + Sync>;

/// The Bayes rule of the configured model pair.
pub fn bayes_rule(cfg: &ExperimentConfig) -> Result<Rule> {
    let (m0, m1) = (cfg.model0.model(), cfg.model1.model());
    Ok(match ClosedFormRule::for_models(&m0, &m1) {
        Ok(rule) => Box::new(ParametricPlugin { rule, p: cfg.prior }),
        Err(_) => {
            Box::new(ChainRule { evaluator: parametric::chain_bayes_evaluator(&m0, &m1, cfg.grid()?)?, p: cfg.prior })
        }
    })
}

/// Trains one roster entry; also returns the selected hyperparameters.
pub fn train_classifier(
    kind: ClassifierKind,
    cfg: &ExperimentConfig,
    train: &LabeledSample,
) -> Result<(Rule, Option<String>)> {
    let cv = &cfg.cv;
    Ok(match kind {
        ClassifierKind::Bayes => (bayes_rule(cfg)?, None),
        ClassifierKind::ParamPlugin => {
            let rule = parametric_plugin_classifier(train, cfg.model0.family(), cfg.model0.start_kind())?;
            (Box::new(rule), None)
        }
        ClassifierKind::NonparamPlugin => {
            let grid = train.grid();
            let sel = select_h_cv(train, &cv.h_candidates(grid), None)?;
            let rule = nonparam_plugin_classifier(train, SmoothingParams::new(sel.h), None)?;
            let steps = grid.steps_of(sel.h).unwrap_or_default();
            (Box::new(rule), Some(format!("h={steps}d")))
        }
        ClassifierKind::KnnSup => {
            let (rule, sel) = fit_knn_cv(train, &cv.ks(), None)?;
            (Box::new(rule), Some(format!("k={}", sel.k)))
        }
        ClassifierKind::KnnPls => {
            let (rule, sel) = fit_knn_cv(train, &cv.ks(), Some(&cv.pls_directions()))?;
            (Box::new(rule), Some(format!("k={} d={}", sel.k, sel.directions.unwrap_or_default())))
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierOutcome {
    pub accuracy: Option<f64>,
    pub error: Option<String>,
    pub selected: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    /// In roster order.
    pub outcomes: Vec<ClassifierOutcome>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierSummary {
    pub classifier: String,
    pub mean: f64,
    pub sd: f64,
    pub runs_ok: usize,
    pub runs_failed: usize,
}

impl ClassifierSummary {
    /// Mean and sample SD of the accuracies of the successful runs.
    pub fn from_accuracies(classifier: &str, accuracies: &[f64], runs_failed: usize) -> Self {
        let n = accuracies.len();
        let mean = if n == 0 { f64::NAN } else { accuracies.iter().sum::<f64>() / n as f64 };
        let sd = if n < 2 {
            0.0
        } else {
            (accuracies.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Self { classifier: classifier.to_string(), mean, sd, runs_ok: n, runs_failed }
    }

    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        self.sd / (self.runs_ok as f64).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub scenario: String,
    pub seed: u64,
    /// SHA-256 of the canonical configuration text.
    pub config_hash: String,
    pub code_version: String,
    pub summaries: Vec<ClassifierSummary>,
    pub runs: Vec<RunRecord>,
}

impl ExperimentReport {
    pub fn summary(&self, classifier: &str) -> Option<&ClassifierSummary> {
        self.summaries.iter().find(|s| s.classifier == classifier)
    }

    pub(crate) fn assemble(scenario: &str, seed: u64, config_text: &str, names: &[&str], runs: Vec<RunRecord>) -> Self {
        let summaries = names
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let accs: Vec<f64> = runs.iter().filter_map(|r| r.outcomes[i].accuracy).collect();
                ClassifierSummary::from_accuracies(name, &accs, runs.len() - accs.len())
            })
            .collect();
        Self {
            scenario: scenario.to_string(),
            seed,
            config_hash: hex::encode(Sha256::digest(config_text.as_bytes())),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            summaries,
            runs,
        }
    }
}

/// Train and test samples of run `run`, on their own random streams.
pub fn draw_run(cfg: &ExperimentConfig, run: usize) -> Result<(LabeledSample, LabeledSample)> {
    let grid = cfg.grid()?;
    let (m0, m1) = (cfg.model0.model(), cfg.model1.model());
    let seed = RngSeed::new(cfg.seed);
    let prior = Prior::Known(cfg.prior);
    let train = sample_labeled(&m0, &m1, cfg.n_train, cfg.n_train, prior, grid, seed.with_stream(2 * run as u64))?;
    let test = sample_labeled(&m0, &m1, cfg.n_test, cfg.n_test, prior, grid, seed.with_stream(2 * run as u64 + 1))?;
    Ok((train, test))
}

/// Fits every roster entry on `train` and scores it on `test`.
pub fn evaluate_run(cfg: &ExperimentConfig, run: usize, train: &LabeledSample, test: &LabeledSample) -> RunRecord {
    let outcomes = cfg
        .roster
        .iter()
        .map(|&kind| match train_classifier(kind, cfg, train) {
            Ok((rule, selected)) => ClassifierOutcome { accuracy: Some(rule.accuracy(test)), error: None, selected },
            Err(e) => ClassifierOutcome { accuracy: None, error: Some(e.to_string()), selected: None },
        })
        .collect();
    RunRecord { run, outcomes }
}

fn failed_run(cfg: &ExperimentConfig, run: usize, message: String) -> RunRecord {
    let outcome = ClassifierOutcome { accuracy: None, error: Some(message), selected: None };
    RunRecord { run, outcomes: vec![outcome; cfg.roster.len()] }
}

/// Runs all Monte Carlo replications in parallel. The report depends only on
/// the configuration.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let runs: Vec<RunRecord> = (0..cfg.runs)
        .into_par_iter()
        .map(|r| match draw_run(cfg, r) {
            Ok((train, test)) => evaluate_run(cfg, r, &train, &test),
            Err(e) => failed_run(cfg, r, e.to_string()),
        })
        .collect();
    let names: Vec<&str> = cfg.roster.iter().map(|k| k.name()).collect();
    Ok(ExperimentReport::assemble(&cfg.scenario, cfg.seed, &cfg.to_toml(), &names, runs))
}
