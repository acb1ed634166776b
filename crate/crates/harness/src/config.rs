//! Experiment configuration, read from TOML.

use std::path::Path;

use funcgauss_core::parametric::{check_equivalence, Family, StartKind};
use funcgauss_core::simulate::{BrownianModel, GaussianModel, OuModel, OuStart};
use funcgauss_core::Grid;
use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartConfig {
    Deterministic,
    Stationary,
}

/// One class distribution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Brownian {
        c: f64,
        sigma: f64,
        #[serde(default)]
        theta: f64,
        /// Whether the mean is `ct` (true) or zero.
        drift: bool,
    },
    Ou {
        beta: f64,
        eta: f64,
        sigma: f64,
        start: StartConfig,
        #[serde(default)]
        c0: f64,
    },
}

impl ModelConfig {
    pub fn model(&self) -> GaussianModel {
        match *self {
            Self::Brownian { c, sigma, theta, drift } => {
                GaussianModel::Brownian { model: BrownianModel { c, sigma, theta }, with_drift: drift }
            }
            Self::Ou { beta, eta, sigma, start, c0 } => GaussianModel::Ou(OuModel {
                beta,
                eta,
                sigma,
                start: match start {
                    StartConfig::Deterministic => OuStart::Deterministic(c0),
                    StartConfig::Stationary => OuStart::Stationary,
                },
            }),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Self::Brownian { .. } => Family::Brownian,
            Self::Ou { .. } => Family::OrnsteinUhlenbeck,
        }
    }

    pub fn start_kind(&self) -> StartKind {
        match *self {
            Self::Brownian { theta, .. } if theta > 0.0 => StartKind::Random,
            Self::Brownian { .. } => StartKind::Deterministic,
            Self::Ou { start: StartConfig::Stationary, .. } => StartKind::Random,
            Self::Ou { .. } => StartKind::Deterministic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifierKind {
    Bayes,
    ParamPlugin,
    NonparamPlugin,
    KnnSup,
    KnnPls,
}

impl ClassifierKind {
    pub const ALL: [Self; 5] = [Self::Bayes, Self::ParamPlugin, Self::NonparamPlugin, Self::KnnSup, Self::KnnPls];

    pub fn name(self) -> &'static str {
        match self {
            Self::Bayes => "bayes",
            Self::ParamPlugin => "param-plugin",
            Self::NonparamPlugin => "nonparam-plugin",
            Self::KnnSup => "knn-sup",
            Self::KnnPls => "knn-pls",
        }
    }
}

impl std::str::FromStr for ClassifierKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown classifier `{s}`")))
    }
}

/// Cross-validation grids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvConfig {
    /// Bandwidth candidates in grid steps.
    #[serde(default = "default_h_steps")]
    pub h_steps: Vec<usize>,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_pls_max")]
    pub pls_max: usize,
}

fn default_h_steps() -> Vec<usize> {
    (1..=10).map(|i| 2 * i).collect()
}

fn default_k_max() -> usize {
    10
}

fn default_pls_max() -> usize {
    5
}

impl Default for CvConfig {
    fn default() -> Self {
        Self { h_steps: default_h_steps(), k_max: default_k_max(), pls_max: default_pls_max() }
    }
}

impl CvConfig {
    pub fn h_candidates(&self, grid: Grid) -> Vec<f64> {
        self.h_steps.iter().map(|&k| k as f64 * grid.delta()).collect()
    }

    pub fn ks(&self) -> Vec<usize> {
        (1..=self.k_max).collect()
    }

    pub fn pls_directions(&self) -> Vec<usize> {
        (1..=self.pls_max).collect()
    }
}

fn default_prior() -> f64 {
    0.5
}

fn default_roster() -> Vec<ClassifierKind> {
    ClassifierKind::ALL.to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub model0: ModelConfig,
    pub model1: ModelConfig,
    /// Training curves per class.
    pub n_train: usize,
    /// Test curves per class.
    pub n_test: usize,
    /// Number of grid intervals `N`.
    pub intervals: usize,
    pub runs: usize,
    pub seed: u64,
    /// Known `P(Y = 0)`.
    #[serde(default = "default_prior")]
    pub prior: f64,
    #[serde(default = "default_roster")]
    pub roster: Vec<ClassifierKind>,
    #[serde(default)]
    pub cv: CvConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    pub fn grid(&self) -> Result<Grid> {
        Ok(Grid::uniform(self.intervals)?)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.runs == 0 {
            return fail("runs must be at least 1".into());
        }
        if self.roster.is_empty() {
            return fail("the classifier roster is empty".into());
        }
        if self.n_train < 2 || self.n_test < 1 {
            return fail(format!("need n_train >= 2 and n_test >= 1, got {} and {}", self.n_train, self.n_test));
        }
        if !(self.prior > 0.0 && self.prior < 1.0) {
            return fail(format!("prior {} is not in (0,1)", self.prior));
        }
        let grid = self.grid()?;
        check_equivalence(&self.model0.model(), &self.model1.model())?;
        if self.roster.contains(&ClassifierKind::NonparamPlugin) {
            if self.cv.h_steps.is_empty() {
                return fail("no bandwidth candidates".into());
            }
            if let Some(&k) = self.cv.h_steps.iter().find(|&&k| k == 0 || 2 * k >= grid.intervals()) {
                return fail(format!("bandwidth of {k} steps is outside [Δ, 1/2)"));
            }
        }
        let needs_knn = self.roster.iter().any(|k| matches!(k, ClassifierKind::KnnSup | ClassifierKind::KnnPls));
        if needs_knn && (self.cv.k_max == 0 || self.cv.k_max >= 2 * self.n_train) {
            return fail(format!("k_max = {} must lie in 1..{}", self.cv.k_max, 2 * self.n_train));
        }
        if self.roster.contains(&ClassifierKind::KnnPls) && self.cv.pls_max == 0 {
            return fail("pls_max must be at least 1".into());
        }
        Ok(())
    }
}

/// Built-in simulation scenarios.
pub const SCENARIOS: [&str; 9] = [
    "brownian-det-1",
    "brownian-det-2",
    "brownian-det-3",
    "brownian-random-1",
    "brownian-random-2",
    "ou-det-1",
    "ou-det-2",
    "ou-random-1",
    "ou-random-2",
];

fn brownian(c: f64, sigma: f64, theta: f64) -> (ModelConfig, ModelConfig) {
    (ModelConfig::Brownian { c, sigma, theta, drift: true }, ModelConfig::Brownian { c, sigma, theta, drift: false })
}

/// Class 1 noise level is set so that `β₀σ₀² = β₁σ₁²`.
fn ou(
    start: StartConfig,
    (beta0, eta0, sigma0): (f64, f64, f64),
    (beta1, eta1): (f64, f64),
) -> (ModelConfig, ModelConfig) {
    let sigma1 = (beta0 * sigma0 * sigma0 / beta1).sqrt();
    (
        ModelConfig::Ou { beta: beta0, eta: eta0, sigma: sigma0, start, c0: 0.0 },
        ModelConfig::Ou { beta: beta1, eta: eta1, sigma: sigma1, start, c0: 0.0 },
    )
}

/// The model pair of a built-in scenario.
pub fn scenario_models(id: &str) -> Option<(ModelConfig, ModelConfig)> {
    use StartConfig::*;
    Some(match id {
        "brownian-det-1" => brownian(1.5, 1.0, 0.0),
        "brownian-det-2" => brownian(3.0, 1.0, 0.0),
        "brownian-det-3" => brownian(2.0, 2.0, 0.0),
        "brownian-random-1" => brownian(1.5, 1.0, 1.0),
        "brownian-random-2" => brownian(1.5, 1.0, 0.5),
        "ou-det-1" => ou(Deterministic, (1.0, 0.0, 1.0), (1.0, 1.0)),
        "ou-det-2" => ou(Deterministic, (0.4, 0.0, 0.4), (1.0, 1.0)),
        "ou-random-1" => ou(Stationary, (0.5, 0.0, 1.0), (1.0, 0.5)),
        "ou-random-2" => ou(Stationary, (0.5, 0.0, 2.0), (1.0, 2.0)),
        _ => return None,
    })
}

/// A built-in scenario with 100 training and 50 test curves per class on a
/// 50-interval grid.
pub fn scenario(id: &str, runs: usize, seed: u64) -> Result<ExperimentConfig> {
    let (model0, model1) =
        scenario_models(id).ok_or_else(|| HarnessError::Config(format!("unknown scenario `{id}`")))?;
    let cfg = ExperimentConfig {
        scenario: id.to_string(),
        model0,
        model1,
        n_train: 100,
        n_test: 50,
        intervals: 50,
        runs,
        seed,
        prior: 0.5,
        roster: default_roster(),
        cv: CvConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scenario_validates() {
        for id in SCENARIOS {
            scenario(id, 1, 0).unwrap();
        }
        assert!(scenario("nope", 1, 0).is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = scenario("ou-random-2", 7, 99).unwrap();
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn minimal_toml() {
        let text = r#"
            scenario = "custom"
            n_train = 20
            n_test = 10
            intervals = 20
            runs = 3
            seed = 1
            roster = ["bayes", "knn-sup"]

            [model0]
            family = "brownian"
            c = 1.5
            sigma = 1.0
            drift = true

            [model1]
            family = "brownian"
            c = 1.5
            sigma = 1.0
            drift = false
        "#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.cv, CvConfig::default());
        assert_eq!(cfg.prior, 0.5);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = scenario("brownian-det-1", 1, 0).unwrap();
        cfg.runs = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = scenario("brownian-det-1", 1, 0).unwrap();
        cfg.roster.clear();
        assert!(cfg.validate().is_err());
        let mut cfg = scenario("ou-det-1", 1, 0).unwrap();
        if let ModelConfig::Ou { sigma, .. } = &mut cfg.model1 {
            *sigma = 2.0;
        }
        assert!(cfg.validate().is_err());
        let mut cfg = scenario("brownian-det-2", 1, 0).unwrap();
        if let ModelConfig::Brownian { sigma, .. } = &mut cfg.model1 {
            *sigma = 2.0;
        }
        assert!(cfg.validate().is_err());
    }
}
