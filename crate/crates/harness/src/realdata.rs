//! Leave-one-out evaluation of the data-driven classifiers on a curve CSV.

use std::path::PathBuf;
use std::str::FromStr;

use funcgauss_core::knn::select_knn_cv;
use funcgauss_core::nonparam::{loo_error, select_h_cv, SmoothingParams};
use funcgauss_core::{Error, Prior};

use crate::config::{ClassifierKind, CvConfig};
use crate::experiment::{ClassifierOutcome, ExperimentReport, RunRecord};
use crate::io::{read_curve_csv, CurveTable};
use crate::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Transform {
    Identity,
    /// `x ↦ log(x − offset)`.
    LogOffset(f64),
}

impl FromStr for Transform {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "identity" {
            return Ok(Self::Identity);
        }
        s.strip_prefix("log-offset:").and_then(|o| o.parse().ok()).map(Self::LogOffset).ok_or_else(|| {
            HarnessError::Config(format!("transform `{s}` is neither `identity` nor `log-offset:<value>`"))
        })
    }
}

/// Leading columns to drop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Trim {
    Count(usize),
    /// Converted to a count with the sampling interval.
    Minutes(f64),
}

impl FromStr for Trim {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HarnessError::Config(format!("trim `{s}` is neither a count nor `<minutes>min`"));
        match s.strip_suffix("min") {
            Some(m) => m.parse().ok().filter(|m: &f64| *m >= 0.0).map(Self::Minutes).ok_or_else(bad),
            None => s.parse().map(Self::Count).map_err(|_| bad()),
        }
    }
}

impl Trim {
    pub fn columns(self, sampling_seconds: f64) -> usize {
        match self {
            Self::Count(n) => n,
            Self::Minutes(m) => (m * 60.0 / sampling_seconds).round() as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealDataConfig {
    pub input: PathBuf,
    pub transform: Transform,
    pub trim: Trim,
    pub sampling_seconds: f64,
    pub roster: Vec<ClassifierKind>,
    pub cv: CvConfig,
}

impl RealDataConfig {
    pub fn new(input: PathBuf) -> Self {
        Self {
            input,
            transform: Transform::Identity,
            trim: Trim::Count(0),
            sampling_seconds: 10.0,
            roster: vec![ClassifierKind::KnnSup, ClassifierKind::KnnPls, ClassifierKind::NonparamPlugin],
            cv: CvConfig::default(),
        }
    }
}

/// Drops the trimmed columns, then applies the transform.
pub fn preprocess(table: &CurveTable, trim: usize, transform: Transform) -> Result<CurveTable> {
    if trim + 2 > table.times.len() {
        return Err(HarnessError::Config(format!(
            "trimming {trim} of {} columns leaves fewer than two",
            table.times.len()
        )));
    }
    let mut rows: Vec<Vec<f64>> = table.rows.iter().map(|r| r[trim..].to_vec()).collect();
    if let Transform::LogOffset(offset) = transform {
        for (i, row) in rows.iter().enumerate() {
            if let Some(c) = row.iter().position(|&v| v <= offset) {
                return Err(HarnessError::Ingest {
                    row: i + 2,
                    column: trim + c + 2,
                    message: format!("value {} is not above the log offset {offset}", row[c]),
                });
            }
        }
        rows.iter_mut().flatten().for_each(|v| *v = (*v - offset).ln());
    }
    Ok(CurveTable { times: table.times[trim..].to_vec(), labels: table.labels.clone(), rows })
}

/// Leave-one-out accuracy of each roster entry at its LOO-selected
/// hyperparameters, with time rescaled to `[0,1]` and the prior estimated
/// from the class counts.
pub fn evaluate_table(
    table: &CurveTable,
    roster: &[ClassifierKind],
    cv: &CvConfig,
    label: &str,
) -> Result<ExperimentReport> {
    if roster.is_empty() {
        return Err(HarnessError::Config("the classifier roster is empty".into()));
    }
    let sample = table.to_sample(Prior::FromCounts)?;
    let grid = sample.grid();
    let outcomes = roster
        .iter()
        .map(|&kind| {
            let result = match kind {
                ClassifierKind::NonparamPlugin => {
                    let h_candidates: Vec<f64> = cv
                        .h_steps
                        .iter()
                        .filter(|&&k| 2 * k < grid.intervals())
                        .map(|&k| k as f64 * grid.delta())
                        .collect();
                    select_h_cv(&sample, &h_candidates, None).and_then(|sel| {
                        let i = h_candidates.iter().position(|&h| h == sel.h).expect("selected from candidates");
                        let error = match sel.loo_errors[i] {
                            Some(e) => e,
                            None => loo_error(&sample, SmoothingParams::new(sel.h))?
                                .ok_or_else(|| Error::Selection("every fold failed".into()))?,
                        };
                        Ok((error, format!("h={}d", grid.steps_of(sel.h).unwrap_or_default())))
                    })
                }
                ClassifierKind::KnnSup => {
                    select_knn_cv(&sample, &cv.ks(), None).map(|s| (s.loo_error, format!("k={}", s.k)))
                }
                ClassifierKind::KnnPls => select_knn_cv(&sample, &cv.ks(), Some(&cv.pls_directions()))
                    .map(|s| (s.loo_error, format!("k={} d={}", s.k, s.directions.unwrap_or_default()))),
                ClassifierKind::Bayes | ClassifierKind::ParamPlugin => Err(Error::InvalidModel(format!(
                    "{} needs a model and is not available for observed data",
                    kind.name()
                ))),
            };
            match result {
                Ok((error, selected)) => {
                    ClassifierOutcome { accuracy: Some(1.0 - error), error: None, selected: Some(selected) }
                }
                Err(e) => ClassifierOutcome { accuracy: None, error: Some(e.to_string()), selected: None },
            }
        })
        .collect();
    let names: Vec<&str> = roster.iter().map(|k| k.name()).collect();
    let canonical = format!("{label}\n{:?}\n{}", roster, table.to_csv());
    Ok(ExperimentReport::assemble(label, 0, &canonical, &names, vec![RunRecord { run: 0, outcomes }]))
}

pub fn run_real_data(cfg: &RealDataConfig) -> Result<ExperimentReport> {
    let file = std::fs::File::open(&cfg.input).map_err(|e| HarnessError::io(&cfg.input, e))?;
    let raw = read_curve_csv(std::io::BufReader::new(file))?;
    let table = preprocess(&raw, cfg.trim.columns(cfg.sampling_seconds), cfg.transform)?;
    evaluate_table(&table, &cfg.roster, &cfg.cv, &cfg.input.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> CurveTable {
        CurveTable {
            times: vec![0.0, 10.0, 20.0, 30.0],
            labels: vec![0, 1],
            rows: vec![vec![90.0, 95.0, 100.0, 86.0], vec![87.0, 88.0, 89.0, 90.0]],
        }
    }

    #[test]
    fn parse_options() {
        assert_eq!("log-offset:85".parse::<Transform>().unwrap(), Transform::LogOffset(85.0));
        assert_eq!("identity".parse::<Transform>().unwrap(), Transform::Identity);
        assert!("log".parse::<Transform>().is_err());
        assert_eq!("3min".parse::<Trim>().unwrap().columns(10.0), 18);
        assert_eq!("7".parse::<Trim>().unwrap(), Trim::Count(7));
        assert!("x".parse::<Trim>().is_err());
    }

    #[test]
    fn identity_passes_through() {
        assert_eq!(preprocess(&table(), 0, Transform::Identity).unwrap(), table());
    }

    #[test]
    fn trim_then_log() {
        let out = preprocess(&table(), 1, Transform::LogOffset(85.0)).unwrap();
        assert_eq!(out.times, [10.0, 20.0, 30.0]);
        assert_eq!(out.rows[0][0], 10f64.ln());
        assert!(preprocess(&table(), 3, Transform::Identity).is_err());
    }

    #[test]
    fn offset_violation() {
        let err = preprocess(&table(), 0, Transform::LogOffset(86.0)).unwrap_err();
        assert!(matches!(err, HarnessError::Ingest { row: 2, column: 5, .. }), "{err}");
    }
}
