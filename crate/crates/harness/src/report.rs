//! Text renderings of an [`ExperimentReport`].

use std::fmt::Write;

use crate::experiment::{ClassifierSummary, ExperimentReport};
use crate::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Self::Table),
            "csv" => Ok(Self::Csv),
            _ => Err(HarnessError::Config(format!("unknown report format `{s}`"))),
        }
    }
}

const CSV_HEADER: [&str; 4] = ["classifier", "mean", "sd", "runs_ok"];

pub fn emit_report(report: &ExperimentReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => table(report),
        ReportFormat::Csv => summaries_csv(&report.summaries),
    }
}

fn table(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} | seed {} | config sha256 {} | funcgauss {}",
        report.scenario, report.seed, report.config_hash, report.code_version
    );
    let _ = writeln!(out, "{:<16} {:>6} {:>6} {:>8}", CSV_HEADER[0], CSV_HEADER[1], CSV_HEADER[2], CSV_HEADER[3]);
    for s in &report.summaries {
        let _ = writeln!(out, "{:<16} {:>6.2} {:>6.2} {:>8}", s.classifier, s.mean, s.sd, s.runs_ok);
    }
    for s in report.summaries.iter().filter(|s| s.runs_failed > 0) {
        let _ = writeln!(out, "# {}: {} failed run(s)", s.classifier, s.runs_failed);
    }
    out
}

/// Summary rows at full precision; [`parse_summaries_csv`] reads them back.
pub fn summaries_csv(summaries: &[ClassifierSummary]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("writing to memory");
    for s in summaries {
        w.write_record([s.classifier.clone(), s.mean.to_string(), s.sd.to_string(), s.runs_ok.to_string()])
            .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

pub fn parse_summaries_csv(text: &str) -> Result<Vec<ClassifierSummary>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| HarnessError::Format(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(HarnessError::Format(format!("unexpected report header {:?}", header)));
    }
    r.records()
        .enumerate()
        .map(|(i, rec)| {
            let row = i + 2;
            let rec = rec.map_err(|e| HarnessError::Format(e.to_string()))?;
            let field = |c: usize| -> Result<&str> {
                rec.get(c).ok_or_else(|| HarnessError::Ingest { row, column: c + 1, message: "missing field".into() })
            };
            let num = |c: usize| -> Result<f64> {
                field(c)?.parse().map_err(|_| HarnessError::Ingest {
                    row,
                    column: c + 1,
                    message: "not a number".into(),
                })
            };
            Ok(ClassifierSummary {
                classifier: field(0)?.to_string(),
                mean: num(1)?,
                sd: num(2)?,
                runs_ok: field(3)?.parse().map_err(|_| HarnessError::Ingest {
                    row,
                    column: 4,
                    message: "not a count".into(),
                })?,
                runs_failed: 0,
            })
        })
        .collect()
}

/// One line per run and classifier: accuracy, selected hyperparameters and
/// any error.
pub fn runs_csv(report: &ExperimentReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["run", "classifier", "accuracy", "selected", "error"]).expect("writing to memory");
    for run in &report.runs {
        for (s, o) in report.summaries.iter().zip(&run.outcomes) {
            w.write_record([
                run.run.to_string(),
                s.classifier.clone(),
                o.accuracy.map(|a| a.to_string()).unwrap_or_default(),
                o.selected.clone().unwrap_or_default(),
                o.error.clone().unwrap_or_default(),
            ])
            .expect("writing to memory");
        }
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> ExperimentReport {
        ExperimentReport {
            scenario: "x".into(),
            seed: 3,
            config_hash: "00".into(),
            code_version: "0".into(),
            summaries: vec![ClassifierSummary::from_accuracies("bayes", &[0.7, 0.8, 0.7733333333333333], 0)],
            runs: vec![],
        }
    }

    #[test]
    fn table_has_two_decimals() {
        let text = emit_report(&report(), ReportFormat::Table);
        let row = text.lines().nth(2).unwrap();
        assert!(row.starts_with("bayes"));
        assert!(row.contains(" 0.76 "), "{row}");
    }

    #[test]
    fn csv_round_trip() {
        let csv = emit_report(&report(), ReportFormat::Csv);
        assert_eq!(csv.lines().count(), 2);
        let parsed = parse_summaries_csv(&csv).unwrap();
        assert_eq!(summaries_csv(&parsed), csv);
        assert_eq!(parsed[0].mean, report().summaries[0].mean);
    }

    #[test]
    fn bad_header() {
        assert!(parse_summaries_csv("a,b,c,d\n").is_err());
    }
}
