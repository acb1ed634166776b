//! Monte Carlo experiments, real-data evaluation and flat-file IO on top of
//! [`funcgauss_core`].

pub mod config;
pub mod experiment;
pub mod io;
pub mod realdata;
pub mod report;

use std::path::{Path, PathBuf};

pub use config::{ClassifierKind, CvConfig, ExperimentConfig, ModelConfig};
pub use experiment::{run_experiment, ExperimentReport};
pub use realdata::{run_real_data, RealDataConfig};
pub use report::{emit_report, ReportFormat};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] funcgauss_core::Error),
    #[error("configuration: {0}")]
    Config(String),
    /// `row` and `column` are 1-based positions in the input file.
    #[error("line {row}, column {column}: {message}")]
    Ingest { row: usize, column: usize, message: String },
    #[error("{0}")]
    Format(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl HarnessError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
