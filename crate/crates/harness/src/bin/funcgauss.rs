use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use funcgauss_core::simulate::RngSeed;
use funcgauss_core::{Curve, Grid, Label, LabeledSample, Prior};
use funcgauss_harness::config::{self, ExperimentConfig, ModelConfig};
use funcgauss_harness::io::sample_to_csv;
use funcgauss_harness::realdata::{RealDataConfig, Transform, Trim};
use funcgauss_harness::report::runs_csv;
use funcgauss_harness::{emit_report, run_experiment, run_real_data, ClassifierKind, ReportFormat};

#[derive(Parser)]
#[command(version, about = "Classification of Gaussian functional data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment.
    Run {
        /// TOML experiment file.
        #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
        config: Option<PathBuf>,
        /// A built-in scenario id (see `funcgauss scenarios`).
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "table")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-run accuracies and selections as CSV.
        #[arg(long)]
        runs_out: Option<PathBuf>,
    },
    /// Leave-one-out evaluation on a curve CSV.
    Realdata {
        #[arg(long)]
        input: PathBuf,
        /// `identity` or `log-offset:<value>`.
        #[arg(long, default_value = "identity")]
        transform: Transform,
        /// Leading samples to drop, as a count or `<minutes>min`.
        #[arg(long, default_value = "0")]
        trim: Trim,
        #[arg(long, default_value_t = 10.0)]
        sampling_seconds: f64,
        /// Comma-separated classifier names.
        #[arg(long, value_delimiter = ',', default_value = "knn-sup,knn-pls,nonparam-plugin")]
        roster: Vec<ClassifierKind>,
        #[arg(long, default_value = "table")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample curves from one model and print them as CSV.
    Simulate {
        /// `brownian:c=1.5,sigma=1,theta=0,drift=true` or
        /// `ou:beta=1,eta=0,sigma=1,start=stationary`.
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        intervals: usize,
        #[arg(long, default_value_t = 0)]
        label: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in scenarios.
    Scenarios,
}

/// `family:key=value,…` as a TOML table.
fn parse_model(spec: &str) -> anyhow::Result<ModelConfig> {
    let (family, params) = spec.split_once(':').unwrap_or((spec, ""));
    let mut text = format!("family = {family:?}\n");
    for pair in params.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = pair.split_once('=').with_context(|| format!("`{pair}` is not key=value"))?;
        let value = value.trim();
        let literal = value.parse::<f64>().is_ok() || value == "true" || value == "false";
        text += &if literal { format!("{} = {value}\n", key.trim()) } else { format!("{} = {value:?}\n", key.trim()) };
    }
    toml::from_str(&text).with_context(|| format!("invalid model `{spec}`"))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run { config, scenario, runs, seed, format, out, runs_out } => {
            let mut cfg = match (config, scenario) {
                (Some(path), _) => ExperimentConfig::load(&path)?,
                (None, Some(id)) => config::scenario(&id, 200, 0)?,
                (None, None) => bail!("either --config or --scenario is required"),
            };
            cfg.runs = runs.unwrap_or(cfg.runs);
            cfg.seed = seed.unwrap_or(cfg.seed);
            let report = run_experiment(&cfg)?;
            write_out(&out, &emit_report(&report, format))?;
            if let Some(path) = runs_out {
                std::fs::write(&path, runs_csv(&report)).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Realdata { input, transform, trim, sampling_seconds, roster, format, out } => {
            let cfg = RealDataConfig { transform, trim, sampling_seconds, roster, ..RealDataConfig::new(input) };
            write_out(&out, &emit_report(&run_real_data(&cfg)?, format))?;
        }
        Command::Simulate { model, n, seed, intervals, label, out } => {
            let model = parse_model(&model)?.model();
            model.validate()?;
            let grid = Grid::uniform(intervals)?;
            let mut rng = RngSeed::new(seed).rng();
            let curves: Vec<Curve> = (0..n).map(|_| model.sample(grid, &mut rng)).collect();
            let label = Label::from_index(label)?;
            let sample = LabeledSample::new(curves, vec![label; n], Prior::FromCounts)?;
            write_out(&out, &sample_to_csv(&sample))?;
        }
        Command::Scenarios => {
            for id in config::SCENARIOS {
                println!("{id}");
            }
        }
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    execute(Cli::parse())
}
