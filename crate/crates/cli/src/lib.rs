//! Command-line front end: predicted asymptotics, Monte Carlo variance curves, identity
//! suites, indicator limits and kernel moments, written as JSON and CSV.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod specs;
pub mod verify;

pub use commands::{execute, Outcome};
pub use config::{Command, ExperimentConfig, Suite};
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "covasym",
    version,
    about = "Covariance asymptotics of linear statistics of point processes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Leading order and constant of Cov(X_L(f), X_L(g)); writes prediction.json
    Predict(Options),
    /// Monte Carlo variance curve and scaling fit; writes series.csv, summary.csv, fit.json
    Simulate(Options),
    /// Run an identity suite; writes verify.json, exit code 3 on failure
    Verify {
        /// qm-reduction, discrete-cumulants, integral-identity-discrete,
        /// integral-identity-nonprojection, dpp or all
        suite: Option<String>,
        #[command(flatten)]
        options: Options,
    },
    /// Surface- or volume-order limit for indicators of two planar domains; writes indicator.json
    Indicator(Options),
    /// Kernel moments I(γ), radial moments and the defect; writes moments.json
    Moments(Options),
}

/// Flags shared by all subcommands; each overrides the same key of `--config`.
#[derive(Debug, Default, Args)]
pub struct Options {
    /// flat `key = value` file
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long)]
    pub process: Option<String>,
    #[arg(long)]
    pub function: Option<String>,
    /// second test function of a covariance (defaults to --function)
    #[arg(long)]
    pub g: Option<String>,
    /// e.g. `disc 0 0 1`, `annulus 0 0 1 2`, `ellipse 0 0 2 1`
    #[arg(long = "domain-a")]
    pub domain_a: Option<String>,
    #[arg(long = "domain-b")]
    pub domain_b: Option<String>,
    /// comma-separated scales
    #[arg(long = "L")]
    pub scales: Option<String>,
    #[arg(long)]
    pub reps: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<String>,
    /// moment order for `moments`
    #[arg(long)]
    pub order: Option<String>,
    /// largest expansion index k searched by `predict`
    #[arg(long = "max-k")]
    pub max_k: Option<String>,
}

impl Options {
    fn overrides(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("kernel", self.kernel.clone()),
            ("process", self.process.clone()),
            ("function", self.function.clone()),
            ("g", self.g.clone()),
            ("domain-a", self.domain_a.clone()),
            ("domain-b", self.domain_b.clone()),
            ("L", self.scales.clone()),
            ("reps", self.reps.clone()),
            ("seed", self.seed.clone()),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("tol", self.tol.clone()),
            ("order", self.order.clone()),
            ("max-k", self.max_k.clone()),
        ]
    }
}

impl Cli {
    /// Merges the config file with the flags and validates the result.
    pub fn into_config(self) -> CliResult<ExperimentConfig> {
        let (command, options, suite) = match self.command {
            CliCommand::Predict(o) => (Command::Predict, o, None),
            CliCommand::Simulate(o) => (Command::Simulate, o, None),
            CliCommand::Verify { suite, options } => (Command::Verify, options, suite),
            CliCommand::Indicator(o) => (Command::Indicator, o, None),
            CliCommand::Moments(o) => (Command::Moments, o, None),
        };
        let mut pairs = match &options.config {
            Some(path) => config::read_config_file(path)?,
            None => BTreeMap::new(),
        };
        for (key, value) in options.overrides() {
            if let Some(value) = value {
                pairs.insert(key.to_string(), value);
            }
        }
        if let Some(suite) = suite {
            pairs.insert("suite".to_string(), suite);
        }
        ExperimentConfig::from_pairs(command, &pairs)
    }
}

/// Parses arguments, runs the command and reports to stdout/stderr; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match cli.into_config().and_then(|config| execute(&config)) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
