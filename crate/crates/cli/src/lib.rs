//! Command-line front end: scenario files in, CSV/JSON sweep tables out.

pub mod commands;
pub mod output;
pub mod scenario_io;

use clap::{Parser, ValueEnum};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl CliError {
    /// Process exit code: 2 for configuration problems, 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<hybridcov::Error> for CliError {
    fn from(e: hybridcov::Error) -> Self {
        match e {
            hybridcov::Error::Quadrature { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandName {
    /// Analytic coverage along one parameter axis.
    CoverageSweep,
    /// Analytic sweep plus Monte Carlo validation columns.
    Simulate,
    /// Solve the complementary design parameter along the sweep.
    OperatingCurve,
    /// Monte Carlo comparison of constellation layouts.
    CompareConstellations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    BsDensity,
    DeviceDensity,
    NumSatellites,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

/// Uplink coverage calculator for hybrid satellite-terrestrial networks.
#[derive(Debug, Parser)]
#[command(name = "hybridcov", version)]
pub struct Cli {
    /// Scenario file; omitted means all defaults.
    #[arg(long)]
    pub scenario: Option<PathBuf>,

    /// What to compute.
    #[arg(long, value_enum)]
    pub command: CommandName,

    /// Sweep axis. Densities are given per km^2, counts as integers.
    #[arg(long, value_enum)]
    pub axis: Option<AxisArg>,

    /// Comma-separated, strictly increasing sweep values.
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<f64>,

    /// Monte Carlo trials per point.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,

    /// Master seed for all Monte Carlo randomness.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Output file; omitted means stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,

    /// Target hybrid coverage for operating-curve solves.
    #[arg(long, default_value_t = 0.8)]
    pub target: f64,
}

/// Runs the CLI to completion, returning the rendered output text.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    if cli.values.is_empty() {
        return Err(CliError::Config(
            "--values must list at least one sweep value".into(),
        ));
    }
    if cli.values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(
            "--values must be strictly increasing".into(),
        ));
    }
    if cli.trials < 1 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }

    let file = match &cli.scenario {
        Some(path) => scenario_io::load_scenario(path)
            .map_err(|e| CliError::Config(e.to_string()))?,
        None => scenario_io::ScenarioFile::default(),
    };

    let table = match cli.command {
        CommandName::CoverageSweep => {
            let axis = require_axis(cli)?;
            commands::coverage_sweep(&file, axis, &cli.values)?
        }
        CommandName::Simulate => {
            let axis = require_axis(cli)?;
            commands::simulate(&file, axis, &cli.values, cli.trials, cli.seed)?
        }
        CommandName::OperatingCurve => {
            let axis = require_axis(cli)?;
            commands::operating_curve(&file, axis, &cli.values, cli.target)?
        }
        CommandName::CompareConstellations => {
            if matches!(cli.axis, Some(a) if a != AxisArg::NumSatellites) {
                return Err(CliError::Config(
                    "compare-constellations sweeps num-satellites only".into(),
                ));
            }
            commands::compare_constellations(&file, &cli.values, cli.trials, cli.seed)?
        }
    };

    Ok(match cli.format {
        FormatArg::Csv => output::render_csv(&table),
        FormatArg::Json => output::render_json(&table),
    })
}

fn require_axis(cli: &Cli) -> Result<AxisArg, CliError> {
    cli.axis
        .ok_or_else(|| CliError::Config("this command requires --axis".into()))
}
