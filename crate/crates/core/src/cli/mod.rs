//! Command-line front end behind the `d2dcache` binary.
//!
//! ```text
//! d2dcache run --config scenario.json
//! d2dcache sweep --config scenario.json --axis q --values 3,5,7
//! d2dcache fixtures list
//! d2dcache fixtures run hc-3d
//! ```
//!
//! `run` writes `<output>/record.json`, `sweep` writes `<output>/sweep.csv`.
//! The exit status is `0` when every verification passed, `1` when a
//! verification failed and `2` on configuration or parameter errors.

mod config;
mod fixtures;
mod record;
mod run;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub use config::{
    DecentralizedConfig, HypercubeConfig, RsConstructConfig, RsGraphConfig, ScenarioConfig,
    SchemeKind, SchemeParams, SpatialConfig, SEED_ENV,
};
pub use fixtures::{fixture_config, FIXTURES};
pub use record::{RationalValue, ResultRecord, Verification};
pub use run::run;
pub use sweep::{sweep, with_axis, write_sweep, write_sweep_csv, SweepRow, SWEEP_HEADER};

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "d2dcache", version, about = "Coded D2D caching schemes: build, simulate, verify")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and write `record.json`.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a scenario once per axis value and write `sweep.csv`.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Key under `params`, or one of `seed`, `trials`, `verify`.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Built-in scenarios.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixtureAction {
    List,
    Run {
        name: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn output_dir(config: &ScenarioConfig, flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn report(record: &ResultRecord, dir: &std::path::Path) -> Result<bool> {
    record.write(dir)?;
    let rate = record
        .rate
        .as_ref()
        .map(|r| r.exact.clone())
        .or_else(|| record.monte_carlo.as_ref().map(|m| format!("mean {:.6}", m.mean)))
        .unwrap_or_default();
    println!(
        "{:?} K={} R={} passed={} -> {}",
        record.scheme,
        record.packetization.as_deref().unwrap_or("-"),
        rate,
        record.passed,
        dir.join("record.json").display()
    );
    Ok(record.passed)
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, output } => {
            let config = ScenarioConfig::load(&config)?;
            let record = run(&config)?;
            report(&record, &output_dir(&config, output))
        }
        Command::Sweep {
            config,
            axis,
            values,
            output,
        } => {
            let config = ScenarioConfig::load(&config)?;
            let rows = sweep(&config, &axis, &values);
            let dir = output_dir(&config, output);
            write_sweep(&rows, &dir)?;
            write_sweep_csv(&rows, std::io::stdout())?;
            Ok(rows.iter().all(|r| r.error.is_none()))
        }
        Command::Fixtures { action } => match action {
            FixtureAction::List => {
                for (name, about) in FIXTURES {
                    println!("{name:<8} {about}");
                }
                Ok(true)
            }
            FixtureAction::Run { name, output } => {
                let config = fixture_config(&name)?;
                let record = run(&config)?;
                report(&record, &output_dir(&config, output))
            }
        },
    }
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
