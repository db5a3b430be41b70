//! `eprsim` — projective-measurement demos, composite-state analyses and
//! the coincidence-window experiment harness.
//!
//! Every run writes its artifacts plus a `manifest.json` recording the
//! command, effective config and seed; rerunning with the same manifest
//! inputs reproduces every artifact byte for byte.

mod commands;
mod inputs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::{CliError, CommandResult};

#[derive(Parser)]
#[command(name = "eprsim", version, about = "Finite-dimensional quantum measurement simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Overrides the seed from the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// JSON input / config file for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for artifacts (created if missing).
    #[arg(long, global = true, default_value = "eprsim-out")]
    out: PathBuf,

    /// Stdout format; artifacts are always JSON/CSV files.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Born / Lüders / von Neumann analysis of a state and observable.
    Measure,
    /// Schmidt decomposition of a bipartite pure state.
    Schmidt,
    /// Conditional-state families and ambiguity verdicts for two
    /// noncommuting observables on the first factor.
    EprReport,
    /// Builds and verifies a joint refinement of two single-factor
    /// observables.
    Refine,
    /// Randomized no-signaling sweep.
    Nosignal {
        /// Number of random (state, observable) instances.
        #[arg(long)]
        instances: Option<usize>,
    },
    /// Coincidence-window CHSH experiment from a config file.
    Chsh {
        /// Generation shards (never changes the output).
        #[arg(long, default_value_t = 1)]
        shards: usize,
    },
    /// Packaged singlet and qudit walkthroughs.
    Demo,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (name, result): (&str, CommandResult) = match &cli.command {
        Command::Measure => ("measure", commands::measure::run(cli.config.as_deref())?),
        Command::Schmidt => ("schmidt", commands::schmidt::run(cli.config.as_deref())?),
        Command::EprReport => (
            "epr-report",
            commands::epr_report::run(cli.config.as_deref())?,
        ),
        Command::Refine => ("refine", commands::refine::run(cli.config.as_deref())?),
        Command::Nosignal { instances } => (
            "nosignal",
            commands::nosignal::run(cli.config.as_deref(), *instances, cli.seed)?,
        ),
        Command::Chsh { shards } => (
            "chsh",
            commands::chsh::run(cli.config.as_deref(), cli.seed, *shards)?,
        ),
        Command::Demo => ("demo", commands::demo::run(cli.seed)?),
    };

    output::write_artifacts(&cli.out, name, &result)?;
    match cli.format {
        Format::Text => print!("{}", result.summary_text),
        Format::Json => {
            let rendered = serde_json::to_string_pretty(&result.summary_json)
                .map_err(|e| CliError::internal(format!("summary serialization: {e}")))?;
            println!("{rendered}");
        }
    }
    Ok(())
}
