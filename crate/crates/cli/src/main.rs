use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use cascade_noise::scenario::Scenario;
use cascade_noise_cli::commands::{cmd_analyze, cmd_apd, cmd_scenario, ApdArgs, ScenarioOverrides};
use cascade_noise_cli::{CliError, Format, RenderOptions};
use clap::{Parser, Subcommand, ValueEnum};

/// Stage-wise and total noise factors of cascade networks, Friis' formulas
/// against the corrected ones.
#[derive(Parser)]
#[command(name = "cascade-noise", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Add noise figures in dB (10·log10 F) next to linear factors.
    #[arg(long, global = true)]
    db: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioName {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig3,
}

impl From<ScenarioName> for Scenario {
    fn from(s: ScenarioName) -> Self {
        match s {
            ScenarioName::Fig2a => Scenario::Fig2a,
            ScenarioName::Fig2b => Scenario::Fig2b,
            ScenarioName::Fig2c => Scenario::Fig2c,
            ScenarioName::Fig3 => Scenario::Fig3,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a network file (TOML or JSON).
    Analyze {
        path: PathBuf,
    },
    /// Generate one of the comparison scenarios.
    Scenario {
        #[arg(value_enum)]
        name: ScenarioName,
        /// Number of stages.
        #[arg(long)]
        n: Option<usize>,
        /// Common power gain (≥ 1).
        #[arg(long)]
        gain: Option<f64>,
        /// Common external noise power.
        #[arg(long)]
        ext: Option<f64>,
        /// Ratio of internal noise to stage input noise.
        #[arg(long)]
        delta: Option<f64>,
        /// Source noise power.
        #[arg(long)]
        ni: Option<f64>,
        /// Source signal power.
        #[arg(long)]
        si: Option<f64>,
    },
    /// Staircase APD excess noise, with an optional Monte Carlo diagnostic.
    Apd {
        /// Ionization probability of the next step (repeatable).
        #[arg(long = "p", allow_negative_numbers = true)]
        p: Vec<f64>,
        /// File of per-step probabilities, appended after any --p values.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Monte Carlo trials; omit to skip the simulation.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Parallel workers; results depend on (seed, trials, workers).
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let opts = RenderOptions {
        format: cli.format,
        db: cli.db,
    };
    let text = match cli.command {
        Command::Analyze { path } => cmd_analyze(&path, opts)?,
        Command::Scenario {
            name,
            n,
            gain,
            ext,
            delta,
            ni,
            si,
        } => {
            let overrides = ScenarioOverrides {
                n,
                gain,
                ext,
                delta,
                ni,
                si,
            };
            cmd_scenario(name.into(), overrides, opts)?
        }
        Command::Apd {
            p,
            file,
            trials,
            seed,
            workers,
        } => cmd_apd(
            &ApdArgs {
                probabilities: p,
                file,
                trials,
                seed,
                workers,
            },
            opts,
        )?,
    };
    match cli.out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
