use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qctx::cli::{
    cmd_nchv, cmd_scan, cmd_simulate, cmd_verify_spatial, cmd_verify_temporal, export_runs_csv,
    report_to_json, CliError, Report, SimulateConfig,
};
use qctx::contexts::ContextVariant;

/// Verification toolkit for commuting sequential-measurement contexts:
/// exact Pauli algebra, hidden-variable refutation, and a seeded Monte Carlo
/// of projective spin measurements.
#[derive(Parser)]
#[command(name = "qctx", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Also write the JSON report to this file
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Temporal,
    Spatial,
}

impl From<VariantArg> for ContextVariant {
    fn from(arg: VariantArg) -> ContextVariant {
        match arg {
            VariantArg::Temporal => ContextVariant::Temporal,
            VariantArg::Spatial => ContextVariant::Spatial,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify the two-time measurement construction at given precession angles
    VerifyTemporal {
        /// First measurement angle, e.g. "0", "pi/2", "0.7853"
        #[arg(long, default_value = "0")]
        theta1: String,
        /// Second measurement angle
        #[arg(long, default_value = "pi/2")]
        theta2: String,
    },
    /// Verify the two-particle singlet baseline
    VerifySpatial,
    /// Monte Carlo the contexts and check outcome products and Born statistics
    Simulate {
        /// Which family of contexts to simulate
        #[arg(long, value_enum, default_value = "temporal")]
        variant: VariantArg,
        #[arg(long, default_value = "0")]
        theta1: String,
        #[arg(long, default_value = "pi/2")]
        theta2: String,
        /// Trials per context
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Seed for the per-trial random substreams
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Initial state: up, down, plus, upup, singlet, random[:SEED]
        #[arg(long)]
        state: Option<String>,
        /// Write every trial record to this CSV file
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Sweep the separation angle and report where the construction holds
    Scan {
        /// Number of uniform grid points over a full turn (at least 8)
        #[arg(long, default_value_t = 360)]
        grid: usize,
    },
    /// Decide a sign-constraint system from a JSON file
    Nchv {
        /// Path to a constraint-system document
        file: PathBuf,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::VerifyTemporal { theta1, theta2 } => cmd_verify_temporal(theta1, theta2),
        Command::VerifySpatial => cmd_verify_spatial(),
        Command::Simulate { variant, theta1, theta2, trials, seed, state, csv } => {
            let config = SimulateConfig {
                variant: (*variant).into(),
                theta1: theta1.clone(),
                theta2: theta2.clone(),
                trials: *trials,
                seed: *seed,
                state: state.clone(),
            };
            let (report, runs) = cmd_simulate(&config)?;
            if let Some(path) = csv {
                let file = std::fs::File::create(path).map_err(|e| {
                    CliError::Usage(format!("cannot write {}: {e}", path.display()))
                })?;
                export_runs_csv(&runs, std::io::BufWriter::new(file))?;
            }
            Ok(report)
        }
        Command::Scan { grid } => cmd_scan(*grid),
        Command::Nchv { file } => cmd_nchv(file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = report_to_json(&report);
            print!("{text}");
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write report to {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}
