//! collapse-survey: detectability analysis for collapse-model force noise
//! in optomechanical sensors.

mod campaign;
mod config;
mod error;
mod output;
mod report;
mod sweep;

use clap::{Parser, Subcommand};
use error::CliError;
use output::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "collapse-survey",
    version,
    about = "Collapse-noise detectability survey for optomechanical force sensors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry form factor alpha by every applicable method
    Alpha {
        /// Experiment description (TOML)
        config: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Collapse-rate bounds and the full noise budget at one frequency
    Bounds {
        config: PathBuf,
        /// Analysis frequency (Hz), overriding the [readout] section
        #[arg(long)]
        omega_hz: Option<f64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a bound over one or two parameter axes
    Sweep {
        config: PathBuf,
        /// Directory for sweep.csv (and contours.csv for two axes)
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a Langevin campaign and test the inferred spectrum
    Simulate {
        config: PathBuf,
        /// Directory for record.csv, psd.csv, analytic.csv, summary.json
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override [simulation] seed
        #[arg(long)]
        seed: Option<u64>,
        /// Emit one-sided spectral densities (double-sided values x2)
        #[arg(long)]
        one_sided: bool,
    },
    /// Detectability survey of the six bundled reference sensors
    Table1 {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Alpha {
            config,
            format,
            out,
        } => report::cmd_alpha(&config, format, out.as_deref()),
        Command::Bounds {
            config,
            omega_hz,
            format,
            out,
        } => report::cmd_bounds(&config, omega_hz, format, out.as_deref()),
        Command::Sweep { config, out } => sweep::cmd_sweep(&config, &out),
        Command::Simulate {
            config,
            out,
            seed,
            one_sided,
        } => campaign::cmd_simulate(&config, &out, seed, one_sided),
        Command::Table1 { format, out } => report::cmd_table1(format, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
