mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use commands::{CliError, Output};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "casimir-slabs", version, about = "Casimir force between finite dissipative slabs (1+1 scalar field)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV destination (stdout if omitted; required for sweep-sigma).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit the timestamp line so reruns are byte-identical.
    #[arg(long, global = true)]
    reproducible: bool,
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// IC, bath and total force for one configuration.
    Force,
    /// Thermal over squeezed-band force ratios; one CSV per omega center.
    SweepSigma,
    /// Matsubara, half-space, zero-temperature and lossless limits.
    Limits,
    /// Invariant checks; exit 4 if any fails.
    Verify,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let path = cli.config.as_ref().ok_or_else(|| CliError::Config("--config is required".into()))?;
    let cfg = config::load(path).map_err(|e| CliError::Config(e.0))?;
    let out = Output { path: cli.out.as_deref(), reproducible: cli.reproducible };
    match cli.command {
        Command::Force => commands::force(&cfg, &out).map(|_| ()),
        Command::SweepSigma => {
            for p in commands::sweep_sigma(&cfg, &out)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::Limits => commands::limits(&cfg, &out).map(|_| ()),
        Command::Verify => commands::verify(&cfg, &out).map(|_| ()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("casimir-slabs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
