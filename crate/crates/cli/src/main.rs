mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use config::{Config, Params};
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "galerkin-rks", version, about = "Galerkin reconstruction experiments")]
struct Cli {
    /// TOML file with any of the experiment flags; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct one signal and write signal, samples, solution and metrics
    Reconstruct(Params),
    /// Quasi-optimality table
    Table1(Params),
    /// Condition-number table
    Table2(Params),
    /// Signal and error grids for plotting
    Figures(Params),
    /// Admissibility, stability and iteration diagnostics
    Diagnose(Params),
}

#[derive(Debug)]
pub enum CliError {
    Core(galerkin_rks::Error),
    Io(PathBuf, std::io::Error),
    Config(String),
}

impl CliError {
    fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Io(..) => "Io",
            CliError::Config(_) => "InvalidConfig",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Config(msg) => f.write_str(msg),
        }
    }
}

impl From<galerkin_rks::Error> for CliError {
    fn from(e: galerkin_rks::Error) -> Self {
        CliError::Core(e)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (params, run): (Params, fn(&Config) -> Result<(), CliError>) = match cli.command {
        Command::Reconstruct(p) => (p, commands::reconstruct),
        Command::Table1(p) => (p, commands::table1),
        Command::Table2(p) => (p, commands::table2),
        Command::Figures(p) => (p, commands::figures),
        Command::Diagnose(p) => (p, commands::diagnose_cmd),
    };
    let cfg = Config::resolve(params.merged_with_file(cli.config.as_deref())?)?;
    run(&cfg)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}
