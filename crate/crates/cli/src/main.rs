use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use invext_cli::{execute, Command, Options};

/// Group-invariant extensions from scenario files.
///
/// Exit status: 0 when every audit passes, 1 when an audit fails (the report
/// is still written), 2 when the scenario cannot be parsed or validated.
#[derive(Debug, Parser)]
#[command(name = "invext", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// Override the net epsilon of the scenario.
    #[arg(long, global = true, allow_negative_numbers = true)]
    epsilon: Option<f64>,

    /// Output directory for grid.csv and report.txt.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for audit sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Evaluate the grid and run every audit the scenario requests.
    Run { scenario: PathBuf },
    /// Invariance, restriction and oracle audits without the grid.
    Audit { scenario: PathBuf },
    /// Audit the invariant zero-set function of the [zeroset] section.
    Zeroset { scenario: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, path) = match cli.command {
        Sub::Run { scenario } => (Command::Run, scenario),
        Sub::Audit { scenario } => (Command::Audit, scenario),
        Sub::Zeroset { scenario } => (Command::ZeroSet, scenario),
    };
    let options = Options {
        epsilon: cli.epsilon,
        out: cli.out,
        seed: cli.seed,
        ..Options::default()
    };
    match execute(command, &path, &options) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
