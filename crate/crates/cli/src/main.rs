use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nearrep_cli::builtin::{run_builtin, BUILTINS};
use nearrep_cli::pipeline::run_scenario;
use nearrep_cli::{Overrides, Result, RunReport, Scenario};

/// Measure axiom violations of preference models and verify the bounds of
/// their nearby exact representations.
///
/// Exit status: 0 when every applicable bound holds, 2 when one is
/// violated, 1 on input errors.
#[derive(Parser)]
#[command(name = "nearrep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run a pinned scenario (see `list`).
    Builtin {
        name: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// List the builtins.
    List,
}

#[derive(Args)]
struct Flags {
    /// Output directory; defaults to the scenario's, else the current one.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Root-finding tolerance.
    #[arg(long, value_name = "REAL")]
    tol: Option<f64>,
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
    /// Sampler resolution (its meaning depends on the domain).
    #[arg(long, value_name = "INT")]
    grid: Option<usize>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            tol: self.tol,
            seed: self.seed,
            grid: self.grid,
        }
    }
}

const EXIT_INPUT: u8 = 1;
const EXIT_VIOLATION: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_VIOLATION),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

/// Returns whether any bound failed.
fn execute(command: Command) -> Result<bool> {
    let (reports, dir, tables) = match command {
        Command::List => {
            for (name, about) in BUILTINS {
                println!("{name:<18} {about}");
            }
            return Ok(false);
        }
        Command::Run { file, flags } => {
            let mut scenario = Scenario::load(&file)?;
            scenario.apply(flags.overrides());
            let dir = flags
                .out
                .or_else(|| scenario.output.dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            let tables = scenario.output.tables.unwrap_or(true);
            (vec![run_scenario(&scenario)?], dir, tables)
        }
        Command::Builtin { name, flags } => {
            let reports = run_builtin(&name, flags.overrides())?;
            (
                reports,
                flags.out.unwrap_or_else(|| PathBuf::from(".")),
                true,
            )
        }
    };
    let mut failed = false;
    for report in &reports {
        emit(report, &dir, tables)?;
        failed |= report.failed();
    }
    Ok(failed)
}

fn emit(report: &RunReport, dir: &std::path::Path, tables: bool) -> Result<()> {
    print!("{}", report.summary());
    for path in report.write(dir, tables)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
