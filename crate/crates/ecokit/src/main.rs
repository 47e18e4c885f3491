use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ecokit::commands::{eps_from, parse_grid, parse_n_range};
use ecokit::{load_scenario, run, Command, RunOptions, Status};

/// Feasibility, fees and viability of provider/consumer ecosystems.
#[derive(Debug, Parser)]
#[command(name = "ecokit", version)]
struct Cli {
    command: Command,
    /// Scenario file (TOML).
    scenario: PathBuf,
    /// Write the command's table as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid for the brute-force oracles, `low:high:step`.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(f64, f64, f64)>,
    /// Provider counts for the hub curve, `a..b`.
    #[arg(long, value_parser = parse_n_range)]
    n_range: Option<std::ops::RangeInclusive<u64>>,
    /// Same as `--n-range`, written `n=a..b`.
    #[arg(long, value_parser = parse_n_range, conflicts_with = "n_range")]
    curve: Option<std::ops::RangeInclusive<u64>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let eps = match eps_from(std::env::var("ECOKIT_EPS").ok().as_deref()) {
        Ok(eps) => eps,
        Err(e) => {
            eprintln!("error: {e}");
            return exit(Status::InputError);
        }
    };
    let scenario = match load_scenario(&cli.scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.scenario.display());
            return exit(Status::InputError);
        }
    };
    let opts = RunOptions {
        out: cli.out,
        grid: cli.grid,
        n_range: cli.n_range.or(cli.curve),
        eps,
    };
    let status = run(cli.command, &scenario, &opts, &mut io::stdout().lock(), &mut io::stderr().lock());
    exit(status)
}

fn exit(status: Status) -> ExitCode {
    ExitCode::from(status.code() as u8)
}
