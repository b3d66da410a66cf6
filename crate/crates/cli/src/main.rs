//! `klateral`: coalition-proof equilibria from the command line.
//!
//! Exit status is 0 on success, 1 for invalid input and 2 when a computation
//! would exceed its resource bound.

mod commands;
mod files;
mod report;

use std::io::Write;
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use klateral::{Config, Execution};

use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Limit(String),
}

impl CliError {
    fn context(self, what: &str) -> Self {
        match self {
            CliError::Invalid(m) => CliError::Invalid(format!("{what}: {m}")),
            CliError::Limit(m) => CliError::Limit(format!("{what}: {m}")),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Limit(_) => 2,
        }
    }
}

impl From<klateral::Error> for CliError {
    fn from(e: klateral::Error) -> Self {
        if e.is_resource_limit() {
            CliError::Limit(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "klateral",
    version,
    about = "Find and check k-lateral (coalition-proof) Nash equilibria"
)]
struct Cli {
    /// Worker threads; 1 (the default) runs sequentially. Results do not
    /// depend on this setting.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Greedy,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Filtration NE_1 ⊇ … ⊇ NE_k of a finite game file.
    Analyze {
        path: PathBuf,
        /// Largest coalition size; defaults to the number of players.
        #[arg(long)]
        max_k: Option<usize>,
        /// Absolute tolerance for float comparisons.
        #[arg(long, default_value_t = klateral::payoff::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Clique-covering number of the Kneser graph K(n,k).
    Xi {
        n: usize,
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// k-lateral equilibria of every fiber of a family file.
    Scan {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = klateral::payoff::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Worked examples: date, majority, inspection, cournot, witness3.
    Demo {
        name: String,
        /// Seed for the witness3 search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn config(threads: u16, tol: f64) -> Result<Config, CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Invalid(format!(
            "--tol must be positive and finite, got {tol}"
        )));
    }
    let execution = if threads > 1 {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    Ok(Config::default().with_tol(tol).with_execution(execution))
}

fn run(cli: Cli) -> Result<(Report, bool), CliError> {
    let threads = cli.threads;
    match cli.command {
        Command::Analyze { path, max_k, tol, json } => {
            Ok((commands::analyze(&path, max_k, &config(threads, tol)?)?, json))
        }
        Command::Xi { n, k, mode, json } => Ok((commands::xi(n, k, matches!(mode, Mode::Exact))?, json)),
        Command::Scan { path, k, tol, json } => Ok((commands::scan(&path, k, &config(threads, tol)?)?, json)),
        Command::Demo { name, seed, json } => {
            let cfg = config(threads, klateral::payoff::DEFAULT_TOL)?;
            Ok((commands::demo(&name, seed, &cfg)?, json))
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads as usize)
        .build()
        .map_err(|e| CliError::Limit(format!("cannot start {} threads: {e}", cli.threads)))?;
    let (report, json) = pool.install(|| run(cli))?;
    let text = if json {
        let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        report.to_text()
    };
    let mut out = std::io::stdout().lock();
    // A closed pipe is not an error worth reporting.
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    match panic::catch_unwind(|| execute(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(config(1, 0.0).is_err());
        assert!(config(1, f64::NAN).is_err());
        assert_eq!(config(4, 1e-6).unwrap().execution, Execution::Parallel);
        assert_eq!(config(1, 1e-6).unwrap().execution, Execution::Sequential);
    }

    #[test]
    fn reports_round_trip_through_json() {
        let cfg = Config::default();
        for name in commands::DEMOS {
            let report = commands::demo(name, 3, &cfg).unwrap();
            let text = serde_json::to_string(&report).unwrap();
            let back: Report = serde_json::from_str(&text).unwrap();
            assert_eq!(back, report, "{name}");
        }
        let report = commands::xi(6, 2, true).unwrap();
        let back: Report = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(back, report);
    }
}
