//! `heatpot`: kernel tables, boundary-condition verification, Green-function
//! solves and oracle comparisons driven by JSON scenario files.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
//! configuration error, 3 numerical failure.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use heatpot::HeatError;

/// Environment variable holding the worker thread count.
const THREADS_VAR: &str = "HEATPOT_THREADS";

#[derive(Parser)]
#[command(name = "heatpot", version, about = "Iterated heat potentials and nonlocal boundary conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print eps_{m,n}, its gradient and a normal derivative as CSV
    KernelEval {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Space point, `x` or `x,y`; repeatable
        #[arg(long = "x", required = true, allow_hyphen_values = true)]
        xs: Vec<String>,
        /// Time lag; repeatable
        #[arg(long = "t", required = true, allow_hyphen_values = true)]
        ts: Vec<f64>,
        /// Unit normal for the normal derivative (default: first axis)
        #[arg(long, allow_hyphen_values = true)]
        normal: Option<String>,
    },
    /// Check the nonlocal boundary conditions of a scenario's potential
    VerifyTheorem1 {
        /// Scenario file or bundled scenario name
        scenario: String,
        /// Refinement levels on top of the scenario's resolution
        #[arg(long, default_value_t = 1)]
        refinements: u32,
        #[arg(long)]
        report: Option<String>,
        /// CSV of normalized residuals per level
        #[arg(long)]
        values: Option<String>,
    },
    /// Solve the first-order problem with nonlocal data via Green functions
    SolveTheorem2 {
        scenario: String,
        /// Probe `x@t` or `x,y@t`; repeatable (default: 3 x 3 grid)
        #[arg(long = "probe")]
        probes: Vec<String>,
        #[arg(long)]
        report: Option<String>,
        #[arg(long)]
        values: Option<String>,
    },
    /// Compare the direct potential with the cascade oracle at seeded probes
    CompareOracle {
        scenario: String,
        /// Override the scenario seed
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        report: Option<String>,
        #[arg(long)]
        values: Option<String>,
    },
    /// List bundled scenarios or print one as JSON
    Scenarios {
        #[arg(long)]
        show: Option<String>,
    },
}

/// Result of a command that ran to completion.
pub enum Outcome {
    Pass,
    CheckFailed,
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| HeatError::Config(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| HeatError::Config(format!("thread pool: {e}")))?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<HeatError>() {
        Some(HeatError::Config(_) | HeatError::Argument(_)) | None => 2,
        Some(HeatError::Domain(_) | HeatError::Truncation { .. } | HeatError::Numerical(_)) => 3,
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    configure_threads()?;
    match cli.command {
        Command::KernelEval { m, n, xs, ts, normal } => {
            commands::kernel_eval(m, n, &xs, &ts, normal.as_deref())
        }
        Command::VerifyTheorem1 {
            scenario,
            refinements,
            report,
            values,
        } => commands::verify_theorem1(&scenario, refinements, report, values),
        Command::SolveTheorem2 {
            scenario,
            probes,
            report,
            values,
        } => commands::solve_theorem2(&scenario, &probes, report, values),
        Command::CompareOracle {
            scenario,
            seed,
            report,
            values,
        } => commands::compare_oracle(&scenario, seed, report, values),
        Command::Scenarios { show } => commands::scenarios(show.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
