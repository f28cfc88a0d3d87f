use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gridsearch::grid::DEFAULT_EVAL_BUDGET;
use gridsearch::harness::{
    self, ExperimentConfig, HarnessError, ProblemSource, DEFAULT_EPSILON, DEFAULT_R_EST,
};
use gridsearch::ProblemSpec;

#[derive(Parser)]
#[command(name = "gridsearch", version, about = "Polynomial minimization over the simplex by grid search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    #[value(alias = "markdown")]
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep r, measure gaps and check every bound.
    Run {
        /// Reference problem, e.g. `f1:n=4`, `f4:m=3,n=5`, `f7:d=3,n=6`.
        #[arg(long = "problem", value_name = "SPEC")]
        problems: Vec<ProblemSpec>,
        /// Polynomial text file; its optimum is estimated on a grid.
        #[arg(long = "poly", value_name = "FILE")]
        polys: Vec<PathBuf>,
        #[arg(long)]
        r_min: u32,
        #[arg(long)]
        r_max: u32,
        #[arg(long, default_value_t = 1)]
        step: u32,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        /// Maximum grid points per scan.
        #[arg(long, default_value_t = DEFAULT_EVAL_BUDGET)]
        budget: u64,
        /// Resolution for estimating the range of file polynomials.
        #[arg(long, default_value_t = DEFAULT_R_EST)]
        r_est: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Worker threads; results do not depend on this.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the bound comparison table for f1..f7.
    Table1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        epsilon: f64,
    },
    /// Fit convergence rates to a CSV written by `run`.
    Rate {
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<u8, HarnessError> {
    match command {
        Command::Run {
            problems,
            polys,
            r_min,
            r_max,
            step,
            epsilon,
            budget,
            r_est,
            out,
            format,
            workers,
        } => {
            let sources = problems
                .into_iter()
                .map(ProblemSource::Reference)
                .chain(polys.into_iter().map(ProblemSource::File))
                .collect();
            let cfg = ExperimentConfig {
                problems: sources,
                r_min,
                r_max,
                step,
                epsilon,
                eval_budget: budget,
                r_est,
                workers,
            };
            let report = harness::run_experiment(&cfg)?;
            let body = match format {
                Format::Csv => report.to_csv(),
                Format::Md => report.to_markdown(),
            };
            std::fs::write(&out, body).map_err(|source| HarnessError::Io { path: out, source })?;
            print!("{}", report.rates_csv());

            let violations = report.violations();
            for (row, check) in &violations {
                eprintln!(
                    "violation: {}:{} r={} gap={:e} exceeds {} = {:e}",
                    row.problem,
                    row.params,
                    row.r,
                    row.gap,
                    check.bound.kind,
                    check.bound.value().copied().unwrap_or(f64::NAN)
                );
            }
            for c in report.oracle_failures() {
                eprintln!(
                    "oracle mismatch: {}:{} r={} float={:e} exact={}",
                    c.problem, c.params, c.r, c.float_value, c.exact_value
                );
            }
            Ok(if report.is_sound() { 0 } else { 2 })
        }
        Command::Table1 { n, m, d, r, epsilon } => {
            let table = harness::reproduce_table1(n, m, d, r, epsilon)?;
            print!("{}", table.to_markdown());
            Ok(if table.mismatches().is_empty() { 0 } else { 2 })
        }
        Command::Rate { input } => {
            let src = std::fs::read_to_string(&input).map_err(|source| HarnessError::Io { path: input, source })?;
            let rates = harness::rates_from_csv(&src)?;
            print!("{}", harness::rates_to_csv(&rates));
            Ok(0)
        }
    }
}
