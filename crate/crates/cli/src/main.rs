use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::Parser;
use num_traits::Zero;
use pga_cli::run::{exit, OutputFormat, DEFAULT_MAX_DEGREE};
use pga_cli::{run, CliRequest};
use pga_core::rational::{parse_rational, Rational};

/// Exact posterior inference for loop-free probabilistic programs.
#[derive(Debug, Parser)]
#[command(name = "pga-infer", version)]
struct Args {
    /// Program file (`.pp`).
    file: PathBuf,
    /// Point query such as `P(X=3, Y=1)`; unlisted variables are marginalized.
    #[arg(long = "query", value_name = "Q")]
    queries: Vec<String>,
    /// Tabulate the marginal of VAR.
    #[arg(long = "marginal", value_name = "VAR")]
    marginals: Vec<String>,
    /// Degree bound for the marginals, paired in order; the last one given
    /// applies to any remaining marginals.
    #[arg(long = "max-degree", value_name = "N")]
    max_degrees: Vec<u64>,
    /// Expected value of VAR under the reported distribution.
    #[arg(long = "expect", value_name = "VAR")]
    expectations: Vec<String>,
    /// Report the unnormalized posterior instead of normalizing it.
    #[arg(long)]
    unnormalized: bool,
    /// Apply bisimulation minimization after every statement.
    #[arg(long)]
    minimize: bool,
    /// Write the posterior automaton as a DOT graph (`-` for stdout).
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit results as CSV (`valuation,probability`).
    #[arg(long)]
    csv: bool,
    /// Cross-check the posterior against exhaustive path enumeration.
    #[arg(long = "oracle-check")]
    oracle_check: bool,
    /// Truncation budget for the oracle, as `p/q` or a decimal.
    #[arg(long, value_name = "P/Q", value_parser = parse_epsilon, requires = "oracle_check")]
    epsilon: Option<Rational>,
}

fn parse_epsilon(s: &str) -> Result<Rational> {
    let r = parse_rational(s)?;
    if r <= Rational::zero() {
        bail!("epsilon must be positive");
    }
    Ok(r)
}

impl Args {
    fn into_request(self) -> CliRequest {
        let marginals = self
            .marginals
            .into_iter()
            .enumerate()
            .map(|(i, var)| {
                let degree = self
                    .max_degrees
                    .get(i)
                    .or(self.max_degrees.last())
                    .copied()
                    .unwrap_or(DEFAULT_MAX_DEGREE);
                (var, degree)
            })
            .collect();
        let format = if self.json {
            OutputFormat::Json
        } else if self.csv {
            OutputFormat::Csv
        } else {
            OutputFormat::Human
        };
        let oracle_epsilon = self
            .oracle_check
            .then(|| self.epsilon.unwrap_or_else(|| Rational::new(1.into(), 1_000_000_000.into())));
        CliRequest {
            input: self.file,
            queries: self.queries,
            marginals,
            expectations: self.expectations,
            unnormalized: self.unnormalized,
            minimize: self.minimize,
            dot: self.dot,
            format,
            oracle_epsilon,
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            // Exit code 2 is reserved for rejected posteriors.
            return ExitCode::from(if e.use_stderr() { exit::USER_ERROR as u8 } else { 0 });
        }
    };
    let out = run(&args.into_request());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
