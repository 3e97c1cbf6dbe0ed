//! The `pga-infer` driver: parse, infer, normalize, answer queries.

use std::fs;
use std::path::PathBuf;

use pga_core::analysis::{coefficient, expectation, marginal_table, normalize, total_mass};
use pga_core::lang::{free_vars, parse, ParseError};
use pga_core::oracle::{cross_check, explore};
use pga_core::semantics::infer;
use num_traits::Zero;
use pga_core::{PgaError, Rational, TransformerConfig, VarId};

use crate::dot::dot_export;
use crate::query::parse_point_query;
use crate::report::{csv_report, human_report, json_report, OracleSummary, QueryResult, Results};

/// Degree bound used when no `--max-degree` is given.
pub const DEFAULT_MAX_DEGREE: u64 = 10;

pub mod exit {
    pub const OK: i32 = 0;
    pub const USER_ERROR: i32 = 1;
    pub const ZERO_MASS: i32 = 2;
    pub const DIVERGENT: i32 = 3;
    pub const ORACLE_MISMATCH: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Default)]
pub struct CliRequest {
    pub input: PathBuf,
    pub queries: Vec<String>,
    pub marginals: Vec<(String, u64)>,
    pub expectations: Vec<String>,
    pub unnormalized: bool,
    pub minimize: bool,
    /// `-` writes the graph to standard output.
    pub dot: Option<PathBuf>,
    pub format: OutputFormat,
    pub oracle_epsilon: Option<Rational>,
}

impl CliRequest {
    pub fn has_action(&self) -> bool {
        !self.queries.is_empty()
            || !self.marginals.is_empty()
            || !self.expectations.is_empty()
            || self.dot.is_some()
            || self.oracle_epsilon.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    User(String),
    Parse(ParseError),
    Engine(PgaError),
}

impl From<PgaError> for Failure {
    fn from(e: PgaError) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::User(_) | Failure::Parse(_) => exit::USER_ERROR,
            Failure::Engine(PgaError::ZeroMass) => exit::ZERO_MASS,
            Failure::Engine(PgaError::DivergentAutomaton) => exit::DIVERGENT,
            Failure::Engine(_) => exit::USER_ERROR,
        }
    }

    fn message(&self, path: &str) -> String {
        match self {
            Failure::User(m) => format!("error: {m}\n"),
            Failure::Parse(e) => format!("{path}: {e}\n"),
            Failure::Engine(e) => format!("error: {e}\n"),
        }
    }
}

/// Executes a request; never panics on bad input and never exits the process.
pub fn run(req: &CliRequest) -> RunOutput {
    let path = req.input.display().to_string();
    let mut stdout = String::new();
    match execute(req, &mut stdout) {
        Ok(results) => {
            let code = match &results.oracle {
                Some(o) if !o.passed() => exit::ORACLE_MISMATCH,
                _ => exit::OK,
            };
            stdout.push_str(&match req.format {
                OutputFormat::Human => human_report(&results),
                OutputFormat::Json => json_report(&results),
                OutputFormat::Csv => csv_report(&results),
            });
            let stderr = if code == exit::ORACLE_MISMATCH {
                "error: posterior disagrees with the enumeration oracle\n".into()
            } else {
                String::new()
            };
            RunOutput { code, stdout, stderr }
        }
        Err(f) => RunOutput {
            code: f.code(),
            stdout,
            stderr: f.message(&path),
        },
    }
}

fn execute(req: &CliRequest, stdout: &mut String) -> Result<Results, Failure> {
    let source = fs::read_to_string(&req.input)
        .map_err(|e| Failure::User(format!("cannot read {}: {e}", req.input.display())))?;
    let program = parse(&source).map_err(Failure::Parse)?;
    let point_queries = req
        .queries
        .iter()
        .map(|q| parse_point_query(q).map(|v| (q.trim().to_string(), v)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::User(e.to_string()))?;

    let cfg = TransformerConfig {
        auto_trim: true,
        minimize: req.minimize,
    };
    let unnormalized = infer(&program, &cfg)?;
    let evidence = total_mass(&unnormalized)?;
    let pga = if req.unnormalized {
        unnormalized.clone()
    } else {
        normalize(&unnormalized)?
    };
    let mass = if req.unnormalized {
        evidence.clone()
    } else {
        total_mass(&pga)?
    };

    let mut marginals = req.marginals.clone();
    if !req.has_action() {
        marginals = free_vars(&program)
            .into_iter()
            .map(|v| (v.to_string(), DEFAULT_MAX_DEGREE))
            .collect();
    }

    let mut queries = Vec::new();
    for (text, v) in point_queries {
        queries.push(QueryResult::Point {
            target: text,
            value: coefficient(&pga, &v)?,
        });
    }
    for (var, max_degree) in marginals {
        let table = marginal_table(&pga, &[VarId::from(var.as_str())], max_degree)?;
        queries.push(QueryResult::Marginal {
            target: var,
            max_degree,
            table,
        });
    }
    for var in &req.expectations {
        queries.push(QueryResult::Expectation {
            target: var.clone(),
            value: expectation(&pga, &VarId::from(var.as_str()))?,
        });
    }

    if let Some(path) = &req.dot {
        let graph = dot_export(&pga);
        if path.as_os_str() == "-" {
            stdout.push_str(&graph);
        } else {
            fs::write(path, graph)
                .map_err(|e| Failure::User(format!("cannot write {}: {e}", path.display())))?;
        }
    }

    let oracle = match &req.oracle_epsilon {
        None => None,
        Some(eps) => {
            let explored = explore(&program, eps)?;
            let zero = Rational::zero();
            let report = cross_check(&unnormalized, &explored.table, &zero)?;
            Some(OracleSummary {
                epsilon: eps.clone(),
                residual: explored.table.residual.clone(),
                rejected: explored.rejected,
                checked: report.checked,
                violations: report.violations,
                unlisted_excess: report.unlisted_excess,
            })
        }
    };

    Ok(Results {
        program: req.input.display().to_string(),
        normalized: !req.unnormalized,
        evidence,
        mass,
        queries,
        oracle,
    })
}
