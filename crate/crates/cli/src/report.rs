//! Renderers for inference results: human-readable text, JSON and CSV.
//!
//! Probabilities are always written as exact fractions; the human format adds
//! a decimal approximation marked with `≈`.

use std::collections::BTreeMap;
use std::fmt::Write;

use pga_core::oracle::Violation;
use pga_core::rational::to_f64;
use pga_core::{DistTable, Rational, Valuation};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum QueryResult {
    Point { target: String, value: Rational },
    Marginal { target: String, max_degree: u64, table: DistTable },
    Expectation { target: String, value: Rational },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSummary {
    pub epsilon: Rational,
    pub residual: Rational,
    pub rejected: Rational,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub unlisted_excess: Option<Rational>,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.unlisted_excess.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Results {
    pub program: String,
    pub normalized: bool,
    /// Total mass of the unnormalized posterior.
    pub evidence: Rational,
    /// Total mass of the reported automaton.
    pub mass: Rational,
    pub queries: Vec<QueryResult>,
    pub oracle: Option<OracleSummary>,
}

fn approx(r: &Rational) -> String {
    format!("{r}  (≈ {:.6})", to_f64(r))
}

pub fn human_report(res: &Results) -> String {
    let mut out = String::new();
    writeln!(out, "program: {}", res.program).unwrap();
    if res.normalized {
        writeln!(out, "posterior: normalized (evidence {})", approx(&res.evidence)).unwrap();
    } else {
        writeln!(out, "posterior: unnormalized (mass {})", approx(&res.mass)).unwrap();
    }
    for q in &res.queries {
        match q {
            QueryResult::Point { target, value } => {
                writeln!(out, "{target} = {}", approx(value)).unwrap();
            }
            QueryResult::Expectation { target, value } => {
                writeln!(out, "E[{target}] = {}", approx(value)).unwrap();
            }
            QueryResult::Marginal {
                target,
                max_degree,
                table,
            } => {
                writeln!(out, "marginal {target} (degrees 0..={max_degree}):").unwrap();
                for (v, p) in &table.entries {
                    writeln!(out, "  {v}: {}", approx(p)).unwrap();
                }
                writeln!(out, "  residual: {}", approx(&table.residual)).unwrap();
            }
        }
    }
    if let Some(o) = &res.oracle {
        let verdict = if o.passed() { "agrees" } else { "DISAGREES" };
        writeln!(
            out,
            "oracle check (epsilon {}): {verdict} on {} valuations; oracle residual {}",
            o.epsilon, o.checked, o.residual
        )
        .unwrap();
        for v in &o.violations {
            writeln!(out, "  violation at {{{}}}: pga {} vs oracle {}", v.valuation, v.pga, v.oracle).unwrap();
        }
        if let Some(excess) = &o.unlisted_excess {
            writeln!(out, "  pga mass outside the oracle table: {excess}").unwrap();
        }
    }
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    program: &'a str,
    normalized: bool,
    mass: String,
    queries: Vec<JsonQuery>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<JsonOracle>,
}

#[derive(Serialize)]
struct JsonQuery {
    kind: &'static str,
    target: String,
    value: serde_json::Value,
    residual: String,
}

#[derive(Serialize)]
struct JsonEntry {
    valuation: BTreeMap<String, u64>,
    probability: String,
}

#[derive(Serialize)]
struct JsonViolation {
    valuation: BTreeMap<String, u64>,
    pga: String,
    oracle: String,
}

#[derive(Serialize)]
struct JsonOracle {
    epsilon: String,
    passed: bool,
    checked: usize,
    residual: String,
    rejected: String,
    violations: Vec<JsonViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unlisted_excess: Option<String>,
}

fn valuation_map(v: &Valuation) -> BTreeMap<String, u64> {
    v.iter().map(|(x, n)| (x.to_string(), n)).collect()
}

/// Single JSON object; rationals are strings so no precision is lost.
pub fn json_report(res: &Results) -> String {
    let queries = res
        .queries
        .iter()
        .map(|q| match q {
            QueryResult::Point { target, value } => JsonQuery {
                kind: "point",
                target: target.clone(),
                value: serde_json::Value::String(value.to_string()),
                residual: "0".into(),
            },
            QueryResult::Expectation { target, value } => JsonQuery {
                kind: "expectation",
                target: target.clone(),
                value: serde_json::Value::String(value.to_string()),
                residual: "0".into(),
            },
            QueryResult::Marginal { target, table, .. } => {
                let entries: Vec<JsonEntry> = table
                    .entries
                    .iter()
                    .map(|(v, p)| JsonEntry {
                        valuation: valuation_map(v),
                        probability: p.to_string(),
                    })
                    .collect();
                JsonQuery {
                    kind: "marginal",
                    target: target.clone(),
                    value: serde_json::to_value(entries).expect("serializable"),
                    residual: table.residual.to_string(),
                }
            }
        })
        .collect();
    let oracle = res.oracle.as_ref().map(|o| JsonOracle {
        epsilon: o.epsilon.to_string(),
        passed: o.passed(),
        checked: o.checked,
        residual: o.residual.to_string(),
        rejected: o.rejected.to_string(),
        violations: o
            .violations
            .iter()
            .map(|v| JsonViolation {
                valuation: valuation_map(&v.valuation),
                pga: v.pga.to_string(),
                oracle: v.oracle.to_string(),
            })
            .collect(),
        unlisted_excess: o.unlisted_excess.as_ref().map(|r| r.to_string()),
    });
    let report = JsonReport {
        program: &res.program,
        normalized: res.normalized,
        mass: res.mass.to_string(),
        queries,
        oracle,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("serializable");
    s.push('\n');
    s
}

/// CSV with header `valuation,probability`. Marginal entries are keyed
/// `X=3`; residuals, point queries and expectations get one row each.
pub fn csv_report(res: &Results) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["valuation", "probability"]).unwrap();
    for q in &res.queries {
        match q {
            QueryResult::Point { target, value } => {
                w.write_record([target.as_str(), &value.to_string()]).unwrap();
            }
            QueryResult::Expectation { target, value } => {
                w.write_record([&format!("E[{target}]"), &value.to_string()]).unwrap();
            }
            QueryResult::Marginal { target, table, .. } => {
                for (v, p) in &table.entries {
                    w.write_record([&v.to_string(), &p.to_string()]).unwrap();
                }
                w.write_record([&format!("residual({target})"), &table.residual.to_string()])
                    .unwrap();
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}
