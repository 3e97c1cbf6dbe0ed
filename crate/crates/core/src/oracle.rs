//! Reference semantics: exhaustive enumeration of program executions.
//!
//! Runs the small-step semantics over configurations `(continuation,
//! valuation, mass)`, branching at every sampling statement. Geometric
//! samples are expanded only until the remaining tail is below the budget;
//! the truncated mass is accounted for exactly in the residual.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::analysis::{joint_coefficients, total_mass, DistTable, Valuation};
use crate::automata::{Pga, VarId};
use crate::error::{PgaError, Result};
use crate::lang::{free_vars, Program, Rhs, Stmt};
use crate::rational::Rational;

/// Outcome of [`explore`]: the unnormalized table plus the mass that
/// observations rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exploration {
    pub table: DistTable,
    pub rejected: Rational,
    pub terminal_paths: usize,
}

struct Config<'p> {
    /// Remaining statements, next one last.
    stack: Vec<&'p Stmt>,
    valuation: BTreeMap<VarId, u64>,
    mass: Rational,
}

/// Unnormalized output distribution of `p`, truncated so that the residual
/// stays below `epsilon`.
pub fn enumerate(p: &Program, epsilon: &Rational) -> Result<DistTable> {
    explore(p, epsilon).map(|e| e.table)
}

pub fn explore(p: &Program, epsilon: &Rational) -> Result<Exploration> {
    if !epsilon.is_positive() {
        return Err(PgaError::InvalidParameter {
            what: "epsilon",
            value: epsilon.clone(),
            reason: "must be positive",
        });
    }
    let vars: BTreeSet<VarId> = free_vars(p);
    let sites = p.geometric_sites().max(1);
    let budget = epsilon / Rational::from_integer(sites.into());

    let mut entries: BTreeMap<Valuation, Rational> = BTreeMap::new();
    let mut residual = Rational::zero();
    let mut rejected = Rational::zero();
    let mut terminal_paths = 0usize;

    let mut work = vec![Config {
        stack: p.stmts.iter().rev().collect(),
        valuation: vars.iter().map(|v| (v.clone(), 0)).collect(),
        mass: Rational::one(),
    }];

    while let Some(mut cfg) = work.pop() {
        let Some(stmt) = cfg.stack.pop() else {
            terminal_paths += 1;
            let key = Valuation::from_pairs(cfg.valuation);
            *entries.entry(key).or_insert_with(Rational::zero) += cfg.mass;
            continue;
        };
        match stmt {
            Stmt::Skip => work.push(cfg),
            Stmt::Observe(g) => {
                if g.eval(&|v: &VarId| cfg.valuation.get(v).copied().unwrap_or(0)) {
                    work.push(cfg);
                } else {
                    rejected += cfg.mass;
                }
            }
            Stmt::IfElse(g, then, otherwise) => {
                let taken = g.eval(&|v: &VarId| cfg.valuation.get(v).copied().unwrap_or(0));
                let branch = if taken { then } else { otherwise };
                cfg.stack.extend(branch.stmts.iter().rev());
                work.push(cfg);
            }
            Stmt::Assign(x, rhs) => {
                let read = |y: &VarId| cfg.valuation.get(y).copied().unwrap_or(0);
                match rhs {
                    Rhs::Const(n) => {
                        cfg.valuation.insert(x.clone(), *n);
                        work.push(cfg);
                    }
                    Rhs::Var(y) => {
                        let n = read(y);
                        cfg.valuation.insert(x.clone(), n);
                        work.push(cfg);
                    }
                    Rhs::VarPlus(y, k) => {
                        let n = read(y) + k;
                        cfg.valuation.insert(x.clone(), n);
                        work.push(cfg);
                    }
                    Rhs::Bernoulli(p) => {
                        let outcomes = [(1, p.clone()), (0, Rational::one() - p)];
                        for (value, prob) in outcomes {
                            if prob.is_zero() {
                                continue;
                            }
                            let mut valuation = cfg.valuation.clone();
                            valuation.insert(x.clone(), value);
                            work.push(Config {
                                stack: cfg.stack.clone(),
                                valuation,
                                mass: &cfg.mass * prob,
                            });
                        }
                    }
                    Rhs::Geometric(q) => {
                        // child i has mass m·(1-q)·qⁱ; the tail beyond i is m·q^(i+1)
                        let stop = Rational::one() - q;
                        let mut power = Rational::one();
                        let mut i = 0u64;
                        loop {
                            let mut valuation = cfg.valuation.clone();
                            valuation.insert(x.clone(), i);
                            work.push(Config {
                                stack: cfg.stack.clone(),
                                valuation,
                                mass: &cfg.mass * &stop * &power,
                            });
                            power *= q;
                            if power < budget {
                                break;
                            }
                            i += 1;
                        }
                        residual += &cfg.mass * power;
                    }
                }
            }
        }
    }

    Ok(Exploration {
        table: DistTable { entries, residual },
        rejected,
        terminal_paths,
    })
}

/// One valuation where the two tables disagree by more than allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub valuation: Valuation,
    pub pga: Rational,
    pub oracle: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComparisonReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
    /// Set by [`cross_check`] when the automaton puts more mass outside the
    /// oracle's table than the oracle's residual allows.
    pub unlisted_excess: Option<Rational>,
}

impl ComparisonReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty() && self.unlisted_excess.is_none()
    }
}

/// Checks `|pga - oracle| ≤ oracle.residual + tol` on every valuation listed in
/// either table; unlisted valuations count as zero, as do variables missing
/// from a valuation.
pub fn compare(pga_table: &DistTable, oracle_table: &DistTable, tol: &Rational) -> ComparisonReport {
    let canonical = |t: &DistTable| -> BTreeMap<Valuation, Rational> {
        let mut out = BTreeMap::new();
        for (v, p) in &t.entries {
            *out.entry(v.without_zeros()).or_insert_with(Rational::zero) += p;
        }
        out
    };
    let lhs = canonical(pga_table);
    let rhs = canonical(oracle_table);
    let allowed = &oracle_table.residual + tol;
    let keys: BTreeSet<&Valuation> = lhs.keys().chain(rhs.keys()).collect();
    let zero = Rational::zero();
    let mut report = ComparisonReport::default();
    for key in keys {
        report.checked += 1;
        let a = lhs.get(key).unwrap_or(&zero);
        let b = rhs.get(key).unwrap_or(&zero);
        if (a - b).abs() > allowed {
            report.violations.push(Violation {
                valuation: key.clone(),
                pga: a.clone(),
                oracle: b.clone(),
            });
        }
    }
    report
}

/// Compares an automaton against an oracle table without tabulating the
/// automaton beyond the oracle's support.
///
/// Coefficients are extracted on the smallest box containing every oracle
/// valuation. Mass the automaton places outside that box cannot appear in the
/// oracle table at all, so it must itself be covered by the oracle residual.
pub fn cross_check(a: &Pga, oracle_table: &DistTable, tol: &Rational) -> Result<ComparisonReport> {
    let mut bounds: BTreeMap<VarId, u64> = BTreeMap::new();
    for v in oracle_table.entries.keys() {
        for (x, n) in v.iter() {
            let slot = bounds.entry(x.clone()).or_insert(0);
            *slot = (*slot).max(n);
        }
    }
    let vars: Vec<VarId> = bounds.keys().cloned().collect();
    let limits: Vec<u64> = bounds.values().copied().collect();
    let coeffs = joint_coefficients(a, &vars, &limits)?;
    let entries: BTreeMap<Valuation, Rational> = coeffs
        .into_iter()
        .map(|(point, p)| (Valuation::from_pairs(vars.iter().cloned().zip(point)), p))
        .collect();
    let listed: Rational = entries.values().sum();
    let pga_table = DistTable {
        entries,
        residual: total_mass(a)? - listed,
    };
    let mut report = compare(&pga_table, oracle_table, tol);
    if pga_table.residual > &oracle_table.residual + tol {
        report.unlisted_excess = Some(pga_table.residual);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;
    use crate::rational::{int, rat};

    fn val(pairs: &[(&str, u64)]) -> Valuation {
        Valuation::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn piranha_is_exhaustive() {
        let p = parse("P := bernoulli(1/2); if (P = 1) { R := 1 } else { R := bernoulli(1/2) }; observe(R = 1)").unwrap();
        let e = explore(&p, &rat(1, 10)).unwrap();
        assert_eq!(e.table.residual, int(0));
        assert_eq!(e.table.entries.len(), 2);
        assert_eq!(e.table.get(&val(&[("P", 1), ("R", 1)])), rat(1, 2));
        assert_eq!(e.table.get(&val(&[("P", 0), ("R", 1)])), rat(1, 4));
        assert_eq!(e.rejected, rat(1, 4));
    }

    #[test]
    fn geometric_truncation() {
        let p = parse("X := geometric(1/2)").unwrap();
        let t = enumerate(&p, &rat(1, 1000)).unwrap();
        assert_eq!(t.entries.len(), 10);
        for i in 0..10u64 {
            assert_eq!(t.get(&val(&[("X", i)])), rat(1, 2i64.pow(i as u32 + 1)));
        }
        assert_eq!(t.residual, rat(1, 1024));
        assert_eq!(t.mass() + &t.residual, int(1));
    }

    #[test]
    fn skip_and_bad_epsilon() {
        let t = enumerate(&parse("skip").unwrap(), &rat(1, 2)).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.get(&Valuation::new()), int(1));
        assert!(enumerate(&parse("skip").unwrap(), &int(0)).is_err());
    }

    #[test]
    fn conservation_and_refinement() {
        let p = parse("X := geometric(2/3); Y := geometric(1/4); if (X < 2) { observe(Y != 1) } else { Z := bernoulli(1/3) }").unwrap();
        let coarse = explore(&p, &rat(1, 100)).unwrap();
        let fine = explore(&p, &rat(1, 10_000)).unwrap();
        for e in [&coarse, &fine] {
            assert_eq!(e.table.mass() + &e.table.residual + &e.rejected, int(1));
            assert!(e.table.residual < rat(1, 100));
        }
        assert!(fine.table.residual <= coarse.table.residual);
        for (v, p) in &coarse.table.entries {
            assert!(fine.table.get(v) >= *p);
        }
    }

    #[test]
    fn comparison() {
        let a = DistTable {
            entries: [(val(&[("X", 0)]), rat(1, 2)), (val(&[("X", 1)]), rat(1, 2))].into(),
            residual: int(0),
        };
        assert!(compare(&a, &a, &int(0)).is_ok());
        let mut b = a.clone();
        b.entries.insert(val(&[("X", 1)]), rat(3, 8));
        let r = compare(&b, &a, &int(0));
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].pga, rat(3, 8));
        assert!(compare(&b, &a, &rat(1, 8)).is_ok());
        // explicit zeros and missing variables are interchangeable
        let c = DistTable {
            entries: [(val(&[]), rat(1, 2)), (val(&[("X", 1), ("Y", 0)]), rat(1, 2))].into(),
            residual: int(0),
        };
        assert!(compare(&c, &a, &int(0)).is_ok());
    }

    #[test]
    fn cross_check_geometric() {
        use crate::semantics::{infer, TransformerConfig};
        let p = parse("X := geometric(1/2); observe(X != 1)").unwrap();
        let a = infer(&p, &TransformerConfig::default()).unwrap();
        let t = enumerate(&p, &rat(1, 1000)).unwrap();
        let r = cross_check(&a, &t, &int(0)).unwrap();
        assert!(r.is_ok(), "{r:?}");
        assert_eq!(r.checked, 9);

        // A wrong automaton is caught, both inside and outside the table.
        let wrong = infer(&parse("X := geometric(1/2)").unwrap(), &TransformerConfig::default()).unwrap();
        let r = cross_check(&wrong, &t, &int(0)).unwrap();
        assert_eq!(r.violations.len(), 1);
        let shifted = infer(&parse("X := geometric(1/2); X := X + 20").unwrap(), &TransformerConfig::default()).unwrap();
        let r = cross_check(&shifted, &t, &int(0)).unwrap();
        assert!(r.unlisted_excess.is_some());
    }
}
