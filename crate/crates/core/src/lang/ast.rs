use std::collections::BTreeSet;
use std::fmt;

use crate::automata::VarId;
use crate::guard::Guard;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Skip,
    Assign(VarId, Rhs),
    IfElse(Guard, Program, Program),
    Observe(Guard),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rhs {
    Const(u64),
    Var(VarId),
    VarPlus(VarId, u64),
    Bernoulli(Rational),
    Geometric(Rational),
}

impl Program {
    pub fn new(stmts: Vec<Stmt>) -> Self {
        Program { stmts }
    }

    /// Number of `geometric` sampling sites, counted syntactically.
    pub fn geometric_sites(&self) -> usize {
        self.stmts
            .iter()
            .map(|s| match s {
                Stmt::Assign(_, Rhs::Geometric(_)) => 1,
                Stmt::IfElse(_, a, b) => a.geometric_sites() + b.geometric_sites(),
                _ => 0,
            })
            .sum()
    }

    pub fn has_observe(&self) -> bool {
        self.stmts.iter().any(|s| match s {
            Stmt::Observe(_) => true,
            Stmt::IfElse(_, a, b) => a.has_observe() || b.has_observe(),
            _ => false,
        })
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "    ".repeat(depth);
        for (i, s) in self.stmts.iter().enumerate() {
            f.write_str(&pad)?;
            match s {
                Stmt::Skip => f.write_str("skip")?,
                Stmt::Assign(x, rhs) => write!(f, "{x} := {rhs}")?,
                Stmt::Observe(g) => write!(f, "observe({g})")?,
                Stmt::IfElse(g, a, b) => {
                    writeln!(f, "if ({g}) {{")?;
                    a.write_indented(f, depth + 1)?;
                    writeln!(f, "{pad}}} else {{")?;
                    b.write_indented(f, depth + 1)?;
                    write!(f, "{pad}}}")?;
                }
            }
            if i + 1 < self.stmts.len() {
                f.write_str(";")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// Pretty-prints in the concrete syntax accepted by [`crate::lang::parse`].
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Const(n) => write!(f, "{n}"),
            Rhs::Var(y) => write!(f, "{y}"),
            Rhs::VarPlus(y, n) => write!(f, "{y} + {n}"),
            Rhs::Bernoulli(p) => write!(f, "bernoulli({p})"),
            Rhs::Geometric(p) => write!(f, "geometric({p})"),
        }
    }
}

/// Every variable read or written in `p`, in lexicographic order.
pub fn free_vars(p: &Program) -> BTreeSet<VarId> {
    let mut out = BTreeSet::new();
    collect(p, &mut out);
    out
}

fn collect(p: &Program, out: &mut BTreeSet<VarId>) {
    for s in &p.stmts {
        match s {
            Stmt::Skip => {}
            Stmt::Assign(x, rhs) => {
                out.insert(x.clone());
                if let Rhs::Var(y) | Rhs::VarPlus(y, _) = rhs {
                    out.insert(y.clone());
                }
            }
            Stmt::IfElse(g, a, b) => {
                out.extend(g.vars());
                collect(a, out);
                collect(b, out);
            }
            Stmt::Observe(g) => out.extend(g.vars()),
        }
    }
}
