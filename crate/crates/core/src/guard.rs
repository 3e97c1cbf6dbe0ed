//! Rectangular guards: boolean combinations of `var ⋈ constant` atoms.

use std::collections::BTreeMap;
use std::fmt;

use crate::automata::VarId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn holds(self, lhs: u64, rhs: u64) -> bool {
        match self {
            Cmp::Eq => lhs == rhs,
            Cmp::Ne => lhs != rhs,
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }
}

/// A guard compares program variables against natural constants only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Guard {
    True,
    Atom(VarId, Cmp, u64),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

impl Guard {
    pub fn atom(var: impl Into<VarId>, cmp: Cmp, constant: u64) -> Guard {
        Guard::Atom(var.into(), cmp, constant)
    }

    pub fn negate(self) -> Guard {
        Guard::Not(Box::new(self))
    }

    pub fn and(self, other: Guard) -> Guard {
        Guard::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Guard) -> Guard {
        Guard::Or(Box::new(self), Box::new(other))
    }

    /// Evaluates the guard; `value` supplies the current value of each variable.
    pub fn eval(&self, value: &impl Fn(&VarId) -> u64) -> bool {
        match self {
            Guard::True => true,
            Guard::Atom(v, cmp, c) => cmp.holds(value(v), *c),
            Guard::Not(g) => !g.eval(value),
            Guard::And(a, b) => a.eval(value) && b.eval(value),
            Guard::Or(a, b) => a.eval(value) || b.eval(value),
        }
    }

    /// Largest constant each variable is compared against.
    pub fn bounds(&self) -> BTreeMap<VarId, u64> {
        let mut out = BTreeMap::new();
        self.collect_bounds(&mut out);
        out
    }

    fn collect_bounds(&self, out: &mut BTreeMap<VarId, u64>) {
        match self {
            Guard::True => {}
            Guard::Atom(v, _, c) => {
                let slot = out.entry(v.clone()).or_insert(0);
                *slot = (*slot).max(*c);
            }
            Guard::Not(g) => g.collect_bounds(out),
            Guard::And(a, b) | Guard::Or(a, b) => {
                a.collect_bounds(out);
                b.collect_bounds(out);
            }
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        self.bounds().into_keys()
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

// Printing mirrors the parser: `&&` binds tighter than `||`, both associate
// to the left, and `!` applies to a single atom.
impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::True => f.write_str("true"),
            Guard::Atom(v, cmp, c) => write!(f, "{v} {} {c}", cmp.symbol()),
            Guard::Not(g) => {
                f.write_str("!")?;
                g.fmt_operand(f, matches!(**g, Guard::And(..) | Guard::Or(..)))
            }
            Guard::And(a, b) => {
                a.fmt_operand(f, matches!(**a, Guard::Or(..)))?;
                f.write_str(" && ")?;
                b.fmt_operand(f, matches!(**b, Guard::Or(..) | Guard::And(..)))
            }
            Guard::Or(a, b) => {
                a.fmt_operand(f, false)?;
                f.write_str(" || ")?;
                b.fmt_operand(f, matches!(**b, Guard::Or(..)))
            }
        }
    }
}
