//! Programs as PGA transformers.
//!
//! Each statement maps the automaton of its input distribution to the
//! automaton of its output distribution; a program folds its statements
//! left to right starting from the point mass at the all-zero valuation.

use std::collections::BTreeSet;

use crate::analysis::normalize;
use crate::automata::{
    bernoulli_pga, bisim_minimize, concatenate, dirac_pga, duplicate_var, geometric_pga,
    guard_filter, substitute_to_one, trim, weighted_union, Pga, VarId,
};
use crate::error::Result;
use crate::lang::{free_vars, Program, Rhs, Stmt};
use crate::rational::Rational;
use num_traits::One;

/// Controls the cleanup passes applied after every statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformerConfig {
    pub auto_trim: bool,
    pub minimize: bool,
}

impl Default for TransformerConfig {
    fn default() -> Self {
        TransformerConfig {
            auto_trim: true,
            minimize: false,
        }
    }
}

impl TransformerConfig {
    pub fn raw() -> Self {
        TransformerConfig {
            auto_trim: false,
            minimize: false,
        }
    }
}

/// The prior: every variable is zero with probability one.
pub fn initial_pga(_vars: &BTreeSet<VarId>) -> Pga {
    Pga::unit()
}

pub fn transform(stmt: &Stmt, a: &Pga, cfg: &TransformerConfig) -> Result<Pga> {
    let out = match stmt {
        Stmt::Skip => return Ok(a.clone()),
        Stmt::Assign(x, rhs) => assign(x, rhs, a)?,
        Stmt::IfElse(g, then, otherwise) => {
            let taken = transform_all(then, &guard_filter(a, g), cfg)?;
            let skipped = transform_all(otherwise, &guard_filter(a, &g.clone().negate()), cfg)?;
            let one = Rational::one();
            weighted_union(&taken, &skipped, &one, &one)
        }
        Stmt::Observe(g) => guard_filter(a, g),
    };
    Ok(cleanup(out, cfg))
}

fn assign(x: &VarId, rhs: &Rhs, a: &Pga) -> Result<Pga> {
    Ok(match rhs {
        Rhs::Const(n) => concatenate(&substitute_to_one(a, x), &dirac_pga(x, *n)),
        Rhs::Var(y) if y == x => a.clone(),
        Rhs::VarPlus(y, n) if y == x => concatenate(a, &dirac_pga(x, *n)),
        Rhs::Var(y) => duplicate_var(&substitute_to_one(a, x), y, x)?,
        Rhs::VarPlus(y, n) => concatenate(
            &duplicate_var(&substitute_to_one(a, x), y, x)?,
            &dirac_pga(x, *n),
        ),
        Rhs::Bernoulli(p) => concatenate(&substitute_to_one(a, x), &bernoulli_pga(x, p)?),
        Rhs::Geometric(p) => concatenate(&substitute_to_one(a, x), &geometric_pga(x, p)?),
    })
}

fn cleanup(mut a: Pga, cfg: &TransformerConfig) -> Pga {
    if cfg.auto_trim {
        a = trim(&a);
    }
    if cfg.minimize {
        a = bisim_minimize(&a);
    }
    a
}

/// Folds [`transform`] over a statement list.
pub fn transform_all(p: &Program, a: &Pga, cfg: &TransformerConfig) -> Result<Pga> {
    p.stmts
        .iter()
        .try_fold(a.clone(), |acc, s| transform(s, &acc, cfg))
}

/// Unnormalized posterior of `p`.
pub fn infer(p: &Program, cfg: &TransformerConfig) -> Result<Pga> {
    transform_all(p, &initial_pga(&free_vars(p)), cfg)
}

/// Normalized posterior of `p`; fails with `ZeroMass` if every run is rejected.
pub fn posterior(p: &Program, cfg: &TransformerConfig) -> Result<Pga> {
    normalize(&infer(p, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{coefficient, total_mass, Valuation};
    use crate::error::PgaError;
    use crate::guard::{Cmp, Guard};
    use crate::lang::parse;
    use crate::rational::{int, rat};

    fn coef(a: &Pga, v: &[(&str, u64)]) -> Rational {
        coefficient(a, &Valuation::from_pairs(v.iter().copied())).unwrap()
    }

    const PIRANHA: &str = "P := bernoulli(1/2); if (P = 1) { R := 1 } else { R := bernoulli(1/2) }; observe(R = 1)";

    #[test]
    fn initial_is_point_mass_at_zero() {
        let vars: BTreeSet<VarId> = ["P", "R"].into_iter().map(VarId::from).collect();
        let a = initial_pga(&vars);
        assert_eq!(total_mass(&a).unwrap(), int(1));
        assert_eq!(coef(&a, &[("P", 0), ("R", 0)]), int(1));
        assert_eq!(coef(&initial_pga(&BTreeSet::new()), &[]), int(1));
    }

    #[test]
    fn constant_assignment_over_geometric_prior() {
        let x = VarId::from("X");
        let prior = geometric_pga(&x, &rat(1, 2)).unwrap();
        let out = transform(&Stmt::Assign(x, Rhs::Const(1)), &prior, &TransformerConfig::default()).unwrap();
        assert_eq!(coef(&out, &[("X", 1)]), int(1));
        assert_eq!(coef(&out, &[("X", 0)]), int(0));
        assert_eq!(coef(&out, &[("X", 2)]), int(0));
        assert_eq!(transform(&Stmt::Skip, &prior, &TransformerConfig::default()).unwrap(), prior);
    }

    #[test]
    fn observe_filters() {
        let x = VarId::from("X");
        let prior = bernoulli_pga(&x, &rat(1, 2)).unwrap();
        let out = transform(&Stmt::Observe(Guard::atom("X", Cmp::Eq, 1)), &prior, &TransformerConfig::default()).unwrap();
        assert_eq!(total_mass(&out).unwrap(), rat(1, 2));
        assert_eq!(coef(&out, &[("X", 1)]), rat(1, 2));
    }

    #[test]
    fn piranha() {
        let p = parse(PIRANHA).unwrap();
        let a = infer(&p, &TransformerConfig::default()).unwrap();
        assert_eq!(total_mass(&a).unwrap(), rat(3, 4));
        assert_eq!(coef(&a, &[("P", 1), ("R", 1)]), rat(1, 2));
        let post = posterior(&p, &TransformerConfig::default()).unwrap();
        assert_eq!(coef(&post, &[("P", 1), ("R", 1)]), rat(2, 3));
        assert_eq!(coef(&post, &[("P", 1)]), rat(2, 3));
        assert_eq!(coef(&post, &[("P", 0)]), rat(1, 3));
        assert_eq!(total_mass(&post).unwrap(), int(1));
    }

    #[test]
    fn geometric_program_matches_construction() {
        let a = infer(&parse("X := geometric(1/2)").unwrap(), &TransformerConfig::default()).unwrap();
        let g = geometric_pga(&VarId::from("X"), &rat(1, 2)).unwrap();
        for n in 0..8 {
            assert_eq!(coef(&a, &[("X", n)]), coef(&g, &[("X", n)]));
        }
        let s = infer(&parse("skip").unwrap(), &TransformerConfig::default()).unwrap();
        assert_eq!(coef(&s, &[]), int(1));
    }

    #[test]
    fn variable_assignments() {
        let cfg = TransformerConfig::default();
        let a = infer(&parse("Y := bernoulli(1/3); X := Y + 2; Y := Y + 1").unwrap(), &cfg).unwrap();
        assert_eq!(coef(&a, &[("X", 2), ("Y", 1)]), rat(2, 3));
        assert_eq!(coef(&a, &[("X", 3), ("Y", 2)]), rat(1, 3));
        let a = infer(&parse("X := 4; X := X; Y := X; X := 1").unwrap(), &cfg).unwrap();
        assert_eq!(coef(&a, &[("X", 1), ("Y", 4)]), int(1));
        // self-copy after an increment keeps the value
        let a = infer(&parse("X := geometric(1/2); Y := X; Y := Y + 1").unwrap(), &cfg).unwrap();
        assert_eq!(coef(&a, &[("X", 2), ("Y", 3)]), rat(1, 8));
        assert_eq!(coef(&a, &[("X", 2), ("Y", 2)]), int(0));
    }

    #[test]
    fn posterior_without_observe_is_unchanged() {
        let p = parse("X := geometric(1/3); Y := bernoulli(1/4)").unwrap();
        let cfg = TransformerConfig::default();
        let a = infer(&p, &cfg).unwrap();
        let b = posterior(&p, &cfg).unwrap();
        assert_eq!(total_mass(&a).unwrap(), int(1));
        for n in 0..4 {
            assert_eq!(coef(&a, &[("X", n), ("Y", 1)]), coef(&b, &[("X", n), ("Y", 1)]));
        }
    }

    #[test]
    fn contradiction_has_zero_mass() {
        let p = parse("X := 0; observe(X = 1)").unwrap();
        assert_eq!(posterior(&p, &TransformerConfig::default()), Err(PgaError::ZeroMass));
    }
}
