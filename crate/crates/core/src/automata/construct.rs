use num_traits::{One, Signed, Zero};

use super::{Label, Pga, VarId};
use crate::error::{PgaError, Result};
use crate::rational::Rational;

/// Point mass `var = n`: a chain of `n + 1` states, PGF `var^n`.
pub fn dirac_pga(var: &VarId, n: u64) -> Pga {
    let mut a = Pga::new();
    let mut prev = a.add_state(Rational::one(), Rational::zero());
    for _ in 0..n {
        let next = a.add_state(Rational::zero(), Rational::zero());
        a.add_transition(prev, Label::with_var(Rational::one(), var), next);
        prev = next;
    }
    a.set_final(prev, Rational::one());
    a
}

/// Coin flip: `(1 - p) + p·var`, built as a weighted union of two Dirac automata.
pub fn bernoulli_pga(var: &VarId, p: &Rational) -> Result<Pga> {
    if p.is_negative() || *p > Rational::one() {
        return Err(PgaError::InvalidParameter {
            what: "bernoulli",
            value: p.clone(),
            reason: "must lie in [0, 1]",
        });
    }
    Ok(weighted_union(
        &dirac_pga(var, 0),
        &dirac_pga(var, 1),
        &(Rational::one() - p),
        p,
    ))
}

/// Geometric distribution `Σ (1-p)·pⁱ·varⁱ`: one state with a `p·var` self-loop.
pub fn geometric_pga(var: &VarId, p: &Rational) -> Result<Pga> {
    if p.is_negative() || *p >= Rational::one() {
        return Err(PgaError::InvalidParameter {
            what: "geometric",
            value: p.clone(),
            reason: "must lie in [0, 1)",
        });
    }
    let mut a = Pga::new();
    let q = a.add_state(Rational::one(), Rational::one() - p);
    a.add_transition(q, Label::with_var(p.clone(), var), q);
    Ok(a)
}

/// Disjoint union with the initial weights of `a` scaled by `wa` and those
/// of `b` by `wb`; denotes `wa·⟦a⟧ + wb·⟦b⟧`.
pub fn weighted_union(a: &Pga, b: &Pga, wa: &Rational, wb: &Rational) -> Pga {
    debug_assert!(!wa.is_negative() && !wb.is_negative());
    let mut out = Pga::new();
    out.embed(a, Some(wa), true);
    out.embed(b, Some(wb), true);
    out
}

/// Sequential composition; denotes `⟦a⟧·⟦b⟧`.
///
/// Every final state of `a` is linked to every initial state of `b` by a
/// scalar bridge carrying the product of the two weights.
pub fn concatenate(a: &Pga, b: &Pga) -> Pga {
    let mut out = Pga::new();
    out.embed(a, Some(&Rational::one()), false);
    let offset = out.embed(b, None, true);
    for (qa, f) in a.final_weights().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        for (qb, i) in b.initial_weights().iter().enumerate() {
            if i.is_zero() {
                continue;
            }
            out.add_transition(qa, Label::scalar(f * i), qb + offset);
        }
    }
    out
}

/// Replaces every label `r·x` by the scalar `r`, evaluating the series at `x = 1`.
pub fn substitute_to_one(a: &Pga, x: &VarId) -> Pga {
    if !a.mentions(x) {
        return a.clone();
    }
    let mut out = Pga::new();
    for q in 0..a.num_states() {
        out.add_state(a.initial(q).clone(), a.final_weight(q).clone());
    }
    for t in a.transitions() {
        let var = t.var.filter(|v| *v != x).cloned();
        out.add_transition(
            t.source,
            Label {
                weight: t.weight.clone(),
                var,
            },
            t.target,
        );
    }
    out
}

/// Substitutes `src ↦ src·dst` by splitting every `src`-labelled transition
/// through a fresh state carrying a `1·dst` step. `dst` must not occur in `a`.
pub fn duplicate_var(a: &Pga, src: &VarId, dst: &VarId) -> Result<Pga> {
    if a.mentions(dst) {
        return Err(PgaError::VariableOccurs(dst.clone()));
    }
    let mut out = Pga::new();
    for q in 0..a.num_states() {
        out.add_state(a.initial(q).clone(), a.final_weight(q).clone());
    }
    for t in a.transitions() {
        if t.var == Some(src) {
            let mid = out.add_state(Rational::zero(), Rational::zero());
            out.add_transition(t.source, t.label(), mid);
            out.add_transition(mid, Label::with_var(Rational::one(), dst), t.target);
        } else {
            out.add_transition(t.source, t.label(), t.target);
        }
    }
    Ok(out)
}

/// Multiplies every initial weight by `c`; denotes `c·⟦a⟧`.
pub fn scale_initial(a: &Pga, c: &Rational) -> Pga {
    debug_assert!(!c.is_negative());
    let mut out = a.clone();
    for q in 0..out.num_states() {
        let w = out.initial(q) * c;
        out.set_initial(q, w);
    }
    out
}
