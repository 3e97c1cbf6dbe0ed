//! Probability generating automata and the constructions the transformer
//! semantics is assembled from.
//!
//! A [`Pga`] is a weighted automaton `(Q, M, I, F)` whose transition labels are
//! restricted to `r` or `r·X` with `r` a nonnegative rational and `X` a program
//! variable. Its meaning is the formal power series `I·M*·F`.

mod construct;
mod minimize;
mod product;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{PgaError, Result};
use crate::rational::Rational;

pub use construct::{
    bernoulli_pga, concatenate, dirac_pga, duplicate_var, geometric_pga, scale_initial,
    substitute_to_one, weighted_union,
};
pub use minimize::{bisim_minimize, trim};
pub use product::guard_filter;

/// A program variable. Cheap to clone; compares by name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(Arc<str>);

impl VarId {
    pub fn new(name: &str) -> Self {
        VarId(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for VarId {
    fn from(s: &str) -> Self {
        VarId::new(s)
    }
}

impl From<String> for VarId {
    fn from(s: String) -> Self {
        VarId(Arc::from(s))
    }
}

impl From<&VarId> for VarId {
    fn from(v: &VarId) -> Self {
        v.clone()
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Transition weight: the scalar `r`, or `r·X` when `var` is present.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Label {
    pub weight: Rational,
    pub var: Option<VarId>,
}

impl Label {
    pub fn scalar(weight: Rational) -> Self {
        Label { weight, var: None }
    }

    pub fn with_var(weight: Rational, var: impl Into<VarId>) -> Self {
        Label {
            weight,
            var: Some(var.into()),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.var {
            Some(v) => write!(f, "{}·{}", self.weight, v),
            None => write!(f, "{}", self.weight),
        }
    }
}

/// Borrowed view of one (merged) transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition<'a> {
    pub source: usize,
    pub target: usize,
    pub var: Option<&'a VarId>,
    pub weight: &'a Rational,
}

impl Transition<'_> {
    pub fn label(&self) -> Label {
        Label {
            weight: self.weight.clone(),
            var: self.var.cloned(),
        }
    }
}

type EdgeKey = (usize, Option<VarId>, usize);

/// A weighted automaton over power series with rational coefficients.
///
/// Parallel transitions with the same source, target and variable tag are
/// stored merged (weights summed); zero-weight transitions are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pga {
    initial: Vec<Rational>,
    final_weights: Vec<Rational>,
    edges: BTreeMap<EdgeKey, Rational>,
}

impl Default for Pga {
    fn default() -> Self {
        Pga::new()
    }
}

impl Pga {
    /// An automaton without states; add them with [`Pga::add_state`].
    pub fn new() -> Self {
        Pga {
            initial: Vec::new(),
            final_weights: Vec::new(),
            edges: BTreeMap::new(),
        }
    }

    /// Single state with initial and final weight one: the series `1`.
    pub fn unit() -> Self {
        let mut a = Pga::new();
        a.add_state(Rational::one(), Rational::one());
        a
    }

    pub fn add_state(&mut self, initial: Rational, final_weight: Rational) -> usize {
        debug_assert!(!initial.is_negative() && !final_weight.is_negative());
        self.initial.push(initial);
        self.final_weights.push(final_weight);
        self.initial.len() - 1
    }

    pub fn num_states(&self) -> usize {
        self.initial.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.len()
    }

    pub fn initial(&self, q: usize) -> &Rational {
        &self.initial[q]
    }

    pub fn final_weight(&self, q: usize) -> &Rational {
        &self.final_weights[q]
    }

    pub fn initial_weights(&self) -> &[Rational] {
        &self.initial
    }

    pub fn final_weights(&self) -> &[Rational] {
        &self.final_weights
    }

    pub fn set_initial(&mut self, q: usize, w: Rational) {
        debug_assert!(!w.is_negative());
        self.initial[q] = w;
    }

    pub fn set_final(&mut self, q: usize, w: Rational) {
        debug_assert!(!w.is_negative());
        self.final_weights[q] = w;
    }

    /// Adds `weight` to the transition `source --var--> target`, merging
    /// with an existing parallel transition.
    pub fn add_transition(&mut self, source: usize, label: Label, target: usize) {
        assert!(
            source < self.num_states() && target < self.num_states(),
            "transition {source} -> {target} out of range for {} states",
            self.num_states()
        );
        debug_assert!(!label.weight.is_negative());
        if label.weight.is_zero() {
            return;
        }
        let slot = self
            .edges
            .entry((source, label.var, target))
            .or_insert_with(Rational::zero);
        *slot += label.weight;
    }

    /// Checked variant of [`Pga::add_transition`] for untrusted input.
    pub fn try_add_transition(&mut self, source: usize, label: Label, target: usize) -> Result<()> {
        if source >= self.num_states() || target >= self.num_states() {
            return Err(PgaError::ContractViolation(format!(
                "transition {source} -> {target} references a missing state"
            )));
        }
        if label.weight.is_negative() {
            return Err(PgaError::ContractViolation(format!(
                "negative transition weight {}",
                label.weight
            )));
        }
        self.add_transition(source, label, target);
        Ok(())
    }

    /// Transitions in (source, tag, target) order.
    pub fn transitions(&self) -> impl Iterator<Item = Transition<'_>> + '_ {
        self.edges.iter().map(|((s, v, t), w)| Transition {
            source: *s,
            target: *t,
            var: v.as_ref(),
            weight: w,
        })
    }

    /// Outgoing transitions grouped by source state.
    pub fn outgoing(&self) -> Vec<Vec<Transition<'_>>> {
        let mut out = vec![Vec::new(); self.num_states()];
        for t in self.transitions() {
            out[t.source].push(t);
        }
        out
    }

    /// Variables occurring on some transition, in lexicographic order.
    pub fn vars(&self) -> BTreeSet<VarId> {
        self.edges.keys().filter_map(|(_, v, _)| v.clone()).collect()
    }

    pub fn mentions(&self, var: &VarId) -> bool {
        self.edges.keys().any(|(_, v, _)| v.as_ref() == Some(var))
    }

    /// Copies all states and transitions of `other` into `self`, scaling its
    /// initial weights by `initial_scale` (`None` drops them). Returns the
    /// index offset of the copied states.
    fn embed(&mut self, other: &Pga, initial_scale: Option<&Rational>, keep_final: bool) -> usize {
        let offset = self.num_states();
        for q in 0..other.num_states() {
            let i = match initial_scale {
                Some(s) => &other.initial[q] * s,
                None => Rational::zero(),
            };
            let f = if keep_final {
                other.final_weights[q].clone()
            } else {
                Rational::zero()
            };
            self.add_state(i, f);
        }
        for ((s, v, t), w) in &other.edges {
            self.edges.insert((s + offset, v.clone(), t + offset), w.clone());
        }
        offset
    }

    /// Checks the structural invariants: weights nonnegative and every
    /// transition endpoint a valid state.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_states();
        if self.final_weights.len() != n {
            return Err(PgaError::DimensionMismatch {
                expected: n,
                found: self.final_weights.len(),
            });
        }
        let negative = self
            .initial
            .iter()
            .chain(&self.final_weights)
            .chain(self.edges.values())
            .any(|w| w.is_negative());
        if negative {
            return Err(PgaError::ContractViolation("negative weight".into()));
        }
        if let Some(((s, _, t), _)) = self.edges.iter().find(|((s, _, t), _)| *s >= n || *t >= n) {
            return Err(PgaError::ContractViolation(format!(
                "transition {s} -> {t} references a missing state"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn parallel_transitions_merge() {
        let mut a = Pga::new();
        let p = a.add_state(Rational::one(), Rational::zero());
        let q = a.add_state(Rational::zero(), Rational::one());
        a.add_transition(p, Label::with_var(rat(1, 4), "X"), q);
        a.add_transition(p, Label::with_var(rat(1, 4), "X"), q);
        a.add_transition(p, Label::scalar(rat(1, 3)), q);
        a.add_transition(p, Label::scalar(rat(0, 1)), p);
        assert_eq!(a.num_transitions(), 2);
        let ts: Vec<_> = a.transitions().map(|t| t.label()).collect();
        assert_eq!(ts[0], Label::scalar(rat(1, 3)));
        assert_eq!(ts[1], Label::with_var(rat(1, 2), "X"));
    }

    #[test]
    fn label_display() {
        assert_eq!(Label::with_var(rat(1, 2), "X").to_string(), "1/2·X");
        assert_eq!(Label::scalar(rat(1, 1)).to_string(), "1");
    }

    #[test]
    fn validate_rejects_bad_edges() {
        let mut a = Pga::unit();
        assert!(a.validate().is_ok());
        assert!(a.try_add_transition(0, Label::scalar(rat(1, 2)), 3).is_err());
        assert!(a.try_add_transition(0, Label::scalar(rat(-1, 2)), 0).is_err());
        assert!(a.try_add_transition(0, Label::scalar(rat(1, 2)), 0).is_ok());
    }
}
