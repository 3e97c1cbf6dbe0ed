use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::{Label, Pga, VarId};
use crate::rational::Rational;

/// Removes states that are not both reachable from an initial state and
/// co-reachable from a final state. State order is otherwise preserved.
///
/// An automaton with empty semantics collapses to a single inert state.
pub fn trim(a: &Pga) -> Pga {
    let n = a.num_states();
    let mut forward = vec![Vec::new(); n];
    let mut backward = vec![Vec::new(); n];
    for t in a.transitions() {
        forward[t.source].push(t.target);
        backward[t.target].push(t.source);
    }
    let reach = |seeds: Vec<usize>, adj: &[Vec<usize>]| {
        let mut seen = vec![false; n];
        let mut stack = seeds;
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(q) = stack.pop() {
            for &r in &adj[q] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen
    };
    let accessible = reach((0..n).filter(|&q| !a.initial(q).is_zero()).collect(), &forward);
    let coaccessible = reach((0..n).filter(|&q| !a.final_weight(q).is_zero()).collect(), &backward);

    let keep: Vec<bool> = (0..n).map(|q| accessible[q] && coaccessible[q]).collect();
    if keep.iter().all(|&k| k) {
        return a.clone();
    }
    let mut remap = vec![usize::MAX; n];
    let mut out = Pga::new();
    for q in (0..n).filter(|&q| keep[q]) {
        remap[q] = out.add_state(a.initial(q).clone(), a.final_weight(q).clone());
    }
    for t in a.transitions() {
        if keep[t.source] && keep[t.target] {
            out.add_transition(remap[t.source], t.label(), remap[t.target]);
        }
    }
    if out.num_states() == 0 {
        out.add_state(Rational::zero(), Rational::zero());
    }
    out
}

type Signature = (usize, BTreeMap<(Option<VarId>, usize), Rational>);

/// Quotients `a` by its coarsest forward weighted bisimulation.
///
/// Two states are equivalent when they have the same final weight and, for
/// every variable tag and equivalence class, the same total outgoing weight
/// into that class. Initial weights of merged states are summed.
pub fn bisim_minimize(a: &Pga) -> Pga {
    let n = a.num_states();
    if n <= 1 {
        return a.clone();
    }
    let outgoing = a.outgoing();

    let mut class = {
        let mut ids: HashMap<&Rational, usize> = HashMap::new();
        (0..n)
            .map(|q| {
                let next = ids.len();
                *ids.entry(a.final_weight(q)).or_insert(next)
            })
            .collect::<Vec<_>>()
    };
    let mut num_classes = class.iter().max().map_or(0, |m| m + 1);

    loop {
        let mut ids: HashMap<Signature, usize> = HashMap::new();
        let refined: Vec<usize> = (0..n)
            .map(|q| {
                let mut out: BTreeMap<(Option<VarId>, usize), Rational> = BTreeMap::new();
                for t in &outgoing[q] {
                    *out.entry((t.var.cloned(), class[t.target]))
                        .or_insert_with(Rational::zero) += t.weight;
                }
                let next = ids.len();
                *ids.entry((class[q], out)).or_insert(next)
            })
            .collect();
        let refined_count = ids.len();
        class = refined;
        if refined_count == num_classes {
            break;
        }
        num_classes = refined_count;
    }

    if num_classes == n {
        return a.clone();
    }

    // Classes are numbered by first occurrence, so representatives keep the
    // original relative order.
    let mut representative = vec![usize::MAX; num_classes];
    let mut out = Pga::new();
    for q in 0..n {
        let c = class[q];
        if representative[c] == usize::MAX {
            representative[c] = q;
            out.add_state(Rational::zero(), a.final_weight(q).clone());
        }
        let w = out.initial(c) + a.initial(q);
        out.set_initial(c, w);
    }
    for (c, &rep) in representative.iter().enumerate() {
        for t in &outgoing[rep] {
            out.add_transition(
                c,
                Label {
                    weight: t.weight.clone(),
                    var: t.var.cloned(),
                },
                class[t.target],
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{coefficient, Valuation};
    use crate::automata::{concatenate, dirac_pga, geometric_pga, weighted_union};
    use crate::rational::{int, rat};
    use num_traits::One;

    fn coef(a: &Pga, v: &[(&str, u64)]) -> Rational {
        coefficient(a, &Valuation::from_pairs(v.iter().copied())).unwrap()
    }

    #[test]
    fn trim_drops_isolated_state() {
        let mut a = geometric_pga(&VarId::from("X"), &rat(1, 2)).unwrap();
        a.add_state(Rational::zero(), Rational::zero());
        let t = trim(&a);
        assert_eq!(t.num_states(), 1);
        for n in 0..5 {
            assert_eq!(coef(&t, &[("X", n)]), coef(&a, &[("X", n)]));
        }
    }

    #[test]
    fn trim_drops_dead_branch_of_concatenation() {
        let x = VarId::from("X");
        let mut b = dirac_pga(&x, 2);
        // A dead branch: reachable from b's start, but never reaches a final weight.
        let dead1 = b.add_state(Rational::zero(), Rational::zero());
        let dead2 = b.add_state(Rational::zero(), Rational::zero());
        b.add_transition(0, Label::with_var(rat(1, 3), "X"), dead1);
        b.add_transition(dead1, Label::scalar(rat(1, 2)), dead2);
        let a = geometric_pga(&x, &rat(1, 3)).unwrap();
        let c = concatenate(&a, &b);
        let t = trim(&c);
        assert_eq!(t.num_states(), c.num_states() - 2);
        for n in 0..=8 {
            assert_eq!(coef(&t, &[("X", n)]), coef(&c, &[("X", n)]));
        }
    }

    #[test]
    fn trim_keeps_trim_automaton() {
        let x = VarId::from("X");
        let a = weighted_union(&dirac_pga(&x, 2), &dirac_pga(&x, 1), &rat(4, 3), &rat(4, 3));
        assert_eq!(trim(&a), a);
    }

    #[test]
    fn trim_of_empty_semantics_is_single_state() {
        let mut a = dirac_pga(&VarId::from("X"), 2);
        a.set_final(2, Rational::zero());
        let t = trim(&a);
        assert_eq!(t.num_states(), 1);
        assert!(t.initial(0).is_zero() && t.final_weight(0).is_zero());
    }

    #[test]
    fn merges_parallel_chains() {
        let mut a = Pga::new();
        let s = a.add_state(Rational::one(), Rational::zero());
        for _ in 0..2 {
            let m = a.add_state(Rational::zero(), Rational::zero());
            let f = a.add_state(Rational::zero(), Rational::one());
            a.add_transition(s, Label::with_var(rat(1, 2), "X"), m);
            a.add_transition(m, Label::with_var(int(1), "Y"), f);
        }
        let m = bisim_minimize(&a);
        assert_eq!(a.num_states(), 5);
        assert_eq!(m.num_states(), 3);
        assert_eq!(coef(&m, &[("X", 1), ("Y", 1)]), int(1));
        assert_eq!(coef(&a, &[("X", 1), ("Y", 1)]), int(1));
    }

    #[test]
    fn geometric_is_already_minimal() {
        let g = geometric_pga(&VarId::from("X"), &rat(1, 2)).unwrap();
        assert_eq!(bisim_minimize(&g), g);
    }

    #[test]
    fn distinguishes_different_tags() {
        let mut a = Pga::new();
        let s = a.add_state(Rational::one(), Rational::zero());
        let p = a.add_state(Rational::zero(), Rational::zero());
        let q = a.add_state(Rational::zero(), Rational::zero());
        let f = a.add_state(Rational::zero(), Rational::one());
        a.add_transition(s, Label::scalar(rat(1, 2)), p);
        a.add_transition(s, Label::scalar(rat(1, 2)), q);
        a.add_transition(p, Label::with_var(int(1), "X"), f);
        a.add_transition(q, Label::with_var(int(1), "Y"), f);
        assert_eq!(bisim_minimize(&a).num_states(), 4);
    }
}
