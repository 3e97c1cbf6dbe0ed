use std::collections::{HashMap, VecDeque};

use num_traits::Zero;

use super::{Pga, VarId};
use crate::guard::Guard;
use crate::rational::Rational;

/// Restricts `⟦a⟧` to the monomials whose degrees satisfy `g`.
///
/// Builds the reachable part of the product of `a` with one saturating counter
/// per variable of `g`. The counter for a variable compared against constants
/// of at most `B` ranges over `0..=B+1`, with `B+1` standing for "more than B".
pub fn guard_filter(a: &Pga, g: &Guard) -> Pga {
    let bounds: Vec<(VarId, u64)> = g.bounds().into_iter().collect();
    let counter_of = |v: &VarId| bounds.iter().position(|(w, _)| w == v);
    let outgoing = a.outgoing();

    let mut out = Pga::new();
    let mut index: HashMap<(usize, Vec<u64>), usize> = HashMap::new();
    let mut queue = VecDeque::new();

    let zero_counters = vec![0u64; bounds.len()];
    for q in 0..a.num_states() {
        if a.initial(q).is_zero() {
            continue;
        }
        let id = out.add_state(a.initial(q).clone(), Rational::zero());
        index.insert((q, zero_counters.clone()), id);
        queue.push_back((q, zero_counters.clone(), id));
    }

    while let Some((q, counters, id)) = queue.pop_front() {
        let accept = g.eval(&|v: &VarId| counter_of(v).map_or(0, |i| counters[i]));
        if accept {
            out.set_final(id, a.final_weight(q).clone());
        }
        for t in &outgoing[q] {
            let mut next = counters.clone();
            if let Some(i) = t.var.and_then(|v| counter_of(v)) {
                next[i] = (next[i] + 1).min(bounds[i].1 + 1);
            }
            let key = (t.target, next);
            let target = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = out.add_state(Rational::zero(), Rational::zero());
                    index.insert(key.clone(), id);
                    queue.push_back((key.0, key.1, id));
                    id
                }
            };
            out.add_transition(id, t.label(), target);
        }
    }

    if out.num_states() == 0 {
        out.add_state(Rational::zero(), Rational::zero());
    }
    out
}
