//! Algebraic laws of the automaton constructions, checked coefficient by
//! coefficient on random automata.

use std::collections::HashMap;

use num_traits::{One, Zero};
use pga_core::analysis::{coefficient, expectation, joint_coefficients, total_mass};
use pga_core::automata::{
    bisim_minimize, concatenate, duplicate_var, guard_filter, scale_initial, substitute_to_one, trim,
    weighted_union,
};
use pga_core::rational::rat;
use pga_core::testgen::{random_pga, PgaParams};
use pga_core::{Cmp, Guard, Pga, Rational, Valuation, VarId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEG: u64 = 8;

fn xy() -> Vec<VarId> {
    vec![VarId::from("X"), VarId::from("Y")]
}

fn pga(seed: u64, acyclic: bool) -> Pga {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pga(
        &mut rng,
        &PgaParams {
            acyclic,
            ..PgaParams::default()
        },
    )
}

fn table(a: &Pga) -> HashMap<Vec<u64>, Rational> {
    joint_coefficients(a, &xy(), &[DEG, DEG]).unwrap()
}

fn get(t: &HashMap<Vec<u64>, Rational>, x: u64, y: u64) -> Rational {
    t.get(&vec![x, y]).cloned().unwrap_or_else(Rational::zero)
}

/// Brute force: sum the weights of every path of an acyclic automaton,
/// bucketed by how many X- and Y-transitions the path takes.
fn path_enumeration(a: &Pga) -> HashMap<Vec<u64>, Rational> {
    let vars = xy();
    let out_edges = a.outgoing();
    let mut acc: HashMap<Vec<u64>, Rational> = HashMap::new();
    fn walk(
        q: usize,
        weight: Rational,
        counts: Vec<u64>,
        a: &Pga,
        out_edges: &[Vec<pga_core::Transition<'_>>],
        vars: &[VarId],
        acc: &mut HashMap<Vec<u64>, Rational>,
    ) {
        let f = a.final_weight(q);
        if !f.is_zero() {
            *acc.entry(counts.clone()).or_insert_with(Rational::zero) += &weight * f;
        }
        for t in &out_edges[q] {
            let mut c = counts.clone();
            if let Some(v) = t.var {
                let i = vars.iter().position(|w| w == v).unwrap();
                c[i] += 1;
            }
            walk(t.target, &weight * t.weight, c, a, out_edges, vars, acc);
        }
    }
    for q in 0..a.num_states() {
        if !a.initial(q).is_zero() {
            walk(q, a.initial(q).clone(), vec![0, 0], a, &out_edges, &vars, &mut acc);
        }
    }
    acc.retain(|_, v| !v.is_zero());
    acc
}

fn guard_strategy() -> impl Strategy<Value = Guard> {
    let atom = (prop_oneof![Just("X"), Just("Y")], 0usize..6, 0u64..4).prop_map(|(v, c, k)| {
        let cmp = [Cmp::Eq, Cmp::Ne, Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge][c];
        Guard::atom(v, cmp, k)
    });
    let leaf = prop_oneof![1 => Just(Guard::True), 6 => atom];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Guard::negate),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.or(b)),
        ]
    })
}

fn weight() -> impl Strategy<Value = Rational> {
    (0i64..5, 1i64..5).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficients_match_path_enumeration(seed in any::<u64>()) {
        let a = pga(seed, true);
        let brute = path_enumeration(&a);
        // acyclic with at most 5 states: every degree is below DEG
        prop_assert_eq!(table(&a), brute);
    }

    #[test]
    fn union_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), wa in weight(), wb in weight()) {
        let (a, b) = (pga(s1, false), pga(s2, false));
        let u = weighted_union(&a, &b, &wa, &wb);
        let (ta, tb, tu) = (table(&a), table(&b), table(&u));
        for x in 0..=DEG {
            for y in 0..=DEG {
                prop_assert_eq!(get(&tu, x, y), &wa * get(&ta, x, y) + &wb * get(&tb, x, y));
            }
        }
    }

    #[test]
    fn concatenation_convolves(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (pga(s1, false), pga(s2, false));
        let c = concatenate(&a, &b);
        let (ta, tb, tc) = (table(&a), table(&b), table(&c));
        for x in 0..=DEG {
            for y in 0..=DEG {
                let mut sum = Rational::zero();
                for i in 0..=x {
                    for j in 0..=y {
                        sum += get(&ta, i, j) * get(&tb, x - i, y - j);
                    }
                }
                prop_assert_eq!(get(&tc, x, y), sum);
            }
        }
    }

    #[test]
    fn filter_keeps_exactly_satisfying_monomials(seed in any::<u64>(), g in guard_strategy()) {
        let a = pga(seed, false);
        let f = guard_filter(&a, &g);
        f.validate().unwrap();
        let (ta, tf) = (table(&a), table(&f));
        for x in 0..=DEG {
            for y in 0..=DEG {
                let holds = g.eval(&|v: &VarId| if v.as_str() == "X" { x } else { y });
                let expect = if holds { get(&ta, x, y) } else { Rational::zero() };
                prop_assert_eq!(get(&tf, x, y), expect);
            }
        }
    }

    #[test]
    fn filter_partitions_mass(seed in any::<u64>(), g in guard_strategy()) {
        let a = pga(seed, false);
        let yes = total_mass(&guard_filter(&a, &g)).unwrap();
        let no = total_mass(&guard_filter(&a, &g.clone().negate())).unwrap();
        prop_assert_eq!(yes + no, total_mass(&a).unwrap());
    }

    #[test]
    fn substitution_sums_out_variable(seed in any::<u64>()) {
        let a = pga(seed, true);
        let x = VarId::from("X");
        let s = substitute_to_one(&a, &x);
        prop_assert!(!s.mentions(&x));
        let ta = table(&a);
        for y in 0..=DEG {
            let expect: Rational = (0..=DEG).map(|i| get(&ta, i, y)).sum();
            let got = coefficient(&s, &Valuation::from_pairs([("Y", y)])).unwrap();
            prop_assert_eq!(got, expect);
        }
    }

    #[test]
    fn duplication_copies_degrees(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_pga(&mut rng, &PgaParams { vars: vec![VarId::from("Y")], ..PgaParams::default() });
        let d = duplicate_var(&a, &VarId::from("Y"), &VarId::from("X")).unwrap();
        let (ta, td) = (table(&a), table(&d));
        for x in 0..=DEG {
            for y in 0..=DEG {
                let expect = if x == y { get(&ta, 0, y) } else { Rational::zero() };
                prop_assert_eq!(get(&td, x, y), expect);
            }
        }
    }

    #[test]
    fn trim_and_minimize_preserve_semantics(seed in any::<u64>()) {
        let a = pga(seed, false);
        let t = trim(&a);
        let m = bisim_minimize(&a);
        let tm = bisim_minimize(&t);
        prop_assert!(t.num_states() <= a.num_states().max(1));
        prop_assert!(m.num_states() <= a.num_states());
        prop_assert!(tm.num_states() <= t.num_states());
        let ta = table(&a);
        prop_assert_eq!(&table(&t), &ta);
        prop_assert_eq!(&table(&m), &ta);
        prop_assert_eq!(&table(&tm), &ta);
    }

    #[test]
    fn finite_support_mass_and_expectation(seed in any::<u64>()) {
        let a = pga(seed, true);
        let ta = table(&a);
        let sum: Rational = ta.values().sum();
        prop_assert_eq!(sum, total_mass(&a).unwrap());
        let ex: Rational = ta.iter().map(|(c, p)| Rational::from_integer(c[0].into()) * p).sum();
        prop_assert_eq!(ex, expectation(&a, &VarId::from("X")).unwrap());
    }

    #[test]
    fn constructions_keep_weights_nonnegative(s1 in any::<u64>(), s2 in any::<u64>(), w in weight(), g in guard_strategy()) {
        let (a, b) = (pga(s1, false), pga(s2, false));
        for out in [
            weighted_union(&a, &b, &w, &Rational::one()),
            concatenate(&a, &b),
            substitute_to_one(&a, &VarId::from("X")),
            guard_filter(&a, &g),
            scale_initial(&a, &w),
            trim(&a),
            bisim_minimize(&a),
        ] {
            prop_assert!(out.validate().is_ok());
        }
    }
}
