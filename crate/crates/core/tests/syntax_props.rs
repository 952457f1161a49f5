use std::collections::{HashMap, HashSet};

use omega_workbench::combinatorics::{
    first_descent_violation, hydra_run, ph_least, worm_run, Hydra, Worm,
};
use omega_workbench::syntax::{
    decode, encode, eval_literal, parse_formula, Formula, GodelCode, Sequent, Term,
};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

const VARS: [&str; 3] = ["x", "y", "z"];

fn term() -> impl Strategy<Value = Term> {
    (prop::option::of(0usize..3), 0u64..4).prop_map(|(v, s)| {
        let mut t = match v {
            Some(i) => Term::var(VARS[i]),
            None => Term::numeral(0),
        };
        for _ in 0..s {
            t = t.succ();
        }
        t
    })
}

fn literal() -> impl Strategy<Value = Formula> {
    (0usize..4, any::<bool>(), prop::collection::vec(term(), 3)).prop_map(|(r, neg, args)| {
        let (rel, arity) = [("Eq", 2), ("Lt", 2), ("Add", 3), ("Mul", 3)][r];
        let f = Formula::lit(rel, args[..arity].to_vec());
        if neg {
            f.negate()
        } else {
            f
        }
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    literal().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (0usize..3, inner.clone()).prop_map(|(v, a)| Formula::ex(VARS[v], a)),
            (0usize..3, inner).prop_map(|(v, a)| Formula::all(VARS[v], a)),
        ]
    })
}

fn sequent() -> impl Strategy<Value = Sequent> {
    prop::collection::vec(literal(), 0..4).prop_map(|fs| {
        let mut s = Sequent::new();
        for f in fs {
            s.insert(f);
        }
        s
    })
}

fn hydra() -> impl Strategy<Value = Hydra> {
    Just(Hydra::leaf()).prop_recursive(3, 7, 3, |inner| {
        prop::collection::vec(inner, 0..3).prop_map(Hydra::node)
    })
}

#[test]
fn documented_code_of_eq_zero_zero() {
    let f = parse_formula("Eq(0, 0)").unwrap();
    assert_eq!(
        encode(&f).to_string(),
        "319523712985022115500449809990458723432640040928922588781"
    );
}

#[test]
fn codes_are_injective() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strat = formula();
    let mut seen: HashMap<GodelCode, Formula> = HashMap::new();
    while seen.len() < 1000 {
        let f = strat.new_tree(&mut runner).unwrap().current();
        let c = encode(&f);
        if let Some(g) = seen.get(&c) {
            assert_eq!(g, &f, "two formulas share a code");
        }
        seen.insert(c, f);
    }
    let distinct: HashSet<&Formula> = seen.values().collect();
    assert_eq!(distinct.len(), seen.len());
}

proptest! {
    #[test]
    fn printing_round_trips(f in formula()) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn codes_round_trip(f in formula()) {
        prop_assert_eq!(decode(&encode(&f)), Some(f));
    }

    #[test]
    fn negation_is_an_involution(f in formula()) {
        prop_assert_eq!(f.negate().negate(), f.clone());
        prop_assert_eq!(f.negate().degree(), f.degree());
    }

    #[test]
    fn substitution_keeps_degree(f in formula(), v in 0usize..3, n in 0u64..20) {
        let g = f.substitute_numeral(VARS[v], n);
        prop_assert_eq!(g.degree(), f.degree());
        prop_assert!(!g.has_free(VARS[v]));
    }

    #[test]
    fn literals_evaluate_arithmetically(a in 0u64..=50, b in 0u64..=50, c in 0u64..=2600) {
        let lit = |s: String| eval_literal(&parse_formula(&s).unwrap()).unwrap();
        prop_assert_eq!(lit(format!("Eq({a}, {b})")), a == b);
        prop_assert_eq!(lit(format!("Lt({a}, {b})")), a < b);
        prop_assert_eq!(lit(format!("Add({a}, {b}, {c})")), a + b == c);
        prop_assert_eq!(lit(format!("Mul({a}, {b}, {c})")), a * b == c);
        prop_assert_eq!(lit(format!("~Lt({a}, {b})")), a >= b);
    }

    #[test]
    fn sequent_union_laws(a in sequent(), b in sequent(), c in sequent()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.union(&a), a.clone());
        prop_assert!(a.is_subset(&a.union(&b)));
        for f in b.iter() {
            prop_assert!(a.with(f).contains(f));
            prop_assert!(!a.without(f).contains(f));
        }
    }

    #[test]
    fn hydra_ordinals_descend(h in hydra()) {
        let r = hydra_run(&h, 200);
        prop_assert_eq!(first_descent_violation(&r.ordinals), None);
        if r.stages.is_some() {
            prop_assert_eq!(r.head_counts.last(), Some(&0));
        }
    }

    #[test]
    fn worm_ordinals_descend(w in prop::collection::vec(0u64..2, 0..4), steps in 1u64..60) {
        let r = worm_run(&Worm(w), steps);
        prop_assert_eq!(first_descent_violation(&r.ordinals), None);
        prop_assert_eq!(r.lengths.len(), r.ordinals.len());
    }
}

#[test]
fn ramsey_bounds_grow_with_colors() {
    let mut last = 0;
    for colors in 1..=3 {
        let n = ph_least(1, colors, 1 << 12).unwrap().expect("small instance");
        assert!(n >= last, "{colors} colours gave {n} after {last}");
        last = n;
    }
}
