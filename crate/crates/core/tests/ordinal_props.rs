mod common;

use common::Cnf;
use omega_workbench::hierarchy::{fgh_eval, fgh_trace};
use omega_workbench::ordinal::{omega_tower, parse_ordinal, reduces_to, Ordinal};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cnf(depth: u32) -> impl Strategy<Value = Cnf> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if seed % 23 == 0 {
            Cnf::E0
        } else {
            common::gen(&mut rng, depth)
        }
    })
}

fn lib(c: &Cnf) -> Ordinal {
    parse_ordinal(&c.render()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn display_round_trips(a in cnf(3)) {
        let o = lib(&a);
        prop_assert_eq!(o.to_string(), a.render());
        prop_assert_eq!(parse_ordinal(&o.to_string()).unwrap(), o);
    }

    #[test]
    fn order_matches_oracle(a in cnf(3), b in cnf(3)) {
        prop_assert_eq!(lib(&a).cmp(&lib(&b)), a.cmp(&b));
    }

    #[test]
    fn order_is_transitive(a in cnf(2), b in cnf(2), c in cnf(2)) {
        let (x, y, z) = (lib(&a), lib(&b), lib(&c));
        if x <= y && y <= z {
            prop_assert!(x <= z);
        }
    }

    #[test]
    fn fundamental_sequence_descends(a in cnf(3), x in 0u64..8) {
        let o = lib(&a);
        prop_assume!(!o.is_zero());
        let f = o.fund_seq(x).unwrap();
        prop_assert!(f < o);
        prop_assert_eq!(f.to_string(), a.fund(x).unwrap().render());
    }

    #[test]
    fn limit_sequences_are_monotone(a in cnf(3), x in 0u64..6) {
        let o = lib(&a);
        prop_assume!(o.is_limit());
        let lo = o.fund_seq(x).unwrap();
        let hi = o.fund_seq(x + 1).unwrap();
        prop_assert!(lo <= hi);
        if x > 0 {
            prop_assert!(lo < hi);
        }
    }

    #[test]
    fn norm_matches_oracle(a in cnf(3)) {
        prop_assume!(a != Cnf::E0);
        prop_assert_eq!(lib(&a).norm().unwrap(), a.norm().unwrap());
    }

    #[test]
    fn reduction_paths_are_fundamental_steps(a in cnf(2), k in 1u64..4, n in 0usize..30) {
        let o = lib(&a);
        let mut cur = o.clone();
        for _ in 0..n {
            if cur.is_zero() {
                break;
            }
            cur = cur.fund_seq(k).unwrap();
        }
        let path = reduces_to(&o, &cur, k).expect("orbit points are reachable");
        let v = path.to_vec_bounded(64);
        if let Some(v) = v {
            prop_assert_eq!(v.first(), Some(&o));
            prop_assert_eq!(v.last(), Some(&cur));
            for w in v.windows(2) {
                prop_assert_eq!(&w[0].fund_seq(k).unwrap(), &w[1]);
            }
        }
    }

    #[test]
    fn reduction_only_goes_down(a in cnf(2), b in cnf(2), k in 1u64..4) {
        let (x, y) = (lib(&a), lib(&b));
        if reduces_to(&x, &y, k).is_some() {
            prop_assert!(y <= x);
        }
    }

    #[test]
    fn tower_matches_oracle(n in 0u64..6) {
        prop_assert_eq!(omega_tower(n, &Ordinal::one()).unwrap().to_string(), Cnf::tower(n).render());
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hierarchy_is_monotone_in_the_argument(a in cnf(1), x in 0u64..4) {
        prop_assume!(a != Cnf::E0);
        let o = lib(&a);
        let lo = fgh_eval(&o, x, 5_000).unwrap();
        let hi = fgh_eval(&o, x + 1, 5_000).unwrap();
        if let (Some(l), Some(h)) = (lo.value, hi.value) {
            prop_assert!(l < h);
        }
    }

    #[test]
    fn hierarchy_agrees_with_recursion(a in cnf(1), x in 0u64..4) {
        prop_assume!(a != Cnf::E0);
        let got = fgh_eval(&lib(&a), x, 5_000).unwrap();
        let mut fuel = 400;
        if let (Some(v), Some(w)) = (got.value, common::fgh(&a, x, &mut fuel)) {
            prop_assert_eq!(v, w);
        }
    }

    #[test]
    fn budgets_are_deterministic(a in cnf(1), x in 0u64..4, budget in 1u64..400) {
        prop_assume!(a != Cnf::E0);
        let o = lib(&a);
        let r1 = fgh_eval(&o, x, budget).unwrap();
        prop_assert_eq!(&r1, &fgh_eval(&o, x, budget).unwrap());
        prop_assert!(r1.steps_used <= budget);
        prop_assert_eq!(r1.value.is_none(), r1.exhausted);
    }

    #[test]
    fn traces_descend(a in cnf(2), x in 0u64..3) {
        let t = fgh_trace(&lib(&a), x, 150).unwrap();
        prop_assert!(t.is_strictly_decreasing());
    }
}
