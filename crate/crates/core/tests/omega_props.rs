use std::fs;
use std::path::PathBuf;
use std::sync::OnceLock;

use omega_workbench::omega::{
    check_local, cut_elim, embed, stitch_selector, Family, NotationDerivation, OmegaDerivation,
    RuleName,
};
use omega_workbench::proofs::FinitaryProof;
use omega_workbench::syntax::{parse_formula, Formula};
use proptest::prelude::*;

/// Every closed proof in the corpus, embedded and then made cut-free.
fn eliminated() -> &'static [NotationDerivation] {
    static D: OnceLock<Vec<NotationDerivation>> = OnceLock::new();
    D.get_or_init(|| {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/proofs");
        let mut paths: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        paths.sort();
        let mut out = vec![];
        for path in paths {
            let p = FinitaryProof::from_json(&fs::read_to_string(path).unwrap()).unwrap();
            if !p.sequent.is_closed() {
                continue;
            }
            let h = embed(&p).unwrap();
            let k = h.rank().unwrap();
            out.push(NotationDerivation::new(cut_elim(&h, k).unwrap()).unwrap());
        }
        assert!(out.len() >= 5);
        out
    })
}

/// Follows `choices` down the tree, each time picking among the children
/// that exist.
fn walk(d: &dyn OmegaDerivation, choices: &[u64]) -> Vec<Vec<u64>> {
    let mut addr = vec![];
    let mut seen = vec![addr.clone()];
    for c in choices {
        let kids: Vec<u64> = (0..6)
            .filter(|&i| {
                let mut a = addr.clone();
                a.push(i);
                d.node(&a).unwrap().is_some()
            })
            .collect();
        if kids.is_empty() {
            break;
        }
        addr.push(kids[*c as usize % kids.len()]);
        seen.push(addr.clone());
    }
    seen
}

fn stitched() -> &'static (Formula, NotationDerivation) {
    static D: OnceLock<(Formula, NotationDerivation)> = OnceLock::new();
    D.get_or_init(|| {
        let body = parse_formula("Eq(x, x)").unwrap();
        let n = stitch_selector(&body, Family::AxiomLeaf, None).unwrap();
        (Formula::all("x", body), NotationDerivation::new(n).unwrap())
    })
}

fn choices() -> impl Strategy<Value = (usize, Vec<u64>)> {
    (0usize..64, prop::collection::vec(0u64..6, 0..8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn probes_are_repeatable((which, c) in choices()) {
        let all = eliminated();
        let d = &all[which % all.len()];
        for addr in walk(d, &c) {
            prop_assert_eq!(d.node(&addr).unwrap(), d.node(&addr).unwrap());
        }
    }

    #[test]
    fn eliminated_paths_are_sound_and_descend((which, c) in choices()) {
        let all = eliminated();
        let d = &all[which % all.len()];
        let path = walk(d, &c);
        let labels: Vec<_> = path.iter().map(|a| d.node(a).unwrap().unwrap()).collect();
        for (addr, label) in path.iter().zip(&labels) {
            prop_assert_ne!(label.rule, RuleName::Cut);
            let v = check_local(d, addr, 4);
            prop_assert!(v.is_empty(), "{:?}", v);
        }
        for w in labels.windows(2) {
            prop_assert!(w[1].ordinal < w[0].ordinal);
        }
    }

    #[test]
    fn stitch_premises_are_instances(n in 0u64..200) {
        let (a, d) = stitched();
        let root = d.node(&[]).unwrap().unwrap();
        prop_assert_eq!(root.rule, RuleName::Omega);
        prop_assert_eq!(root.principal.as_ref(), Some(a));
        let leaf = d.node(&[n]).unwrap().unwrap();
        prop_assert_eq!(leaf.rule, RuleName::Ax);
        let want = parse_formula(&format!("Eq({n}, {n})")).unwrap();
        prop_assert!(leaf.sequent.contains(&want));
        prop_assert!(leaf.ordinal < root.ordinal);
        prop_assert!(check_local(d, &[n], 4).is_empty());
    }
}
