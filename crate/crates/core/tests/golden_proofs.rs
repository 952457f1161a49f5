use std::fs;
use std::path::PathBuf;

use omega_workbench::omega::{
    cut_elim, elimination_bound, embed, find_cut, stitch_selector, verify_sampled, Family,
    NotationDerivation, OmegaDerivation,
};
use omega_workbench::proofs::{check_pa_proof, proof_metrics, FinitaryProof};
use omega_workbench::syntax::Formula;

fn corpus() -> Vec<(String, FinitaryProof)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/proofs");
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let proof = FinitaryProof::from_json(&fs::read_to_string(&p).unwrap()).unwrap();
            (name, proof)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[test]
fn corpus_checks() {
    let all = corpus();
    assert!(all.len() >= 10);
    for (name, p) in &all {
        assert_eq!(check_pa_proof(p), Ok(()), "{name}");
    }
}

#[test]
fn metrics_survive_reserialization() {
    for (name, p) in corpus() {
        let again = FinitaryProof::from_json(&p.to_json()).unwrap();
        assert_eq!(proof_metrics(&p), proof_metrics(&again), "{name}");
    }
    let (_, one_cut) = corpus().into_iter().find(|(n, _)| n == "one_cut").unwrap();
    let m = proof_metrics(&one_cut).unwrap();
    assert_eq!(m.cutrank, 2);
    assert_eq!(m.depth, 4);
}

#[test]
fn closed_proofs_embed_and_eliminate() {
    for (name, p) in corpus() {
        if !p.sequent.is_closed() {
            continue;
        }
        let h = embed(&p).unwrap();
        let k = h.rank().unwrap();
        let e = cut_elim(&h, k).unwrap();
        let d = NotationDerivation::new(e.clone()).unwrap();
        assert_eq!(d.root_sequent(), p.sequent, "{name}");
        assert_eq!(find_cut(&d, 4, 5).unwrap(), None, "{name}");
        let report = verify_sampled(&d, 4, 5);
        assert!(report.ok, "{name}: {:?}", report.violations);
        assert!(e.ordinal().unwrap() <= elimination_bound(&h, k).unwrap(), "{name}");
    }
}

#[test]
fn template_stitches() {
    let (_, t) = corpus()
        .into_iter()
        .find(|(n, _)| n == "template_lt_and")
        .unwrap();
    let a: Formula = t.sequent.iter().next().unwrap().clone();
    let n = stitch_selector(&a, Family::Template(t.into()), None).unwrap();
    let d = NotationDerivation::new(n).unwrap();
    let report = verify_sampled(&d, 4, 6);
    assert!(report.ok, "{:?}", report.violations);
}
