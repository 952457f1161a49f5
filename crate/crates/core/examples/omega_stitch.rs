//! Building an omega-rule node from a family of finite proofs, then sampling
//! the infinite tree for local correctness.
use std::fs;
use std::path::Path;

use omega_workbench::omega::{stitch_selector, verify_sampled, Family, NotationDerivation, OmegaDerivation};
use omega_workbench::proofs::FinitaryProof;
use omega_workbench::syntax::parse_formula;

fn main() {
    let body = parse_formula("Eq(x, x)").unwrap();
    let d = NotationDerivation::new(stitch_selector(&body, Family::AxiomLeaf, None).unwrap()).unwrap();
    println!("root {}", d.node(&[]).unwrap().unwrap());
    println!("premise 7 {}", d.node(&[7]).unwrap().unwrap());

    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/proofs/template_lt_and.json");
    let t = FinitaryProof::from_json(&fs::read_to_string(path).unwrap()).unwrap();
    let a = t.sequent.iter().next().unwrap().clone();
    let d = NotationDerivation::new(stitch_selector(&a, Family::Template(t.into()), None).unwrap()).unwrap();
    let report = verify_sampled(&d, 4, 6);
    println!(
        "template stitch: {} nodes probed, ok = {}, root {}",
        report.nodes_probed,
        report.ok,
        report.root.unwrap()
    );
}
