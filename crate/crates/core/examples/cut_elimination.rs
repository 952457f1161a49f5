//! Embedding a finite proof with cuts into the infinitary calculus and
//! eliminating them, checking the height stays under the tower bound.
use std::fs;
use std::path::Path;

use omega_workbench::omega::{
    cut_elim, elimination_bound, embed, find_cut, verify_sampled, NotationDerivation,
};
use omega_workbench::proofs::FinitaryProof;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/proofs/one_cut.json");
    let p = FinitaryProof::from_json(&fs::read_to_string(path).unwrap()).unwrap();

    let h = embed(&p).unwrap();
    let k = h.rank().unwrap();
    println!("embedded: {}  rank {k}", h.describe());

    let e = cut_elim(&h, k).unwrap();
    let d = NotationDerivation::new(e.clone()).unwrap();
    println!("eliminated: {}", e.describe());
    println!("cut found within depth 4: {:?}", find_cut(&d, 4, 8).unwrap());
    println!(
        "height {} within bound {}",
        e.ordinal().unwrap(),
        elimination_bound(&h, k).unwrap()
    );
    println!("sampled ok: {}", verify_sampled(&d, 4, 8).ok);
}
