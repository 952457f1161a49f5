//! Checking finitary sequent-calculus proofs and reading off their cut rank.
use std::fs;
use std::path::Path;

use omega_workbench::proofs::{check_pa_proof, proof_metrics, FinitaryProof};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/proofs");
    let mut paths: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for p in paths {
        let proof = FinitaryProof::from_json(&fs::read_to_string(&p).unwrap()).unwrap();
        let name = p.file_stem().unwrap().to_string_lossy();
        match (check_pa_proof(&proof), proof_metrics(&proof)) {
            (Ok(()), Ok(m)) => println!("{name:<22} ok  depth {} cut rank {}", m.depth, m.cutrank),
            (Err(e), _) | (Ok(()), Err(e)) => println!("{name:<22} {e}"),
        }
    }

    let bad = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mutations/and_wrong_component.json");
    let proof = FinitaryProof::from_json(&fs::read_to_string(bad).unwrap()).unwrap();
    println!("mutated: {}", check_pa_proof(&proof).unwrap_err());
}
