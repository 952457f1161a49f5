//! Beklemishev's worms and their ordinals.
use omega_workbench::combinatorics::{worm_run, Worm};

fn main() {
    for s in ["0", "1", "1,0", "2", "1,1"] {
        let w: Worm = s.parse().unwrap();
        let r = worm_run(&w, 1_000);
        println!("[{s}] ordinal {} steps {:?} cutoff {:?}", w.ordinal(), r.steps, r.cutoff);
    }
    let w = Worm(vec![2, 0, 1]);
    let mut cur = w.clone();
    for n in 1..=4 {
        cur = cur.step(n);
        println!("step {n}: {cur}  {}", cur.ordinal());
    }
}
