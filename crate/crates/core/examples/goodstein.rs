//! Goodstein sequences alongside their descending ordinals.
use omega_workbench::combinatorics::goodstein_run;

fn main() {
    let r = goodstein_run(3, 100);
    for (v, o) in r.values.iter().zip(&r.ordinals) {
        println!("{v:>3}  {o}");
    }
    println!("3 reaches 0 at step {:?}", r.terminated_at);

    // 4 takes far longer than anyone can wait; the values stop at the cap.
    let r = goodstein_run(4, 20);
    println!("4 after 20 steps: {}  {}", r.values.last().unwrap(), r.ordinals.last().unwrap());
}
