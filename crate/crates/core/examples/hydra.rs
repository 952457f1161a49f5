//! Hercules against small hydras, chopping the leftmost deepest head.
use omega_workbench::combinatorics::{first_descent_violation, hydra_run, Hydra};

fn main() {
    for s in ["()", "(())", "((()))", "(()())", "(((())))"] {
        let h: Hydra = s.parse().unwrap();
        let r = hydra_run(&h, 10_000);
        println!(
            "{s:<10} ordinal {:<8} stages {:?}, head counts {:?}",
            h.ordinal().to_string(),
            r.stages,
            &r.head_counts[..r.head_counts.len().min(8)]
        );
        assert_eq!(first_descent_violation(&r.ordinals), None);
    }
}
