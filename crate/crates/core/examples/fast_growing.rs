//! The fast-growing hierarchy under a step budget, with the descending
//! trace of the evaluator and a pointwise domination probe.
use omega_workbench::hierarchy::{domination_probe, fgh_eval, fgh_trace};
use omega_workbench::ordinal::parse_ordinal;

fn main() {
    for (a, x) in [("0", 5), ("1", 5), ("2", 3), ("w", 2), ("w+1", 1)] {
        let r = fgh_eval(&parse_ordinal(a).unwrap(), x, 1_000_000).unwrap();
        match r.value {
            Some(v) => println!("F_{a}({x}) = {v} after {} steps", r.steps_used),
            None => println!("F_{a}({x}) ran out of budget"),
        }
    }

    let t = fgh_trace(&parse_ordinal("w").unwrap(), 1, 100).unwrap();
    print!("{t}");
    println!("trace strictly decreasing: {}", t.is_strictly_decreasing());

    let lo = parse_ordinal("2").unwrap();
    let hi = parse_ordinal("w").unwrap();
    // F_w overtakes F_2 only eventually; at small points F_2 is ahead.
    let probe = domination_probe(&lo, &hi, &[0, 1, 2], 1_000_000).unwrap();
    for p in &probe.points {
        println!("x = {}: F_2 {:?}, F_w {:?}", p.x, p.lower.value, p.upper.value);
    }
}
