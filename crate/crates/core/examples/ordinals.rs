//! Cantor normal forms below e0: parsing, comparison, fundamental sequences,
//! norms and reduction paths.
use omega_workbench::ordinal::{omega_tower, parse_ordinal, reduces_to, Ordinal};

fn main() {
    let a = parse_ordinal("w^(w+1)*2+w^(3)+5").unwrap();
    let b = parse_ordinal("w^(w+1)*2+w^(4)").unwrap();
    println!("{a} < {b}: {}", a < b);
    println!("norm of {a} is {}", a.norm().unwrap());

    let e0 = Ordinal::epsilon_zero();
    for x in 0..4 {
        println!("e0[{x}] = {}", e0.fund_seq(x).unwrap());
    }

    let w2 = parse_ordinal("w^(2)").unwrap();
    let target = parse_ordinal("w*2").unwrap();
    match reduces_to(&w2, &target, 2) {
        Some(path) => {
            let steps = path.to_vec_bounded(16).unwrap();
            let shown: Vec<String> = steps.iter().map(|o| o.to_string()).collect();
            println!("{w2} ->_2 {target}: {}", shown.join(" -> "));
        }
        None => println!("{w2} does not reduce to {target} at index 2"),
    }
    println!("tower of height 3: {}", omega_tower(3, &Ordinal::one()).unwrap());
}
