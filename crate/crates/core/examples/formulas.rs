//! First-order formulas in negation normal form and their Gödel codes.
use omega_workbench::syntax::{decode, encode, eval_literal, parse_formula};

fn main() {
    let f = parse_formula("all x (ex y (Lt(x, y)) | Eq(x, 0))").unwrap();
    println!("{f}");
    println!("negation: {}", f.negate());
    println!("degree {}, free variables {:?}", f.degree(), f.free_vars());

    let g = parse_formula("Add(S(0), S(S(0)), x)").unwrap();
    let closed = g.substitute_numeral("x", 3);
    println!("{closed} is {}", eval_literal(&closed).unwrap());

    let eq = parse_formula("Eq(0, 0)").unwrap();
    let code = encode(&eq);
    println!("code of {eq}: {code}");
    println!("decodes to {}", decode(&code).unwrap());
}
