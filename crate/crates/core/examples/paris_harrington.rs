//! Least sizes for the finite Ramsey statement with the largeness condition,
//! searched by brute force.
use omega_workbench::combinatorics::ph_least;

fn main() {
    for (dim, colors) in [(1, 1), (1, 2), (1, 3), (2, 1)] {
        match ph_least(dim, colors, 1 << 12).unwrap() {
            Some(n) => println!("dimension {dim}, {colors} colours: least n = {n}"),
            None => println!("dimension {dim}, {colors} colours: beyond the search cap"),
        }
    }
}
