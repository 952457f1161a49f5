fn main() {
    let r = omega_workbench::cli::run(std::env::args_os());
    if r.code != 2 {
        print!("{}", r.output);
    } else {
        eprint!("{}", r.output);
    }
    std::process::exit(r.code);
}
