fn main() {
    let (code, out) = tlgjs::cli::run(std::env::args_os());
    if code == tlgjs::cli::EXIT_INPUT {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
