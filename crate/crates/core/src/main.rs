fn main() {
    let (code, out, err) = superline::io::cli::run(std::env::args());
    print!("{out}");
    eprint!("{err}");
    std::process::exit(code);
}
