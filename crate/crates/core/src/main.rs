fn main() {
    let code = ohno_star::cli::run(std::env::args_os());
    std::process::exit(code);
}
