fn main() {
    let code = conelab_cli::run(std::env::args_os());
    std::process::exit(code);
}
