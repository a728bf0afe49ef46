fn main() {
    std::process::exit(permlogic_cli::run(std::env::args_os()));
}
