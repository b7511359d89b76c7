fn main() {
    std::process::exit(hecke_gram::cli::main_with_args(std::env::args()));
}
