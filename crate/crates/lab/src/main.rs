fn main() {
    std::process::exit(dicke_lab::cli::run(std::env::args_os()));
}
