fn main() {
    std::process::exit(mes_cli::run(std::env::args_os()));
}
