fn main() {
    if let Err(e) = parrondo_cli::run_command(std::env::args_os()) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
