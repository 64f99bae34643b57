use mqcardinal::cli;

fn main() {
    match cli::threads_from_env() {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: {e}");
                std::process::exit(cli::EXIT_INVALID);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(cli::EXIT_INVALID);
        }
    }
    std::process::exit(cli::main_with_args(std::env::args_os()));
}
