use clap::Parser;

fn main() {
    let cli = covsel_cli::args::Cli::parse();
    if let Err(e) = covsel_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(covsel_cli::exit_code(&e));
    }
}
