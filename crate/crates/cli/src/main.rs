use clap::Parser;
use gravicol_cli::config::{Cli, RunConfig, THREADS_ENV};

fn main() {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(cli, std::env::var(THREADS_ENV).ok()).and_then(|cfg| gravicol_cli::execute(&cfg));
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
