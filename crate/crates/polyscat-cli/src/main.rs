mod commands;
mod config;

use clap::Parser;

fn main() {
    let cli = config::Cli::parse();
    if let Err(failure) = commands::run(cli) {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}
