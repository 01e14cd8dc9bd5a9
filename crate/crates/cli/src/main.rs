mod args;
mod commands;
mod error;
mod experiment;

use clap::Parser;

fn main() {
    let cli = args::Cli::parse();
    match commands::dispatch(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
