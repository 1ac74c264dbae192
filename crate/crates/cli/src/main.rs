use clap::Parser;
use hatcert_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    std::process::exit(hatcert_cli::run(&cli));
}
