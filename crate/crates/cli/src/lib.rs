//! Command-line driver for `hatcert`: argument parsing, report assembly and
//! the exit-code contract (0 pass, 1 a check failed, 2 usage or resource
//! error).

pub mod args;
pub mod commands;
pub mod report;

use args::{Cli, Command};
use commands::{CliError, EXIT_USAGE};

pub fn run(cli: &Cli) -> i32 {
    let threads = match &cli.command {
        Command::Verify(a) => a.common.threads,
        Command::Explore(a) => a.common.threads,
        Command::Order(a) => a.common.threads,
    };
    let result = commands::init_threads(threads).and_then(|()| match &cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Explore(a) => commands::explore(a),
        Command::Order(a) => commands::order(a),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(hatcert::Error::Budget(_)) = e {
                eprintln!("hint: raise --budget-points, or use --giant-test for generation");
            }
            EXIT_USAGE
        }
    }
}
