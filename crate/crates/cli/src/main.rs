use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use clap::Parser;
use freealg_cli::{report, run, Cli, CliError};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let mut command = String::new();
    let outcome = match Cli::try_parse_from(&args) {
        Ok(cli) => {
            command = cli.command.name();
            std::panic::set_hook(Box::new(|_| {}));
            catch_unwind(AssertUnwindSafe(|| run(&cli))).unwrap_or_else(|e| {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                Err(CliError { code: "Internal".into(), message: msg.unwrap_or_default() })
            })
        }
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => Err(CliError { code: "Usage".into(), message: e.to_string() }),
    };
    if let Err(e) = &outcome {
        eprintln!("error: {e}");
    }
    println!("{}", report(&command, &outcome));
    if outcome.is_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
