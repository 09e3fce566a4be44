use std::env;
use std::io;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use pirs_sim::cli::{dispatch, Cli};

/// Usage line of the subcommand named on the command line, if any.
fn usage() -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = env::args()
        .nth(1)
        .and_then(|name| cmd.find_subcommand(&name).cloned());
    match sub {
        Some(mut s) => s.render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let _ = e.print();
            eprintln!("\n{}", usage());
            return ExitCode::FAILURE;
        }
    };
    match dispatch(&cli, &mut io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
