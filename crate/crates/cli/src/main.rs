use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use pevcond_cli::commands::EXIT_USAGE;
use pevcond_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE as u8),
            };
        }
    };
    let code = run(cli, &mut std::io::stdout().lock());
    ExitCode::from(code as u8)
}
