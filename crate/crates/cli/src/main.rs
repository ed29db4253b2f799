use std::process::ExitCode;

use bnspect::cli::Cli;
use bnspect::commands::run;
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("bnspect: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
