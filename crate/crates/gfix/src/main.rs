use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = gfix::cli::Cli::parse();
    match gfix::cli::execute(&cli.command) {
        Ok(out) => {
            if let Err(e) = out.emit() {
                eprintln!("gfix: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("gfix: {e}");
            ExitCode::from(2)
        }
    }
}
