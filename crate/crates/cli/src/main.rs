use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ghz_teleport::Cli::parse();
    match ghz_teleport::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
