use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use levyqm::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match levyqm::run(&cli) {
        Ok(summary) => {
            let text = serde_json::to_string_pretty(&summary).expect("summary is valid JSON");
            // a closed pipe downstream is not a failure of the run
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("levyqm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
