use std::io::Write;
use std::process::ExitCode;

use sos_admm::cli::{run_command, CliError};

fn main() -> ExitCode {
    match run_command(std::env::args_os()) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            for r in &outcome.reports {
                // A closed pipe (e.g. `| head`) is not an error worth a panic.
                if writeln!(out, "{}", r.to_json()).is_err() {
                    break;
                }
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(CliError::Usage(e)) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            ExitCode::from(code)
        }
        Err(CliError::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
