use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rosenmorse::{execute, Cli, CliError, EXIT_TOLERANCE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = execute(&cli).and_then(|r| {
        match &r.config.output {
            Some(path) => std::fs::write(path, &r.text)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
            None => match std::io::stdout().write_all(r.text.as_bytes()) {
                // A closed reader (`| head`) is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other.map_err(|e| CliError::Io(format!("stdout: {e}")))?,
            },
        }
        Ok(r)
    });
    match run {
        Ok(r) if r.breaches.is_empty() => ExitCode::SUCCESS,
        Ok(r) => {
            for b in &r.breaches {
                eprintln!("tolerance breach: {b}");
            }
            ExitCode::from(EXIT_TOLERANCE as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
