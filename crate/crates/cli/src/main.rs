use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hyperspec_cli::{run, Cli, CliError, Status};

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("HYPERSPEC_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("HYPERSPEC_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(&cli)).and_then(|o| {
        if let Some(path) = &o.out {
            std::fs::write(path, &o.text).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
        } else {
            let _ = std::io::stdout().write_all(o.text.as_bytes());
        }
        Ok(o.status)
    });
    match outcome {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::InputError as u8)
        }
    }
}
