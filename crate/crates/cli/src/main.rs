use std::process::ExitCode;

use clap::Parser;
use qhm_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        match &cli.out {
            Some(path) => std::fs::write(path, &out.text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?,
            None => print!("{}", out.text),
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            if let Some(d) = out.diagnostic {
                eprintln!("{d}");
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            let prefix = if e.exit_code() == 1 { "rejected" } else { "error" };
            eprintln!("{prefix}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
