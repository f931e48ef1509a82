mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::{Cli, RunConfig};
use error::CliError;

fn emit_error(e: &CliError) -> ExitCode {
    println!("{}", serde_json::to_string_pretty(&e.record()).unwrap());
    ExitCode::from(e.status() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            return emit_error(&CliError::Parse(first.to_string()));
        }
    };
    let cfg = match RunConfig::resolve(cli) {
        Ok(c) => c,
        Err(e) => return emit_error(&e),
    };
    if let Some(j) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .expect("thread pool configured once");
    }
    let out = match commands::run(&cfg) {
        Ok(o) => o,
        Err(e) => return emit_error(&e),
    };
    let text = serde_json::to_string_pretty(&out.json).unwrap() + "\n";
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return emit_error(&CliError::Io(format!("{}: {e}", path.display())));
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(out.status as u8)
}
