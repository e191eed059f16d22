use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use moncat_cli::{parse_file, run_command, Command};

/// Regular and context-free languages of string diagrams.
#[derive(Parser)]
#[command(name = "moncat", version)]
struct Cli {
    /// Workspace file; the shipped corpus when omitted.
    #[arg(short, long)]
    file: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ws = match &cli.file {
        Some(path) => parse_file(path),
        None => moncat_core::corpus::all(),
    };
    match ws.and_then(|ws| run_command(&ws, &cli.command)) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("moncat: {e}");
            ExitCode::from(2)
        }
    }
}
