use std::process::ExitCode;

use clap::Parser;
use proetale_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    if let Some(msg) = outcome
        .body
        .pointer("/error/message")
        .and_then(|m| m.as_str())
    {
        eprintln!("error: {msg}");
    }
    ExitCode::from(emit(&outcome, cli.global.output.as_deref()))
}
