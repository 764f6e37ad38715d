use std::process::ExitCode;

use clap::Parser;
use pcoh::cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    let text = render(&out.report);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if let Some(msg) = out.report.get("error").and_then(|v| v.as_str()) {
        eprintln!("error: {msg}");
    }
    ExitCode::from(out.code as u8)
}
