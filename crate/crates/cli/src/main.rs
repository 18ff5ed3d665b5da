use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use equichar_cli::{exit, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(outcome) => {
            for (path, contents) in &outcome.files {
                if let Err(e) = fs::write(path, contents) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(exit::PARSE as u8);
                }
            }
            print(&outcome.stdout);
            outcome.code
        }
        Err(e) => {
            if let Some(stdout) = &e.stdout {
                print(stdout);
            }
            eprintln!("error: {e}");
            e.code
        }
    };
    ExitCode::from(code as u8)
}

fn print(s: &str) {
    let mut out = io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}
