use std::io::Write;
use std::process::ExitCode;

use charp_zeros_cli::{exit_code, hint, resolve, run_command, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(cli).and_then(|cfg| run_command(&cfg));
    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("hint: {}", hint(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
